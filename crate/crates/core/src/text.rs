//! Plain-text hypergraph files.
//!
//! ```text
//! n r m
//! v1 v2 ... vr
//! ...
//! ```
//!
//! One header line, then `m` edge lines of `r` strictly ascending 0-based
//! vertices separated by single spaces. Every line ends with `\n`. Edge
//! order is kept, so parsing then serializing returns the same bytes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

use crate::hypergraph::{EdgeKey, Hypergraph, HypergraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("header must be \"n r m\"")]
    BadHeader,
    #[error("expected {expected} fields, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("not a canonical non-negative integer: {0:?}")]
    BadNumber(String),
    #[error("vertices must be strictly ascending")]
    NotAscending,
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing final newline")]
    MissingNewline,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn number(field: &str) -> Result<usize, ParseErrorKind> {
    let canonical = !field.is_empty() && field.bytes().all(|b| b.is_ascii_digit()) && (field == "0" || !field.starts_with('0'));
    canonical
        .then(|| field.parse().ok())
        .flatten()
        .ok_or_else(|| ParseErrorKind::BadNumber(field.into()))
}

fn fields(line: &str, expected: usize) -> Result<Vec<usize>, ParseErrorKind> {
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != expected {
        return Err(ParseErrorKind::Arity {
            expected,
            found: parts.iter().filter(|p| !p.is_empty()).count(),
        });
    }
    parts.into_iter().map(number).collect()
}

pub fn parse(text: &str) -> Result<Hypergraph, ParseError> {
    let at = |line: usize| move |kind: ParseErrorKind| ParseError { line, kind };
    if !text.ends_with('\n') {
        let line = text.split('\n').count();
        return Err(at(line)(ParseErrorKind::MissingNewline));
    }
    let mut lines = text[..text.len() - 1].split('\n');
    let header = lines.next().unwrap_or_default();
    let h = fields(header, 3).map_err(|_| at(1)(ParseErrorKind::BadHeader))?;
    let (n, r, m) = (h[0], h[1], h[2]);
    let mut g = Hypergraph::empty(n, r).map_err(|e| at(1)(e.into()))?;
    let mut count = 0;
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if count == m {
            return Err(at(lineno)(ParseErrorKind::EdgeCount {
                expected: m,
                found: count + 1,
            }));
        }
        let vs: Vec<Vertex> = fields(line, r).map_err(at(lineno))?;
        if vs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(at(lineno)(ParseErrorKind::NotAscending));
        }
        let key = EdgeKey::new(&vs).map_err(|e| at(lineno)(e.into()))?;
        g.add_edge(key).map_err(|e| at(lineno)(e.into()))?;
        count += 1;
    }
    if count != m {
        return Err(at(count + 2)(ParseErrorKind::EdgeCount { expected: m, found: count }));
    }
    Ok(g)
}

pub fn serialize(g: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.n(), g.r(), g.len());
    for e in g.edges() {
        let mut first = true;
        for v in e.vertices() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_disjoint_edges() {
        let g = parse("4 2 2\n0 1\n2 3\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(serialize(&g), "4 2 2\n0 1\n2 3\n");
    }

    #[test]
    fn keeps_edge_order() {
        let text = "5 3 2\n2 3 4\n0 1 2\n";
        assert_eq!(serialize(&parse(text).unwrap()), text);
    }

    #[test]
    fn rejections() {
        let e = parse("4 3 1\n0 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::Arity { expected: 3, found: 2 }));
        assert_eq!(parse("4 2 1\n1 0\n").unwrap_err().kind, ParseErrorKind::NotAscending);
        assert_eq!(parse("4 2 1\n0 1").unwrap_err().kind, ParseErrorKind::MissingNewline);
        assert!(matches!(parse("4 2 2\n0 1\n").unwrap_err().kind, ParseErrorKind::EdgeCount { .. }));
        assert!(matches!(parse("4 2 1\n0  1\n").unwrap_err().kind, ParseErrorKind::Arity { .. }));
        assert!(matches!(parse("4 2 1\n0 01\n").unwrap_err().kind, ParseErrorKind::BadNumber(_)));
        assert!(matches!(parse("4 2 1\n0 4\n").unwrap_err().kind, ParseErrorKind::Hypergraph(_)));
        assert!(matches!(
            parse("4 2 2\n0 1\n0 1\n").unwrap_err().kind,
            ParseErrorKind::Hypergraph(_)
        ));
        assert_eq!(parse("4 2\n").unwrap_err().kind, ParseErrorKind::BadHeader);
    }
}
