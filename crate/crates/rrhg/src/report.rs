//! CSV, JSON and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

/// Rows as CSV with a header line and `\n` line endings.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub rrhg: &'static str,
    pub rrhg_core: &'static str,
}

pub const VERSIONS: Versions = Versions {
    rrhg: env!("CARGO_PKG_VERSION"),
    rrhg_core: rrhg_core::VERSION,
};

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord<T: Serialize> {
    pub experiment: String,
    pub versions: Versions,
    pub master_seed: u64,
    pub params: BTreeMap<String, serde_json::Value>,
    pub trials: u64,
    pub rows: Vec<T>,
    pub wall_time_ms: u128,
}

impl<T: Serialize> ExperimentRecord<T> {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Numeric columns of a CSV table, keyed by header.
pub fn read_columns(text: &str) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    let mut cols: BTreeMap<String, Vec<f64>> = headers.iter().map(|h| (h.clone(), Vec::new())).collect();
    for rec in rdr.records() {
        let rec = rec?;
        for (h, field) in headers.iter().zip(rec.iter()) {
            cols.get_mut(h).expect("header").push(field.parse().unwrap_or(f64::NAN));
        }
    }
    Ok(cols)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn fmt_tick(v: f64) -> String {
    if v == v.round() && v.abs() < 1e9 {
        format!("{}", v as i64)
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Line plot of the `ys` columns against `x`, as a standalone SVG 1.1
/// document.
pub fn svg_line_plot(csv_text: &str, x: &str, ys: &[&str], title: &str) -> Result<String> {
    let cols = read_columns(csv_text)?;
    let xs = cols.get(x).with_context(|| format!("no column {x:?}"))?;
    if xs.is_empty() {
        bail!("table has no rows");
    }
    let series: Vec<(&str, &Vec<f64>)> = ys
        .iter()
        .map(|&y| cols.get(y).map(|c| (y, c)).with_context(|| format!("no column {y:?}")))
        .collect::<Result<_>>()?;
    let finite = |v: &&f64| v.is_finite();
    let (x_lo, x_hi) = bounds(xs.iter().filter(finite).copied());
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|(_, c)| c.iter().filter(finite).copied()).chain([0.0]));
    let sx = |v: f64| MARGIN + (v - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |v: f64| HEIGHT - MARGIN - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<path d="M{left} {top} V{bottom} H{right}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x_lo + t * (x_hi - x_lo), y_lo + t * (y_hi - y_lo));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{bottom}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#,
            bottom + 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            bottom + 18.0,
            fmt_tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{left}" y2="{py:.1}" stroke="black"/>"#,
            left - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            left - 8.0,
            py + 4.0,
            fmt_tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x)
    );
    for (k, (name, col)) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(col.iter())
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(&a, &b)| format!("{:.1},{:.1}", sx(a), sy(b)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for p in &pts {
            let (cx, cy) = p.split_once(',').expect("pair");
            let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{colour}"/>"#);
        }
        let ly = top + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2"/>"#,
            right - 120.0,
            right - 100.0
        );
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, right - 94.0, ly + 4.0, escape(name));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        d: usize,
        frequency: f64,
        note: Option<f64>,
    }

    #[test]
    fn csv_shape() {
        let rows = [
            Row {
                d: 2,
                frequency: 0.25,
                note: None,
            },
            Row {
                d: 3,
                frequency: 1.0,
                note: Some(0.5),
            },
        ];
        assert_eq!(to_csv(&rows).unwrap(), "d,frequency,note\n2,0.25,\n3,1.0,0.5\n");
    }

    #[test]
    fn svg_from_csv() {
        let svg = svg_line_plot("d,frequency\n2,0\n3,0.5\n4,1\n", "d", &["frequency"], "a < b").unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg_line_plot("d\n1\n", "d", &["missing"], "").is_err());
    }
}
