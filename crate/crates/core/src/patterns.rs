//! Small fixed hypergraphs used as patterns.

use alloc::vec::Vec;

use crate::hypergraph::{Hypergraph, Vertex};

pub fn single_edge(r: usize) -> Hypergraph {
    Hypergraph::new(r, r, [(0..r).collect::<Vec<_>>()]).expect("valid")
}

/// `K_k^{(r)}`.
pub fn complete(k: usize, r: usize) -> Hypergraph {
    Hypergraph::complete(k, r).expect("k >= r >= 2")
}

pub fn triangle() -> Hypergraph {
    complete(3, 2)
}

/// Graph cycle `C_k`, `k >= 3`.
pub fn cycle_graph(k: usize) -> Hypergraph {
    Hypergraph::new(k, 2, (0..k).map(|i| [i, (i + 1) % k])).expect("k >= 3")
}

/// Graph path with `k` edges.
pub fn path_graph(k: usize) -> Hypergraph {
    Hypergraph::new(k + 1, 2, (0..k).map(|i| [i, i + 1])).expect("k >= 1")
}

/// `k` pairwise disjoint `r`-edges.
pub fn matching(k: usize, r: usize) -> Hypergraph {
    Hypergraph::new(k * r, r, (0..k).map(|i| (i * r..(i + 1) * r).collect::<Vec<Vertex>>())).expect("valid")
}

/// Triangle with one pendant edge at vertex 0.
pub fn triangle_with_pendant() -> Hypergraph {
    Hypergraph::new(4, 2, [[0, 1], [1, 2], [2, 0], [0, 3]]).expect("valid")
}

/// Loose path: `k` edges, consecutive ones sharing one vertex.
pub fn loose_path(k: usize, r: usize) -> Hypergraph {
    let n = k * (r - 1) + 1;
    Hypergraph::new(n, r, (0..k).map(|j| (j * (r - 1)..j * (r - 1) + r).collect::<Vec<Vertex>>())).expect("valid")
}

/// Pattern by name: `edge:R`, `triangle`, `c4`, `cK`, `kK`, `kK:R`,
/// `pathK`, `matchingK:R`, `triangle+pendant`, `loose-cycle:N:R`,
/// `tight-cycle:N:R`, `lattice:K`.
pub fn by_name(name: &str) -> Option<Hypergraph> {
    let mut parts = name.split(':');
    let head = parts.next()?;
    let args: Vec<usize> = parts.map(|p| p.parse().ok()).collect::<Option<Vec<_>>>()?;
    let arg = |i: usize, default: usize| args.get(i).copied().unwrap_or(default);
    let lead_num = |prefix: &str| head.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    match head {
        "edge" => (arg(0, 2) >= 2).then(|| single_edge(arg(0, 2))),
        "triangle" => Some(triangle()),
        "triangle+pendant" => Some(triangle_with_pendant()),
        "loose-cycle" | "tight-cycle" => {
            let (n, r) = (args.first().copied()?, arg(1, 3));
            if r < 2 {
                return None;
            }
            let overlap = if head == "loose-cycle" { 1 } else { r - 1 };
            crate::spanning::overlap_cycle_pattern(n, r, overlap).ok()
        }
        "lattice" => (arg(0, 0) >= 2).then(|| crate::spanning::lattice_pattern(arg(0, 0))),
        _ => {
            if let Some(k) = lead_num("matching") {
                let r = arg(0, 2);
                return (k >= 1 && r >= 2).then(|| matching(k, r));
            }
            if let Some(k) = lead_num("path") {
                return (k >= 1).then(|| path_graph(k));
            }
            if let Some(k) = lead_num("c") {
                return (k >= 3).then(|| cycle_graph(k));
            }
            if let Some(k) = lead_num("k") {
                let r = arg(0, 2);
                return (r >= 2 && k >= r).then(|| complete(k, r));
            }
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_patterns() {
        assert_eq!(by_name("triangle").unwrap().len(), 3);
        assert_eq!(by_name("c4").unwrap().len(), 4);
        assert_eq!(by_name("k4:3").unwrap().len(), 4);
        assert_eq!(by_name("edge:3").unwrap().r(), 3);
        assert_eq!(by_name("tight-cycle:5:3").unwrap().len(), 5);
        assert_eq!(by_name("loose-cycle:6:3").unwrap().len(), 3);
        assert_eq!(by_name("matching2:2").unwrap().n(), 4);
        assert!(by_name("c2").is_none());
        assert!(by_name("nonsense").is_none());
    }

    #[test]
    fn loose_path_shape() {
        let p = loose_path(2, 3);
        assert_eq!(p.n(), 5);
        assert!(p.is_weak_forest());
    }
}
