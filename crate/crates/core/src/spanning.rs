//! Overlapping cycles and Hamilton cycles, the square lattice, and the
//! structural quantities of a pattern used by the testers: distance layers,
//! the class `F_E`, the vertex-overlap index `ℓ(F)`, `β(F)` and exact
//! Turán numbers.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::census;
use crate::combinatorics::{binomial_f64, factorial_f64, Combinations};
use crate::hypergraph::{EdgeKey, Hypergraph, HypergraphError, Vertex};

pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;
const MAX_OVERLAP_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanningError {
    #[error("{step} = r − overlap does not divide n = {n}")]
    Divisibility { n: usize, step: usize },
    #[error("overlap {overlap} must lie in 0..r (r = {r})")]
    InvalidOverlap { r: usize, overlap: usize },
    #[error("the windows of C_{n}^{overlap} coincide; no such cycle")]
    Degenerate { n: usize, overlap: usize },
    #[error("search exceeded its budget of {0} nodes")]
    TooLarge(u64),
    #[error("pattern is disconnected or has isolated vertices")]
    Disconnected,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn check_cycle_params(n: usize, r: usize, overlap: usize) -> Result<usize, SpanningError> {
    if overlap >= r {
        return Err(SpanningError::InvalidOverlap { r, overlap });
    }
    let step = r - overlap;
    if !n.is_multiple_of(step) {
        return Err(SpanningError::Divisibility { n, step });
    }
    if n < r {
        return Err(HypergraphError::InvalidParameters { n, r }.into());
    }
    Ok(step)
}

/// `C_n^ℓ` on `0..n`: edge `j` is `{j(r−ℓ), …, j(r−ℓ)+r−1} mod n`.
///
/// `ℓ = 0` gives a perfect matching.
pub fn overlap_cycle_pattern(n: usize, r: usize, overlap: usize) -> Result<Hypergraph, SpanningError> {
    let step = check_cycle_params(n, r, overlap)?;
    let edges = (0..n / step).map(|j| (0..r).map(|i| (j * step + i) % n).collect::<Vec<Vertex>>());
    Hypergraph::new(n, r, edges).map_err(|e| match e {
        HypergraphError::DuplicateEdge(_) => SpanningError::Degenerate { n, overlap },
        other => other.into(),
    })
}

/// A realised `C_n^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePattern {
    pub n: usize,
    pub r: usize,
    pub overlap: usize,
    pub graph: Hypergraph,
}

impl CyclePattern {
    pub fn new(n: usize, r: usize, overlap: usize) -> Result<Self, SpanningError> {
        Ok(CyclePattern {
            n,
            r,
            overlap,
            graph: overlap_cycle_pattern(n, r, overlap)?,
        })
    }
}

/// Spanning `ℓ`-overlapping cycles of `G`, found by extending cyclic
/// vertex orderings that start at vertex 0.
struct HamiltonSearch<'a> {
    g: &'a Hypergraph,
    step: usize,
    edges_per_cycle: usize,
    offset: usize,
    order: Vec<Vertex>,
    used: Vec<bool>,
    found: BTreeSet<Vec<EdgeKey>>,
    stop_at_first: bool,
    nodes: u64,
    budget: u64,
}

impl HamiltonSearch<'_> {
    fn window(&self, start: usize) -> EdgeKey {
        let n = self.g.n();
        let mut vs: Vec<Vertex> = (0..self.g.r()).map(|i| self.order[(start + i) % n]).collect();
        vs.sort_unstable();
        EdgeKey::from_sorted(vs)
    }

    /// Window starts `offset + j·step`; the window ending at position `i`
    /// (without wrapping) is checked as soon as `i` is filled.
    fn window_ending_at(&self, i: usize) -> Option<usize> {
        let r = self.g.r();
        let start = (i + 1).checked_sub(r)?;
        (start >= self.offset && (start - self.offset).is_multiple_of(self.step)).then_some(start)
    }

    fn extend(&mut self) -> Result<bool, SpanningError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SpanningError::TooLarge(self.budget));
        }
        let n = self.g.n();
        let i = self.order.len();
        if i == n {
            let mut edges: Vec<EdgeKey> = (0..self.edges_per_cycle)
                .map(|j| self.window(self.offset + j * self.step))
                .collect();
            if edges.iter().any(|e| !self.g.contains(e)) {
                return Ok(false);
            }
            edges.sort();
            if edges.windows(2).any(|w| w[0] == w[1]) {
                return Ok(false);
            }
            self.found.insert(edges);
            return Ok(self.stop_at_first);
        }
        let prev = self.order[i - 1];
        let mut candidates: Vec<Vertex> = self
            .g
            .incidence(prev)
            .iter()
            .flat_map(|&ei| self.g.edge(ei).vertices().iter().copied())
            .filter(|&w| !self.used[w])
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        for w in candidates {
            self.order.push(w);
            self.used[w] = true;
            let ok = self.window_ending_at(i).is_none_or(|s| self.g.contains(&self.window(s)));
            let done = if ok { self.extend()? } else { false };
            self.used[w] = false;
            self.order.pop();
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn hamilton_search(g: &Hypergraph, overlap: usize, stop_at_first: bool, budget: u64) -> Result<BTreeSet<Vec<EdgeKey>>, SpanningError> {
    let n = g.n();
    let r = g.r();
    let step = check_cycle_params(n, r, overlap)?;
    let mut search = HamiltonSearch {
        g,
        step,
        edges_per_cycle: n / step,
        offset: 0,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        found: BTreeSet::new(),
        stop_at_first,
        nodes: 0,
        budget,
    };
    // rotating by whole steps fixes the cycle, so vertex 0 can be assumed
    // to sit in the first block
    for offset in 0..step {
        search.offset = offset;
        search.order.push(0);
        search.used[0] = true;
        let done = search.extend()?;
        search.used[0] = false;
        search.order.clear();
        if done {
            break;
        }
    }
    Ok(search.found)
}

pub fn has_hamilton(g: &Hypergraph, overlap: usize, budget: u64) -> Result<bool, SpanningError> {
    Ok(!hamilton_search(g, overlap, true, budget)?.is_empty())
}

/// Number of distinct spanning `C_n^ℓ` subgraphs (edge sets).
pub fn count_hamilton(g: &Hypergraph, overlap: usize, budget: u64) -> Result<u64, SpanningError> {
    Ok(hamilton_search(g, overlap, false, budget)?.len() as u64)
}

/// Some spanning `C_n^ℓ` of `G`, as its edge set.
pub fn find_hamilton(g: &Hypergraph, overlap: usize, budget: u64) -> Result<Option<Vec<EdgeKey>>, SpanningError> {
    Ok(hamilton_search(g, overlap, true, budget)?.into_iter().next())
}

/// Leading term `n!·p^{n/(r−ℓ)}` with `p = d/C(n−1, r−1)`.
pub fn expected_hamilton(n: usize, r: usize, overlap: usize, d: usize) -> Result<f64, SpanningError> {
    let step = check_cycle_params(n, r, overlap)?;
    let p = d as f64 / binomial_f64((n - 1) as u64, (r - 1) as u64);
    Ok(factorial_f64(n as u64) * libm::pow(p, (n / step) as f64))
}

/// The `k × k` square lattice graph; vertex `(i, j)` is `i·k + j`.
pub fn lattice_pattern(k: usize) -> Hypergraph {
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if j + 1 < k {
                edges.push([i * k + j, i * k + j + 1]);
            }
            if i + 1 < k {
                edges.push([i * k + j, (i + 1) * k + j]);
            }
        }
    }
    Hypergraph::new(k * k, 2, edges).expect("k >= 2")
}

/// Two copies of `F` on `0..v` and the images under `map`, sharing
/// exactly the mapped vertices and no edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapWitness {
    /// `map[u] = Some(w)`: vertex `u` of the second copy is vertex `w` of
    /// the first; unmapped vertices are fresh.
    pub map: Vec<Option<Vertex>>,
}

impl OverlapWitness {
    pub fn shared(&self) -> usize {
        self.map.iter().flatten().count()
    }

    /// The second copy's edges on the merged vertex set, fresh vertices
    /// numbered from `v_F`.
    pub fn second_copy(&self, f: &Hypergraph) -> Vec<EdgeKey> {
        let mut fresh = f.n();
        let labels: Vec<Vertex> = self
            .map
            .iter()
            .map(|m| {
                m.unwrap_or_else(|| {
                    fresh += 1;
                    fresh - 1
                })
            })
            .collect();
        f.edges().iter().map(|e| e.map(|v| labels[v])).collect()
    }

    /// Whether the witness really is an edge-disjoint pair of copies.
    pub fn verify(&self, f: &Hypergraph) -> bool {
        let mut targets: Vec<Vertex> = self.map.iter().flatten().copied().collect();
        targets.sort_unstable();
        let injective = targets.windows(2).all(|w| w[0] != w[1]);
        injective && self.map.len() == f.n() && self.second_copy(f).iter().all(|e| !f.contains(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapIndex {
    pub ell: usize,
    /// Edge-disjoint pair sharing `ell − 1` vertices (absent when `ell = 1`).
    pub witness: Option<OverlapWitness>,
}

/// `ℓ(F)`: least `s` such that two copies of `F` sharing `s` vertices must
/// share an edge, or `v_F + 1`.
///
/// Edge-disjoint pairs stay edge-disjoint when a shared vertex is split, so
/// `ℓ(F) − 1` is the largest overlap of an edge-disjoint pair. That overlap
/// is found by branch and bound over partial injections of `V(F)` into
/// itself.
pub fn vertex_overlap_index(f: &Hypergraph) -> Result<OverlapIndex, SpanningError> {
    let v = f.n();
    if v > MAX_OVERLAP_VERTICES {
        return Err(SpanningError::TooLarge(MAX_OVERLAP_VERTICES as u64));
    }
    let mut state = OverlapSearch {
        f,
        map: vec![None; v],
        used: vec![false; v],
        best: None,
        best_size: 0,
    };
    state.search(0, 0);
    let best_size = state.best_size;
    let witness = state.best.map(|map| OverlapWitness { map });
    Ok(OverlapIndex {
        ell: best_size + 1,
        witness: if best_size == 0 { None } else { witness },
    })
}

struct OverlapSearch<'a> {
    f: &'a Hypergraph,
    map: Vec<Option<Vertex>>,
    used: Vec<bool>,
    best: Option<Vec<Option<Vertex>>>,
    best_size: usize,
}

impl OverlapSearch<'_> {
    /// Edges whose vertices are all decided by now (vertex `u` was last)
    /// and all mapped must not land on edges of `F`.
    fn consistent(&self, u: Vertex) -> bool {
        self.f.incidence(u).iter().all(|&ei| {
            let e = self.f.edge(ei);
            if e.vertices().iter().any(|&x| x > u) {
                return true;
            }
            let image: Option<Vec<Vertex>> = e.vertices().iter().map(|&x| self.map[x]).collect();
            match image {
                Some(mut vs) => {
                    vs.sort_unstable();
                    !self.f.contains(&EdgeKey::from_sorted(vs))
                }
                None => true,
            }
        })
    }

    fn search(&mut self, u: Vertex, size: usize) {
        let v = self.f.n();
        if u == v {
            if self.best.is_none() || size > self.best_size {
                self.best_size = size;
                self.best = Some(self.map.clone());
            }
            return;
        }
        if self.best.is_some() && size + (v - u) <= self.best_size {
            return;
        }
        for w in 0..v {
            if self.used[w] {
                continue;
            }
            self.map[u] = Some(w);
            self.used[w] = true;
            if self.consistent(u) {
                self.search(u + 1, size + 1);
            }
            self.used[w] = false;
            self.map[u] = None;
            if self.best_size == v {
                return;
            }
        }
        self.search(u + 1, size);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternAnalysis {
    pub diameter: usize,
    /// `layers[i][j]` is `V_j(e_i)`: vertices at distance `j` from edge
    /// `e_i`, for `j = 0..=D_F`.
    pub layers: Vec<Vec<Vec<Vertex>>>,
    pub in_fe: bool,
    pub ell: usize,
    pub ell_witness: Option<OverlapWitness>,
    /// `(v_F − r)/(e_F − 1)`; undefined for a single edge.
    pub beta: Option<f64>,
}

/// Distance layers of `F` around edge `e`, from `V_0(e) = e` up to
/// `V_{depth}(e)`.
pub fn edge_layers(f: &Hypergraph, e: &EdgeKey, depth: usize) -> Vec<Vec<Vertex>> {
    let dist = f.distances_from_set(e.vertices());
    let mut layers = vec![Vec::new(); depth + 1];
    for (u, d) in dist.into_iter().enumerate() {
        if let Some(d) = d {
            if d <= depth {
                layers[d].push(u);
            }
        }
    }
    layers
}

pub fn beta(f: &Hypergraph) -> Option<f64> {
    (f.len() > 1).then(|| (f.n() as f64 - f.r() as f64) / (f.len() as f64 - 1.0))
}

pub fn analyze_pattern(f: &Hypergraph) -> Result<PatternAnalysis, SpanningError> {
    let diameter = f.diameter().finite().ok_or(SpanningError::Disconnected)?;
    if f.is_empty() {
        return Err(SpanningError::Disconnected);
    }
    let layers: Vec<Vec<Vec<Vertex>>> = f.edges().iter().map(|e| edge_layers(f, e, diameter)).collect();
    let in_fe = layers.iter().all(|l| f.induced_edges(&l[diameter]).is_empty());
    let overlap = vertex_overlap_index(f)?;
    Ok(PatternAnalysis {
        diameter,
        layers,
        in_fe,
        ell: overlap.ell,
        ell_witness: overlap.witness,
        beta: beta(f),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extremal {
    pub ex: usize,
    /// An `F`-free `r`-graph on `n` vertices with `ex` edges.
    pub witness: Hypergraph,
    /// `r − β(F)`.
    pub exponent: Option<f64>,
}

/// `ex(n, F)` by branch and bound over the `r`-sets, keeping the graph
/// `F`-free at every step.
pub fn extremal_number_exact(n: usize, f: &Hypergraph, budget: u64) -> Result<Extremal, SpanningError> {
    let r = f.r();
    let sets: Vec<EdgeKey> = Combinations::new(n, r).map(EdgeKey::from_sorted).collect();
    let mut search = ExtremalSearch {
        f,
        sets,
        current: Hypergraph::empty(n, r)?,
        best: Hypergraph::empty(n, r)?,
        nodes: 0,
        budget,
    };
    // any nonempty F-free graph can be relabelled to contain the first set
    if let Some(first) = search.sets.first().cloned() {
        search.current.add_edge(first.clone())?;
        if census::find_copy_through(&search.current, f, &first).is_none() {
            search.best = search.current.clone();
            search.branch(1)?;
        }
        search.current.pop_edge();
    }
    Ok(Extremal {
        ex: search.best.len(),
        witness: search.best,
        exponent: beta(f).map(|b| r as f64 - b),
    })
}

struct ExtremalSearch<'a> {
    f: &'a Hypergraph,
    sets: Vec<EdgeKey>,
    current: Hypergraph,
    best: Hypergraph,
    nodes: u64,
    budget: u64,
}

impl ExtremalSearch<'_> {
    fn branch(&mut self, i: usize) -> Result<(), SpanningError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SpanningError::TooLarge(self.budget));
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if i == self.sets.len() || self.current.len() + (self.sets.len() - i) <= self.best.len() {
            return Ok(());
        }
        let e = self.sets[i].clone();
        self.current.add_edge(e.clone())?;
        if census::find_copy_through(&self.current, self.f, &e).is_none() {
            self.branch(i + 1)?;
        }
        self.current.pop_edge();
        self.branch(i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns;

    #[test]
    fn cycle_patterns() {
        let c = overlap_cycle_pattern(6, 3, 1).unwrap();
        assert_eq!(
            c.edges(),
            &[EdgeKey::from([0, 1, 2]), EdgeKey::from([2, 3, 4]), EdgeKey::from([0, 4, 5])]
        );
        let t = overlap_cycle_pattern(5, 3, 2).unwrap();
        assert_eq!(t.len(), 5);
        assert!(t.is_regular(3));
        assert_eq!(
            overlap_cycle_pattern(7, 3, 1).unwrap_err(),
            SpanningError::Divisibility { n: 7, step: 2 }
        );
        assert!(overlap_cycle_pattern(3, 3, 2).is_err());
    }

    #[test]
    fn hamilton_counts() {
        for (n, want) in [(4, 3), (5, 12), (6, 60)] {
            let k = Hypergraph::complete(n, 2).unwrap();
            assert_eq!(count_hamilton(&k, 1, DEFAULT_SEARCH_BUDGET).unwrap(), want);
        }
        let c = overlap_cycle_pattern(6, 3, 1).unwrap();
        assert!(has_hamilton(&c, 1, DEFAULT_SEARCH_BUDGET).unwrap());
        assert_eq!(count_hamilton(&c, 1, DEFAULT_SEARCH_BUDGET).unwrap(), 1);
        let two = Hypergraph::new(6, 2, [[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]]).unwrap();
        assert!(!has_hamilton(&two, 1, DEFAULT_SEARCH_BUDGET).unwrap());
        let tight = overlap_cycle_pattern(7, 3, 2).unwrap();
        assert_eq!(count_hamilton(&tight, 2, DEFAULT_SEARCH_BUDGET).unwrap(), 1);
    }

    #[test]
    fn hamilton_formula() {
        let e = expected_hamilton(6, 3, 1, 10).unwrap();
        assert!((e - 720.0).abs() < 1e-9);
        let g = expected_hamilton(5, 2, 1, 2).unwrap();
        assert!((g - 120.0 * 0.5f64.powi(5)).abs() < 1e-9);
    }

    #[test]
    fn lattices() {
        let l2 = lattice_pattern(2);
        assert_eq!(l2.len(), 4);
        assert_eq!(census::count_copies(&l2, &patterns::cycle_graph(4)), 1);
        let l3 = lattice_pattern(3);
        assert_eq!(l3.len(), 12);
        assert_eq!(l3.degrees().into_iter().collect::<BTreeSet<_>>(), BTreeSet::from([2, 3, 4]));
        assert_eq!(lattice_pattern(5).len(), 40);
    }

    #[test]
    fn overlap_indices() {
        assert_eq!(vertex_overlap_index(&patterns::complete(4, 2)).unwrap().ell, 2);
        assert_eq!(vertex_overlap_index(&patterns::complete(4, 3)).unwrap().ell, 3);
        assert_eq!(vertex_overlap_index(&patterns::triangle()).unwrap().ell, 2);
        let c4 = vertex_overlap_index(&patterns::cycle_graph(4)).unwrap();
        assert_eq!(c4.ell, 3);
        assert!(c4.witness.unwrap().verify(&patterns::cycle_graph(4)));
        let m = patterns::matching(2, 2);
        assert_eq!(vertex_overlap_index(&m).unwrap().ell, 5);
    }

    #[test]
    fn pattern_analysis() {
        let tight = analyze_pattern(&overlap_cycle_pattern(5, 3, 2).unwrap()).unwrap();
        assert!(tight.in_fe);
        let loose = analyze_pattern(&overlap_cycle_pattern(6, 3, 1).unwrap()).unwrap();
        assert!(loose.in_fe);
        let c4 = analyze_pattern(&patterns::cycle_graph(4)).unwrap();
        assert!(c4.in_fe);
        assert_eq!(c4.diameter, 2);
        assert_eq!(analyze_pattern(&patterns::matching(2, 2)).unwrap_err(), SpanningError::Disconnected);
        assert_eq!(beta(&patterns::triangle()), Some(0.5));
        assert_eq!(beta(&patterns::single_edge(3)), None);
        // path on 5 edges: the far layer from the middle edge is {0, 5}, no edge
        let p5 = analyze_pattern(&patterns::path_graph(5)).unwrap();
        assert_eq!(p5.diameter, 5);
    }

    #[test]
    fn extremal_numbers() {
        let t = extremal_number_exact(5, &patterns::triangle(), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(t.ex, 6);
        assert!(!census::contains_copy(&t.witness, &patterns::triangle()));
        assert_eq!(
            extremal_number_exact(5, &patterns::single_edge(2), DEFAULT_SEARCH_BUDGET)
                .unwrap()
                .ex,
            0
        );
        assert_eq!(
            extremal_number_exact(5, &patterns::cycle_graph(4), DEFAULT_SEARCH_BUDGET)
                .unwrap()
                .ex,
            6
        );
        assert_eq!(
            extremal_number_exact(6, &patterns::triangle(), DEFAULT_SEARCH_BUDGET).unwrap().ex,
            9
        );
    }
}
