//! `r`-uniform hypergraphs with per-vertex ordered incidence lists.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::combinatorics::Combinations;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("invalid parameters: need n >= r >= 2 (got n = {n}, r = {r})")]
    InvalidParameters { n: usize, r: usize },
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeKey),
    #[error("edge arity: expected {expected} distinct vertices, got {found:?}")]
    EdgeArity { expected: usize, found: Vec<Vertex> },
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

/// An edge: a strictly ascending tuple of vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeKey(Vec<Vertex>);

impl EdgeKey {
    /// Sorts `vertices`; fails if a vertex repeats.
    pub fn new(vertices: &[Vertex]) -> Result<EdgeKey, HypergraphError> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(HypergraphError::EdgeArity {
                expected: vertices.len(),
                found: vertices.to_vec(),
            });
        }
        Ok(EdgeKey(vs))
    }

    /// Caller guarantees `vertices` is strictly ascending.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> EdgeKey {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        EdgeKey(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn intersection_size(&self, other: &EdgeKey) -> usize {
        let (mut i, mut j, mut k) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    k += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        k
    }

    pub fn is_disjoint(&self, other: &EdgeKey) -> bool {
        self.intersection_size(other) == 0
    }

    /// Image of the edge under a vertex map.
    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> EdgeKey {
        let mut vs: Vec<Vertex> = self.0.iter().map(|&v| f(v)).collect();
        vs.sort_unstable();
        EdgeKey(vs)
    }
}

impl<const N: usize> From<[Vertex; N]> for EdgeKey {
    /// Panics on a repeated vertex.
    fn from(vs: [Vertex; N]) -> Self {
        EdgeKey::new(&vs).expect("repeated vertex in edge literal")
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Distance between two vertices; `Infinite` when no path joins them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(k) => Some(k),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(k) => write!(f, "{k}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// An `r`-uniform hypergraph on vertices `0..n`.
///
/// Edges keep their insertion order, and `incidence[v]` lists the indices
/// of the edges through `v` in that same order. The incidence order is the
/// edge labelling seen by neighbour queries.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<EdgeKey>,
    index: BTreeMap<EdgeKey, usize>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    pub fn new<I, E>(n: usize, r: usize, edges: I) -> Result<Hypergraph, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        let mut g = Hypergraph::empty(n, r)?;
        for e in edges {
            g.push_edge(e.as_ref())?;
        }
        Ok(g)
    }

    /// Hypergraph with no edges.
    pub fn empty(n: usize, r: usize) -> Result<Hypergraph, HypergraphError> {
        if r < 2 || n < r {
            return Err(HypergraphError::InvalidParameters { n, r });
        }
        Ok(Hypergraph {
            n,
            r,
            edges: Vec::new(),
            index: BTreeMap::new(),
            incidence: vec![Vec::new(); n],
        })
    }

    pub fn from_edge_keys(n: usize, r: usize, edges: impl IntoIterator<Item = EdgeKey>) -> Result<Hypergraph, HypergraphError> {
        let mut g = Hypergraph::empty(n, r)?;
        for e in edges {
            g.push_key(e)?;
        }
        Ok(g)
    }

    fn push_edge(&mut self, vertices: &[Vertex]) -> Result<(), HypergraphError> {
        if vertices.len() != self.r {
            return Err(HypergraphError::EdgeArity {
                expected: self.r,
                found: vertices.to_vec(),
            });
        }
        let key = EdgeKey::new(vertices).map_err(|_| HypergraphError::EdgeArity {
            expected: self.r,
            found: vertices.to_vec(),
        })?;
        self.push_key(key)
    }

    fn push_key(&mut self, key: EdgeKey) -> Result<(), HypergraphError> {
        if key.len() != self.r {
            return Err(HypergraphError::EdgeArity {
                expected: self.r,
                found: key.0,
            });
        }
        if let Some(&v) = key.0.iter().find(|&&v| v >= self.n) {
            return Err(HypergraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if self.index.contains_key(&key) {
            return Err(HypergraphError::DuplicateEdge(key));
        }
        let idx = self.edges.len();
        for &v in &key.0 {
            self.incidence[v].push(idx);
        }
        self.index.insert(key.clone(), idx);
        self.edges.push(key);
        Ok(())
    }

    /// Appends an edge.
    pub fn add_edge(&mut self, e: EdgeKey) -> Result<(), HypergraphError> {
        self.push_key(e)
    }

    /// Removes and returns the most recently added edge.
    pub fn pop_edge(&mut self) -> Option<EdgeKey> {
        let key = self.edges.pop()?;
        for &v in &key.0 {
            self.incidence[v].pop();
        }
        self.index.remove(&key);
        Some(key)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &EdgeKey {
        &self.edges[idx]
    }

    pub fn contains(&self, e: &EdgeKey) -> bool {
        self.index.contains_key(e)
    }

    pub fn edge_index(&self, e: &EdgeKey) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Edge indices through `v`, in labelling order.
    pub fn incidence(&self, v: Vertex) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: Vertex) -> Result<usize, HypergraphError> {
        self.check_vertex(v)?;
        Ok(self.incidence[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Whether every vertex has degree exactly `d`.
    pub fn is_regular(&self, d: usize) -> bool {
        self.incidence.iter().all(|inc| inc.len() == d)
    }

    /// Whether the hypergraph has no isolated vertex.
    pub fn has_isolated_vertex(&self) -> bool {
        self.incidence.iter().any(Vec::is_empty)
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), HypergraphError> {
        if v >= self.n {
            Err(HypergraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// BFS distances (in edges) from a set of sources; `None` = unreachable.
    pub fn distances_from_set(&self, sources: &[Vertex]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut seen_edge = vec![false; self.edges.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &ei in &self.incidence[u] {
                if seen_edge[ei] {
                    continue;
                }
                seen_edge[ei] = true;
                for &w in &self.edges[ei].0 {
                    if dist[w].is_none() {
                        dist[w] = Some(du + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    pub fn distances_from(&self, u: Vertex) -> Vec<Option<usize>> {
        self.distances_from_set(&[u])
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Distance, HypergraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(match self.distances_from(u)[v] {
            Some(k) => Distance::Finite(k),
            None => Distance::Infinite,
        })
    }

    /// Largest pairwise distance; `Infinite` when disconnected (isolated
    /// vertices count).
    pub fn diameter(&self) -> Distance {
        let mut best = 0;
        for u in 0..self.n {
            for d in self.distances_from(u) {
                match d {
                    Some(k) => best = best.max(k),
                    None => return Distance::Infinite,
                }
            }
        }
        Distance::Finite(best)
    }

    /// Vertex sets of connected components, isolated vertices included.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            for w in e.0.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        for v in 0..self.n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Pairwise edge intersections have size at most one.
    pub fn is_linear(&self) -> bool {
        is_linear_edges(&self.edges)
    }

    /// Linear with no loose cycles.
    pub fn is_weak_forest(&self) -> bool {
        is_weak_forest_edges(&self.edges)
    }

    /// Edges contained in `set`.
    pub fn induced_edges(&self, set: &[Vertex]) -> Vec<EdgeKey> {
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        self.edges.iter().filter(|e| e.0.iter().all(|&v| inside[v])).cloned().collect()
    }

    /// Same hypergraph with vertex `v` renamed to `perm[v]`; edge order kept.
    pub fn relabel(&self, perm: &[Vertex]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation length");
        let edges = self.edges.iter().map(|e| e.map(|v| perm[v]));
        Hypergraph::from_edge_keys(self.n, self.r, edges).expect("relabelling by a permutation stays valid")
    }

    /// Every `r`-set not in the hypergraph, in lexicographic order.
    pub fn complement(&self) -> Hypergraph {
        let edges = Combinations::new(self.n, self.r)
            .map(EdgeKey::from_sorted)
            .filter(|e| !self.contains(e));
        Hypergraph::from_edge_keys(self.n, self.r, edges).expect("complement edges are valid")
    }

    /// Complete `r`-graph on `n` vertices.
    pub fn complete(n: usize, r: usize) -> Result<Hypergraph, HypergraphError> {
        Hypergraph::from_edge_keys(n, r, Combinations::new(n, r).map(EdgeKey::from_sorted))
    }

    /// Whether both hypergraphs carry the same edge set, ignoring order.
    pub fn same_edge_set(&self, other: &Hypergraph) -> bool {
        self.n == other.n && self.r == other.r && self.edges.len() == other.edges.len() && self.edges.iter().all(|e| other.contains(e))
    }

    /// Edges as a sorted set.
    pub fn edge_set(&self) -> BTreeSet<EdgeKey> {
        self.edges.iter().cloned().collect()
    }

    /// Canonical key of the labelled edge set (sorted edge list).
    pub fn sorted_edges(&self) -> Vec<EdgeKey> {
        let mut es = self.edges.clone();
        es.sort();
        es
    }
}

/// Whether `n` vertices can carry a `d`-regular `r`-graph at all.
pub fn regular_exists(n: usize, r: usize, d: usize) -> bool {
    if r < 2 || n < r {
        return d == 0;
    }
    let max_degree = crate::combinatorics::binomial((n - 1) as u64, (r - 1) as u64).unwrap_or(u128::MAX);
    (n * d).is_multiple_of(r) && (d as u128) <= max_degree
}

pub fn is_linear_edges(edges: &[EdgeKey]) -> bool {
    let mut pairs: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    for e in edges {
        let vs = &e.0;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if !pairs.insert((vs[i], vs[j])) {
                    return false;
                }
            }
        }
    }
    true
}

/// Linearity plus, for each component with `m` edges, exactly
/// `m(r-1)+1` vertices.
pub fn is_weak_forest_edges(edges: &[EdgeKey]) -> bool {
    if !is_linear_edges(edges) {
        return false;
    }
    let mut ids: BTreeMap<Vertex, usize> = BTreeMap::new();
    for e in edges {
        for &v in &e.0 {
            let next = ids.len();
            ids.entry(v).or_insert(next);
        }
    }
    let mut uf = UnionFind::new(ids.len());
    for e in edges {
        for w in e.0.windows(2) {
            uf.union(ids[&w[0]], ids[&w[1]]);
        }
    }
    let mut vertex_count: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..ids.len() {
        *vertex_count.entry(uf.find(i)).or_default() += 1;
    }
    let mut edge_count: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for e in edges {
        let root = uf.find(ids[&e.0[0]]);
        let slot = edge_count.entry(root).or_default();
        slot.0 += 1;
        slot.1 += e.len() - 1;
    }
    edge_count.iter().all(|(root, &(_, spanned))| vertex_count[root] == spanned + 1)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}
