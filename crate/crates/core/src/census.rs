//! Copies of a fixed pattern `F` inside a host: counting, automorphisms,
//! expected counts, the conflict graph of copies, edge-disjoint packings
//! and the deletion distance to `F`-freeness.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use thiserror::Error;

use crate::combinatorics::{binomial_f64, factorial, factorial_f64};
use crate::hypergraph::{EdgeKey, Hypergraph, HypergraphError, Vertex};
use crate::sampler;

/// Default limit on the copies handled by the exact packing and deletion
/// searches.
pub const DEFAULT_COPY_CAP: usize = 24;
/// Default limit on the copies materialised in a conflict graph.
pub const DEFAULT_CONFLICT_BUDGET: usize = 1_000_000;
const SEARCH_NODE_BUDGET: u64 = 50_000_000;
const MAX_PATTERN_VERTICES: usize = 16;
const MAX_PATTERN_EDGES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("instance too large: {0}")]
    TooLarge(&'static str),
    #[error("no {d}-regular {r}-graph on {n} vertices")]
    Infeasible { n: usize, r: usize, d: usize },
    #[error("pattern and host have different uniformity")]
    UniformityMismatch,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Drives injections `V(F) → V(G)` that send every edge of `F` onto an edge
/// of `G`.
struct Matcher<'a> {
    host: &'a Hypergraph,
    pattern: &'a Hypergraph,
    order: Vec<Vertex>,
    /// pattern edges whose last vertex (in `order`) sits at each position
    checks: Vec<Vec<usize>>,
    /// an earlier pattern vertex sharing an edge with `order[i]`
    anchor: Vec<Option<Vertex>>,
    map: Vec<Option<Vertex>>,
    used: Vec<bool>,
    fixed: usize,
}

impl<'a> Matcher<'a> {
    /// `initial` pins some pattern vertices to host vertices.
    fn new(host: &'a Hypergraph, pattern: &'a Hypergraph, initial: &[(Vertex, Vertex)]) -> Self {
        let vf = pattern.n();
        let mut placed = vec![false; vf];
        let mut order = Vec::with_capacity(vf);
        for &(p, _) in initial {
            placed[p] = true;
            order.push(p);
        }
        while order.len() < vf {
            // most edges into the placed set, then highest degree
            let next = (0..vf)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = pattern
                        .incidence(v)
                        .iter()
                        .filter(|&&ei| pattern.edge(ei).vertices().iter().any(|&w| placed[w]))
                        .count();
                    (links, pattern.incidence(v).len(), core::cmp::Reverse(v))
                })
                .expect("unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let mut position = vec![0; vf];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut checks = vec![Vec::new(); vf];
        for (ei, e) in pattern.edges().iter().enumerate() {
            let last = e.vertices().iter().map(|&v| position[v]).max().expect("nonempty edge");
            checks[last].push(ei);
        }
        let anchor = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                pattern
                    .incidence(v)
                    .iter()
                    .find_map(|&ei| pattern.edge(ei).vertices().iter().copied().find(|&w| position[w] < i))
            })
            .collect();
        let mut map = vec![None; vf];
        let mut used = vec![false; host.n()];
        for &(p, h) in initial {
            map[p] = Some(h);
            used[h] = true;
        }
        Matcher {
            host,
            pattern,
            order,
            checks,
            anchor,
            map,
            used,
            fixed: initial.len(),
        }
    }

    fn edge_ok(&self, ei: usize) -> bool {
        let mut vs: Vec<Vertex> = self
            .pattern
            .edge(ei)
            .vertices()
            .iter()
            .map(|&v| self.map[v].expect("assigned"))
            .collect();
        vs.sort_unstable();
        self.host.contains(&EdgeKey::from_sorted(vs))
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Option<Vertex>]) -> ControlFlow<()>) -> ControlFlow<()> {
        if self.host.r() != self.pattern.r() || self.pattern.n() > self.host.n() {
            return ControlFlow::Continue(());
        }
        for i in 0..self.fixed {
            for k in 0..self.checks[i].len() {
                if !self.edge_ok(self.checks[i][k]) {
                    return ControlFlow::Continue(());
                }
            }
        }
        self.extend(self.fixed, visit)
    }

    fn extend(&mut self, i: usize, visit: &mut dyn FnMut(&[Option<Vertex>]) -> ControlFlow<()>) -> ControlFlow<()> {
        if i == self.order.len() {
            return visit(&self.map);
        }
        let v = self.order[i];
        let candidates: Vec<Vertex> = match self.anchor[i] {
            Some(a) => {
                let ha = self.map[a].expect("anchor assigned earlier");
                let mut c: Vec<Vertex> = self
                    .host
                    .incidence(ha)
                    .iter()
                    .flat_map(|&ei| self.host.edge(ei).vertices().iter().copied())
                    .filter(|&w| !self.used[w])
                    .collect();
                c.sort_unstable();
                c.dedup();
                c
            }
            None => (0..self.host.n()).filter(|&w| !self.used[w]).collect(),
        };
        for h in candidates {
            self.map[v] = Some(h);
            self.used[h] = true;
            let ok = (0..self.checks[i].len()).all(|k| self.edge_ok(self.checks[i][k]));
            let flow = if ok { self.extend(i + 1, visit) } else { ControlFlow::Continue(()) };
            self.used[h] = false;
            self.map[v] = None;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// One copy of `F`: its vertex set and edge set, both sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    vertices: Vec<Vertex>,
    edges: Vec<EdgeKey>,
}

impl Occurrence {
    fn from_map(pattern: &Hypergraph, map: &[Option<Vertex>]) -> Self {
        let mut vertices: Vec<Vertex> = map.iter().map(|v| v.expect("complete map")).collect();
        vertices.sort_unstable();
        let mut edges: Vec<EdgeKey> = pattern.edges().iter().map(|e| e.map(|v| map[v].expect("complete map"))).collect();
        edges.sort();
        Occurrence { vertices, edges }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn shares_edge(&self, other: &Occurrence) -> bool {
        // both lists are sorted
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// A pattern `F` with cached `v_F`, `e_F` and `aut(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    graph: Hypergraph,
    aut: u128,
    has_isolated: bool,
}

impl Pattern {
    pub fn new(graph: Hypergraph) -> Result<Self, CensusError> {
        let aut = automorphism_count(&graph)?;
        Ok(Pattern {
            has_isolated: graph.has_isolated_vertex(),
            graph,
            aut,
        })
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn v(&self) -> usize {
        self.graph.n()
    }

    pub fn e(&self) -> usize {
        self.graph.len()
    }

    pub fn r(&self) -> usize {
        self.graph.r()
    }

    pub fn aut(&self) -> u128 {
        self.aut
    }

    pub fn has_isolated(&self) -> bool {
        self.has_isolated
    }
}

/// `F` without its isolated vertices, relabelled to `0..v`. `None` when
/// `F` has no edges.
pub fn strip_isolated(f: &Hypergraph) -> Option<Hypergraph> {
    let used: BTreeSet<Vertex> = f.edges().iter().flat_map(|e| e.vertices().iter().copied()).collect();
    if used.is_empty() {
        return None;
    }
    let relabel: BTreeMap<Vertex, Vertex> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges = f.edges().iter().map(|e| e.map(|v| relabel[&v]));
    Hypergraph::from_edge_keys(used.len(), f.r(), edges).ok()
}

/// `|Aut(F)|`.
pub fn automorphism_count(f: &Hypergraph) -> Result<u128, CensusError> {
    let isolated = (0..f.n()).filter(|&v| f.incidence(v).is_empty()).count();
    let iso_factor = factorial(isolated as u64).ok_or(CensusError::TooLarge("automorphism count overflows"))?;
    let Some(core) = strip_isolated(f) else {
        return Ok(iso_factor);
    };
    if core.n() > MAX_PATTERN_VERTICES {
        return Err(CensusError::TooLarge("pattern has too many vertices"));
    }
    let count = count_injections(&core, &core);
    iso_factor
        .checked_mul(count as u128)
        .ok_or(CensusError::TooLarge("automorphism count overflows"))
}

fn count_injections(host: &Hypergraph, pattern: &Hypergraph) -> u64 {
    let mut count = 0u64;
    let mut m = Matcher::new(host, pattern, &[]);
    let _ = m.run(&mut |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// `X_F(G)`: the number of subgraphs of `G` isomorphic to `F`.
pub fn count_copies(g: &Hypergraph, f: &Hypergraph) -> u64 {
    if f.r() != g.r() || f.n() > g.n() {
        return 0;
    }
    let isolated = (0..f.n()).filter(|&v| f.incidence(v).is_empty()).count();
    let Some(core) = strip_isolated(f) else {
        return crate::combinatorics::binomial(g.n() as u64, f.n() as u64).map_or(u64::MAX, |c| c as u64);
    };
    let aut_core = count_injections(&core, &core);
    let core_copies = count_injections(g, &core) / aut_core;
    if isolated == 0 {
        return core_copies;
    }
    // each core copy extends by any choice of `isolated` further vertices
    let rest = g.n() - core.n();
    let extend = crate::combinatorics::binomial(rest as u64, isolated as u64).unwrap_or(0) as u64;
    core_copies.saturating_mul(extend)
}

/// All copies of `F` in `G`, sorted; `TooLarge` beyond `cap` copies.
pub fn copies(g: &Hypergraph, f: &Hypergraph, cap: usize) -> Result<Vec<Occurrence>, CensusError> {
    if f.r() != g.r() {
        return Err(CensusError::UniformityMismatch);
    }
    let mut found: BTreeSet<Occurrence> = BTreeSet::new();
    let mut m = Matcher::new(g, f, &[]);
    let flow = m.run(&mut |map| {
        found.insert(Occurrence::from_map(f, map));
        if found.len() > cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if flow.is_break() {
        return Err(CensusError::TooLarge("too many copies"));
    }
    Ok(found.into_iter().collect())
}

/// Some copy of `F` in `G`.
pub fn find_copy(g: &Hypergraph, f: &Hypergraph) -> Option<Occurrence> {
    let mut out = None;
    let mut m = Matcher::new(g, f, &[]);
    let _ = m.run(&mut |map| {
        out = Some(Occurrence::from_map(f, map));
        ControlFlow::Break(())
    });
    out
}

pub fn contains_copy(g: &Hypergraph, f: &Hypergraph) -> bool {
    find_copy(g, f).is_some()
}

/// Some copy of `F` in `G` that uses the edge `e` of `G`.
pub fn find_copy_through(g: &Hypergraph, f: &Hypergraph, e: &EdgeKey) -> Option<Occurrence> {
    if f.r() != g.r() || !g.contains(e) {
        return None;
    }
    let perms = crate::combinatorics::permutations(f.r());
    for fe in f.edges() {
        for perm in &perms {
            let initial: Vec<(Vertex, Vertex)> = fe.vertices().iter().zip(perm).map(|(&p, &k)| (p, e.vertices()[k])).collect();
            let mut out = None;
            let mut m = Matcher::new(g, f, &initial);
            let _ = m.run(&mut |map| {
                out = Some(Occurrence::from_map(f, map));
                ControlFlow::Break(())
            });
            if out.is_some() {
                return out;
            }
        }
    }
    None
}

/// Which edge probability feeds the expected counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeProbability {
    /// `(r−1)!·d/n^{r−1}`
    Asymptotic,
    /// `(nd/r)/C(n,r)`
    Exact,
}

pub fn edge_probability(n: usize, r: usize, d: usize, model: EdgeProbability) -> f64 {
    match model {
        EdgeProbability::Asymptotic => factorial_f64((r - 1) as u64) * d as f64 / libm::pow(n as f64, (r - 1) as f64),
        EdgeProbability::Exact => (n * d) as f64 / r as f64 / binomial_f64(n as u64, r as u64),
    }
}

/// `C(n, v_F)·v_F!/aut(F)·p^{e_F}`.
pub fn expected_copies(n: usize, r: usize, d: usize, f: &Hypergraph, model: EdgeProbability) -> Result<f64, CensusError> {
    if !crate::hypergraph::regular_exists(n, r, d) {
        return Err(CensusError::Infeasible { n, r, d });
    }
    if f.r() != r {
        return Err(CensusError::UniformityMismatch);
    }
    let aut = automorphism_count(f)? as f64;
    let p = edge_probability(n, r, d, model);
    let v = f.n() as u64;
    Ok(binomial_f64(n as u64, v) * factorial_f64(v) / aut * libm::pow(p, f.len() as f64))
}

/// Whether subgraphs `K ⊆ F` keep the isolated vertices left behind by
/// dropping edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsolatedVertices {
    Stripped,
    Retained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiOptions {
    pub model: EdgeProbability,
    pub isolated: IsolatedVertices,
}

impl Default for PhiOptions {
    fn default() -> Self {
        PhiOptions {
            model: EdgeProbability::Exact,
            isolated: IsolatedVertices::Stripped,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Phi {
    pub value: f64,
    /// A subgraph `K ⊆ F` attaining the minimum.
    pub witness: Hypergraph,
}

/// `Φ_F = min { E[X_K] : K ⊆ F, e_K > 0 }`.
pub fn phi_f(n: usize, r: usize, d: usize, f: &Hypergraph, options: PhiOptions) -> Result<Phi, CensusError> {
    if f.is_empty() {
        return Err(CensusError::TooLarge("pattern has no edges"));
    }
    if f.len() > MAX_PATTERN_EDGES {
        return Err(CensusError::TooLarge("pattern has too many edges"));
    }
    let mut best: Option<Phi> = None;
    for mask in 1u32..(1u32 << f.len()) {
        let edges = f
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone());
        let full = Hypergraph::from_edge_keys(f.n(), r, edges)?;
        let k = match options.isolated {
            IsolatedVertices::Stripped => strip_isolated(&full).expect("nonempty subgraph"),
            IsolatedVertices::Retained => full,
        };
        let value = expected_copies(n, r, d, &k, options.model)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(Phi { value, witness: k });
        }
    }
    Ok(best.expect("at least one edge"))
}

/// Copies of `F` in `G` as nodes, adjacent when they share an edge.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    copies: Vec<Occurrence>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl ConflictGraph {
    pub fn build(g: &Hypergraph, f: &Hypergraph, budget: usize) -> Result<Self, CensusError> {
        Ok(ConflictGraph::from_copies(copies(g, f, budget)?))
    }

    pub fn from_copies(copies: Vec<Occurrence>) -> Self {
        let mut by_edge: BTreeMap<&EdgeKey, Vec<usize>> = BTreeMap::new();
        for (i, c) in copies.iter().enumerate() {
            for e in &c.edges {
                by_edge.entry(e).or_default().push(i);
            }
        }
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); copies.len()];
        for ids in by_edge.values() {
            for &a in ids {
                for &b in ids {
                    if a != b {
                        sets[a].insert(b);
                    }
                }
            }
        }
        let adjacency: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        ConflictGraph {
            copies,
            adjacency,
            edge_count,
        }
    }

    pub fn copies(&self) -> &[Occurrence] {
        &self.copies
    }

    pub fn node_count(&self) -> usize {
        self.copies.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = crate::hypergraph::UnionFind::new(self.copies.len());
        for (a, ns) in self.adjacency.iter().enumerate() {
            for &b in ns {
                uf.union(a, b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.copies.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Minimum-degree greedy independent set (indices, ascending).
    pub fn greedy_independent(&self) -> Vec<usize> {
        let k = self.copies.len();
        let mut alive = vec![true; k];
        let mut degree: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let mut picked = Vec::new();
        while let Some(v) = (0..k).filter(|&i| alive[i]).min_by_key(|&i| (degree[i], i)) {
            picked.push(v);
            let mut removed = vec![v];
            removed.extend(self.adjacency[v].iter().copied().filter(|&u| alive[u]));
            for &u in &removed {
                alive[u] = false;
            }
            for &u in &removed {
                for &w in &self.adjacency[u] {
                    if alive[w] {
                        degree[w] -= 1;
                    }
                }
            }
        }
        picked.sort_unstable();
        picked
    }

    /// Size of a maximum independent set, by branch and bound within each
    /// component.
    pub fn maximum_independent(&self) -> Result<usize, CensusError> {
        let mut nodes = 0u64;
        let mut total = 0;
        for comp in self.components() {
            let greedy = self.greedy_within(&comp);
            let mut best = greedy;
            let mut order = comp.clone();
            order.sort_by_key(|&i| (core::cmp::Reverse(self.adjacency[i].len()), i));
            let mut cand = vec![false; self.copies.len()];
            for &i in &comp {
                cand[i] = true;
            }
            self.mis_branch(&order, &mut cand, comp.len(), 0, &mut best, &mut nodes)?;
            total += best;
        }
        Ok(total)
    }

    fn greedy_within(&self, comp: &[usize]) -> usize {
        let sub = ConflictGraph::from_copies(comp.iter().map(|&i| self.copies[i].clone()).collect());
        sub.greedy_independent().len()
    }

    fn mis_branch(
        &self,
        order: &[usize],
        cand: &mut Vec<bool>,
        remaining: usize,
        current: usize,
        best: &mut usize,
        nodes: &mut u64,
    ) -> Result<(), CensusError> {
        *nodes += 1;
        if *nodes > SEARCH_NODE_BUDGET {
            return Err(CensusError::TooLarge("packing search exceeded its node budget"));
        }
        if remaining == 0 {
            *best = (*best).max(current);
            return Ok(());
        }
        if current + self.clique_cover_bound(order, cand) <= *best {
            return Ok(());
        }
        // highest remaining degree first
        let v = *order
            .iter()
            .filter(|&&i| cand[i])
            .max_by_key(|&&i| (self.adjacency[i].iter().filter(|&&u| cand[u]).count(), core::cmp::Reverse(i)))
            .expect("remaining > 0");
        let live_nbrs: Vec<usize> = self.adjacency[v].iter().copied().filter(|&u| cand[u]).collect();
        if live_nbrs.is_empty() {
            // every remaining node is isolated
            *best = (*best).max(current + remaining);
            return Ok(());
        }
        cand[v] = false;
        for &u in &live_nbrs {
            cand[u] = false;
        }
        let res = self.mis_branch(order, cand, remaining - 1 - live_nbrs.len(), current + 1, best, nodes);
        for &u in &live_nbrs {
            cand[u] = true;
        }
        res?;
        let res = self.mis_branch(order, cand, remaining - 1, current, best, nodes);
        cand[v] = true;
        res
    }

    /// Number of cliques in a greedy clique cover of the candidates.
    fn clique_cover_bound(&self, order: &[usize], cand: &[bool]) -> usize {
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        for &i in order.iter().filter(|&&i| cand[i]) {
            let slot = cliques
                .iter_mut()
                .find(|c| c.iter().all(|&j| self.adjacency[i].binary_search(&j).is_ok()));
            match slot {
                Some(c) => c.push(i),
                None => cliques.push(vec![i]),
            }
        }
        cliques.len()
    }
}

/// `⌈v² / (2e + v)⌉`, and 0 for `v = 0`.
pub fn turan_bound(v: u64, e: u64) -> u64 {
    if v == 0 {
        return 0;
    }
    let num = v as u128 * v as u128;
    let den = 2 * e as u128 + v as u128;
    num.div_ceil(den) as u64
}

pub fn conflict_graph(g: &Hypergraph, f: &Hypergraph) -> Result<ConflictGraph, CensusError> {
    ConflictGraph::build(g, f, DEFAULT_CONFLICT_BUDGET)
}

/// Edge-disjoint copies chosen greedily by minimum conflict degree.
pub fn greedy_packing(g: &Hypergraph, f: &Hypergraph) -> Result<Vec<Occurrence>, CensusError> {
    let cg = conflict_graph(g, f)?;
    Ok(cg.greedy_independent().into_iter().map(|i| cg.copies[i].clone()).collect())
}

/// Maximum number of edge-disjoint copies; `TooLarge` above `cap` copies.
pub fn exact_packing(g: &Hypergraph, f: &Hypergraph, cap: usize) -> Result<usize, CensusError> {
    let cg = ConflictGraph::build(g, f, cap)?;
    cg.maximum_independent()
}

/// Fewest edge deletions leaving `G` free of `F`; `TooLarge` above `cap`
/// copies.
pub fn min_deletion_distance(g: &Hypergraph, f: &Hypergraph, cap: usize) -> Result<usize, CensusError> {
    let cg = ConflictGraph::build(g, f, cap)?;
    min_hitting_set(&cg)
}

fn min_hitting_set(cg: &ConflictGraph) -> Result<usize, CensusError> {
    let mut total = 0;
    let mut nodes = 0u64;
    for comp in cg.components() {
        let mut ids: BTreeMap<&EdgeKey, usize> = BTreeMap::new();
        for &c in &comp {
            for e in &cg.copies[c].edges {
                let next = ids.len();
                ids.entry(e).or_insert(next);
            }
        }
        let sets: Vec<Vec<usize>> = comp.iter().map(|&c| cg.copies[c].edges.iter().map(|e| ids[e]).collect()).collect();
        let mut hs = HittingSet::new(sets, ids.len());
        let mut best = hs.greedy_upper();
        hs.branch(0, &mut best, &mut nodes)?;
        total += best;
    }
    Ok(total)
}

struct HittingSet {
    sets: Vec<Vec<usize>>,
    containing: Vec<Vec<usize>>,
    /// how many deleted elements each set contains
    hits: Vec<usize>,
    forbidden: Vec<bool>,
}

impl HittingSet {
    fn new(sets: Vec<Vec<usize>>, universe: usize) -> Self {
        let mut containing = vec![Vec::new(); universe];
        for (i, s) in sets.iter().enumerate() {
            for &x in s {
                containing[x].push(i);
            }
        }
        HittingSet {
            hits: vec![0; sets.len()],
            sets,
            containing,
            forbidden: vec![false; universe],
        }
    }

    fn greedy_upper(&self) -> usize {
        let mut hit = vec![false; self.sets.len()];
        let mut count = 0;
        while let Some(x) = (0..self.containing.len())
            .map(|x| (self.containing[x].iter().filter(|&&s| !hit[s]).count(), x))
            .filter(|&(k, _)| k > 0)
            .max_by_key(|&(k, x)| (k, core::cmp::Reverse(x)))
            .map(|(_, x)| x)
        {
            for &s in &self.containing[x] {
                hit[s] = true;
            }
            count += 1;
        }
        count
    }

    fn delete(&mut self, x: usize, delta: isize) {
        for &s in &self.containing[x] {
            self.hits[s] = (self.hits[s] as isize + delta) as usize;
        }
    }

    /// Pairwise disjoint unhit sets (on allowed elements): each needs its
    /// own deletion. `None` if some unhit set can no longer be hit.
    fn lower_bound(&self) -> Option<usize> {
        let mut taken = vec![false; self.containing.len()];
        let mut bound = 0;
        let mut unhit: Vec<usize> = (0..self.sets.len()).filter(|&s| self.hits[s] == 0).collect();
        unhit.sort_by_key(|&s| self.sets[s].iter().filter(|&&x| !self.forbidden[x]).count());
        for s in unhit {
            let allowed: Vec<usize> = self.sets[s].iter().copied().filter(|&x| !self.forbidden[x]).collect();
            if allowed.is_empty() {
                return None;
            }
            if allowed.iter().all(|&x| !taken[x]) {
                for x in allowed {
                    taken[x] = true;
                }
                bound += 1;
            }
        }
        Some(bound)
    }

    fn branch(&mut self, chosen: usize, best: &mut usize, nodes: &mut u64) -> Result<(), CensusError> {
        *nodes += 1;
        if *nodes > SEARCH_NODE_BUDGET {
            return Err(CensusError::TooLarge("deletion search exceeded its node budget"));
        }
        let Some(lb) = self.lower_bound() else {
            return Ok(());
        };
        if lb == 0 {
            *best = (*best).min(chosen);
            return Ok(());
        }
        if chosen + lb >= *best {
            return Ok(());
        }
        let target = (0..self.sets.len())
            .filter(|&s| self.hits[s] == 0)
            .min_by_key(|&s| (self.sets[s].iter().filter(|&&x| !self.forbidden[x]).count(), s))
            .expect("lb > 0 means an unhit set");
        let options: Vec<usize> = self.sets[target].iter().copied().filter(|&x| !self.forbidden[x]).collect();
        let mut res = Ok(());
        let mut forbade = Vec::new();
        for &x in &options {
            self.delete(x, 1);
            res = self.branch(chosen + 1, best, nodes);
            self.delete(x, -1);
            if res.is_err() {
                break;
            }
            self.forbidden[x] = true;
            forbade.push(x);
        }
        for x in forbade {
            self.forbidden[x] = false;
        }
        res
    }
}

/// Measured distance from `F`-freeness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Farness {
    /// Exact deletion distance, or a packing lower bound when `exact` is
    /// false.
    pub deletions: usize,
    pub exact: bool,
    pub epsilon: f64,
}

pub fn farness(g: &Hypergraph, f: &Hypergraph, cap: usize) -> Result<Farness, CensusError> {
    let (deletions, exact) = match min_deletion_distance(g, f, cap) {
        Ok(k) => (k, true),
        Err(CensusError::TooLarge(_)) => (greedy_packing(g, f)?.len(), false),
        Err(e) => return Err(e),
    };
    let epsilon = if g.is_empty() { 0.0 } else { deletions as f64 / g.len() as f64 };
    Ok(Farness { deletions, exact, epsilon })
}

/// Mean of `X_F` over the whole class `G_{n,d}`, from enumeration.
pub fn exact_mean_copies(n: usize, r: usize, d: usize, f: &Hypergraph, node_budget: u64) -> Result<f64, CensusError> {
    let class = sampler::enumerate_regular(n, r, d, node_budget).map_err(|e| match e {
        sampler::SamplerError::Infeasible { n, r, d } => CensusError::Infeasible { n, r, d },
        _ => CensusError::TooLarge("enumeration"),
    })?;
    let total: u64 = class.iter().map(|g| count_copies(g, f)).sum();
    Ok(total as f64 / class.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns;

    fn two_triangles() -> Hypergraph {
        Hypergraph::new(6, 2, [[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]]).unwrap()
    }

    #[test]
    fn automorphisms() {
        assert_eq!(automorphism_count(&patterns::triangle()).unwrap(), 6);
        assert_eq!(automorphism_count(&patterns::single_edge(3)).unwrap(), 6);
        assert_eq!(automorphism_count(&patterns::loose_path(2, 3)).unwrap(), 8);
        assert_eq!(automorphism_count(&patterns::cycle_graph(5)).unwrap(), 10);
        let with_iso = Hypergraph::new(4, 2, [[0, 1]]).unwrap();
        assert_eq!(automorphism_count(&with_iso).unwrap(), 4);
    }

    #[test]
    fn copy_counts() {
        let k4 = Hypergraph::complete(4, 2).unwrap();
        assert_eq!(count_copies(&k4, &patterns::triangle()), 4);
        assert_eq!(count_copies(&k4, &patterns::cycle_graph(4)), 3);
        assert_eq!(count_copies(&k4, &patterns::single_edge(2)), 6);
        assert_eq!(copies(&k4, &patterns::cycle_graph(4), 100).unwrap().len(), 3);
        let iso = Hypergraph::new(3, 2, [[0, 1]]).unwrap();
        assert_eq!(count_copies(&k4, &iso), 12);
        assert_eq!(copies(&k4, &iso, 100).unwrap().len(), 12);
    }

    #[test]
    fn copy_through_edge() {
        let g = Hypergraph::new(5, 2, [[0, 1], [1, 2], [2, 0], [3, 4]]).unwrap();
        let t = patterns::triangle();
        assert!(find_copy_through(&g, &t, &EdgeKey::new(&[0, 1]).unwrap()).is_some());
        assert!(find_copy_through(&g, &t, &EdgeKey::new(&[3, 4]).unwrap()).is_none());
    }

    #[test]
    fn expected_and_phi() {
        let e = expected_copies(10, 2, 3, &patterns::single_edge(2), EdgeProbability::Exact).unwrap();
        assert!((e - 15.0).abs() < 1e-9);
        let t = expected_copies(50, 2, 10, &patterns::triangle(), EdgeProbability::Asymptotic).unwrap();
        assert!((t - binomial_f64(50, 3) * 0.2f64.powi(3)).abs() < 1e-9);
        let phi = phi_f(50, 2, 2, &patterns::triangle(), PhiOptions::default()).unwrap();
        assert_eq!(phi.witness.len(), 3);
        let edge_phi = phi_f(12, 3, 3, &patterns::single_edge(3), PhiOptions::default()).unwrap();
        assert!((edge_phi.value - 12.0).abs() < 1e-9);
        assert_eq!(
            expected_copies(5, 2, 3, &patterns::triangle(), EdgeProbability::Exact),
            Err(CensusError::Infeasible { n: 5, r: 2, d: 3 })
        );
    }

    #[test]
    fn conflict_graphs() {
        let cg = conflict_graph(&two_triangles(), &patterns::triangle()).unwrap();
        assert_eq!((cg.node_count(), cg.edge_count()), (2, 0));
        let k4 = Hypergraph::complete(4, 2).unwrap();
        let cg = conflict_graph(&k4, &patterns::triangle()).unwrap();
        assert_eq!((cg.node_count(), cg.edge_count()), (4, 6));
        let c5 = patterns::cycle_graph(5);
        assert_eq!(conflict_graph(&c5, &patterns::triangle()).unwrap().node_count(), 0);
    }

    #[test]
    fn turan_values() {
        assert_eq!(turan_bound(4, 3), 2);
        assert_eq!(turan_bound(7, 0), 7);
        assert_eq!(turan_bound(4, 6), 1);
        assert_eq!(turan_bound(0, 0), 0);
    }

    #[test]
    fn packings() {
        let t = patterns::triangle();
        assert_eq!(greedy_packing(&two_triangles(), &t).unwrap().len(), 2);
        let k4 = Hypergraph::complete(4, 2).unwrap();
        assert_eq!(greedy_packing(&k4, &t).unwrap().len(), 1);
        assert_eq!(exact_packing(&k4, &t, DEFAULT_COPY_CAP).unwrap(), 1);
        let bowtie = Hypergraph::new(5, 2, [[0, 1], [1, 2], [2, 0], [0, 3], [3, 4], [4, 0]]).unwrap();
        assert_eq!(exact_packing(&bowtie, &t, DEFAULT_COPY_CAP).unwrap(), 2);
        let k7 = Hypergraph::complete(7, 2).unwrap();
        assert!(matches!(exact_packing(&k7, &t, DEFAULT_COPY_CAP), Err(CensusError::TooLarge(_))));
        assert_eq!(exact_packing(&k7, &t, 100).unwrap(), 7);
    }

    #[test]
    fn deletions() {
        let t = patterns::triangle();
        let k4 = Hypergraph::complete(4, 2).unwrap();
        assert_eq!(min_deletion_distance(&k4, &t, DEFAULT_COPY_CAP).unwrap(), 2);
        assert_eq!(min_deletion_distance(&patterns::cycle_graph(6), &t, DEFAULT_COPY_CAP).unwrap(), 0);
        // K_5 minus a triangle-free complement: ex(5, triangle) = 6, so 4 deletions
        let k5 = Hypergraph::complete(5, 2).unwrap();
        assert_eq!(min_deletion_distance(&k5, &t, DEFAULT_COPY_CAP).unwrap(), 4);
        let f = farness(&k4, &t, DEFAULT_COPY_CAP).unwrap();
        assert!(f.exact && (f.epsilon - 2.0 / 6.0).abs() < 1e-12);
    }
}
