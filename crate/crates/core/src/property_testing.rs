//! Query access to a hidden hypergraph and one-sided `F`-freeness testers.
//!
//! An [`Oracle`] answers vertex-set queries ("is this `r`-set an edge?")
//! and neighbour queries ("what is the `i`-th edge at `v`?"), counts them,
//! and records what was learned in a [`History`]. The testers only ever
//! reject with a copy of `F` made of confirmed edges, so `F`-free inputs
//! are always accepted.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::census::{self, CensusError, Occurrence, PhiOptions};
use crate::combinatorics::{binomial, Combinations};
use crate::hypergraph::{is_weak_forest_edges, regular_exists, EdgeKey, Hypergraph, HypergraphError, Vertex};
use crate::sampler::{self, Method, SamplerConfig, SamplerError};
use crate::spanning::{self, SpanningError};

pub const DEFAULT_C1: f64 = 8.0;
pub const DEFAULT_C: f64 = 4.0;
pub const DEFAULT_C_SIMPLE: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TestingError {
    #[error("query needs {expected} distinct vertices, got {found:?}")]
    BadArity { expected: usize, found: Vec<Vertex> },
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("neighbour query indices start at 1")]
    BadIndex,
    #[error("query budget exhausted")]
    BudgetExhausted,
    #[error("pattern is not in the class F_E")]
    NotInFE,
    #[error("pattern has isolated vertices")]
    IsolatedVerticesInPattern,
    #[error("pattern is disconnected")]
    DisconnectedPattern,
    #[error("pattern is a weak forest")]
    NoWeakForestPattern,
    #[error("no feasible block decomposition for n = {n}, d = {d}")]
    Infeasible { n: usize, d: usize },
    #[error("construction unavailable: {0}")]
    ConstructionUnavailable(&'static str),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Spanning(#[from] SpanningError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// What the queries so far have revealed: confirmed edges `E1`, confirmed
/// non-edges `E2` and exact degrees `D`.
#[derive(Clone, Debug)]
pub struct History {
    e1: Hypergraph,
    e2: BTreeSet<EdgeKey>,
    degree_facts: BTreeMap<Vertex, usize>,
}

impl History {
    fn new(n: usize, r: usize) -> Self {
        History {
            e1: Hypergraph::empty(n, r).expect("oracle parameters are valid"),
            e2: BTreeSet::new(),
            degree_facts: BTreeMap::new(),
        }
    }

    fn confirm(&mut self, e: EdgeKey) {
        if !self.e1.contains(&e) {
            self.e1.add_edge(e).expect("edge fits the vertex set");
        }
    }

    /// `E1` as a hypergraph on the oracle's vertex set.
    pub fn e1(&self) -> &Hypergraph {
        &self.e1
    }

    pub fn e2(&self) -> &BTreeSet<EdgeKey> {
        &self.e2
    }

    pub fn degree_facts(&self) -> &BTreeMap<Vertex, usize> {
        &self.degree_facts
    }

    /// `E1 ⊆ G`, `E2 ∩ G = ∅`, and every degree fact is correct.
    pub fn consistent_with(&self, hidden: &Hypergraph) -> bool {
        self.e1.edges().iter().all(|e| hidden.contains(e))
            && self.e2.iter().all(|e| !hidden.contains(e))
            && self.degree_facts.iter().all(|(&v, &d)| hidden.incidence(v).len() == d)
    }
}

/// `E1` is a weak forest and every recorded degree is at most
/// `c_simple·d`.
pub fn is_simple(history: &History, d: f64, c_simple: f64) -> bool {
    is_weak_forest_edges(history.e1.edges()) && history.degree_facts.values().all(|&k| k as f64 <= c_simple * d)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryCounts {
    pub vertex_set: u64,
    pub neighbour: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.vertex_set + self.neighbour
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeighbourAnswer {
    /// The other `r − 1` vertices of the edge, ascending.
    Edge(Vec<Vertex>),
    DegreeExceeded,
}

/// A hidden hypergraph behind the two query types.
#[derive(Clone, Debug)]
pub struct Oracle {
    hidden: Hypergraph,
    labelling: Vec<Vec<usize>>,
    counts: QueryCounts,
    history: History,
    budget: Option<u64>,
    degree_lower: Vec<usize>,
    degree_upper: Vec<Option<usize>>,
}

impl Oracle {
    /// Each vertex's incident edges are labelled `1..=deg` by a random
    /// permutation drawn from `seed`.
    pub fn new(hidden: Hypergraph, seed: u64) -> Self {
        let mut rng = crate::seed_stream(seed, 0);
        let labelling = (0..hidden.n())
            .map(|v| {
                let mut inc = hidden.incidence(v).to_vec();
                inc.shuffle(&mut rng);
                inc
            })
            .collect();
        let n = hidden.n();
        Oracle {
            history: History::new(n, hidden.r()),
            hidden,
            labelling,
            counts: QueryCounts::default(),
            budget: None,
            degree_lower: vec![0; n],
            degree_upper: vec![None; n],
        }
    }

    /// Caps the total number of queries.
    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn r(&self) -> usize {
        self.hidden.r()
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn hidden(&self) -> &Hypergraph {
        &self.hidden
    }

    fn spend(&mut self) -> Result<(), TestingError> {
        match self.budget {
            Some(b) if self.counts.total() >= b => Err(TestingError::BudgetExhausted),
            _ => Ok(()),
        }
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), TestingError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(TestingError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn vertex_set_query(&mut self, s: &[Vertex]) -> Result<bool, TestingError> {
        let key = EdgeKey::new(s)
            .ok()
            .filter(|k| k.len() == self.r())
            .ok_or_else(|| TestingError::BadArity {
                expected: self.r(),
                found: s.to_vec(),
            })?;
        for &v in s {
            self.check_vertex(v)?;
        }
        self.spend()?;
        self.counts.vertex_set += 1;
        let present = self.hidden.contains(&key);
        if present {
            self.history.confirm(key);
        } else {
            self.history.e2.insert(key);
        }
        Ok(present)
    }

    /// The `i`-th edge at `v` (1-based) under the oracle's labelling.
    pub fn neighbour_query(&mut self, v: Vertex, i: usize) -> Result<NeighbourAnswer, TestingError> {
        self.check_vertex(v)?;
        if i == 0 {
            return Err(TestingError::BadIndex);
        }
        self.spend()?;
        self.counts.neighbour += 1;
        let answer = match self.labelling[v].get(i - 1) {
            Some(&ei) => {
                let e = self.hidden.edge(ei).clone();
                let rest = e.vertices().iter().copied().filter(|&w| w != v).collect();
                self.history.confirm(e);
                self.degree_lower[v] = self.degree_lower[v].max(i);
                NeighbourAnswer::Edge(rest)
            }
            None => {
                let bound = i - 1;
                self.degree_upper[v] = Some(self.degree_upper[v].map_or(bound, |u| u.min(bound)));
                NeighbourAnswer::DegreeExceeded
            }
        };
        if self.degree_upper[v] == Some(self.degree_lower[v]) {
            self.history.degree_facts.insert(v, self.degree_lower[v]);
        }
        Ok(answer)
    }

    /// Exact degree of `v` by doubling then binary search over neighbour
    /// indices. Free once the degree is known.
    pub fn degree_probe(&mut self, v: Vertex) -> Result<usize, TestingError> {
        self.check_vertex(v)?;
        if let Some(&d) = self.history.degree_facts.get(&v) {
            return Ok(d);
        }
        let mut lo = 0; // largest index known present
        let mut hi = 1; // candidate index
        while let NeighbourAnswer::Edge(_) = self.neighbour_query(v, hi)? {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            match self.neighbour_query(v, mid)? {
                NeighbourAnswer::Edge(_) => lo = mid,
                NeighbourAnswer::DegreeExceeded => hi = mid,
            }
        }
        Ok(lo)
    }

    fn known_degree(&self, v: Vertex) -> Option<usize> {
        self.history.degree_facts.get(&v).copied()
    }

    /// Requests every edge at `u`; returns its degree.
    fn expand(&mut self, u: Vertex, mut visit: impl FnMut(&[Vertex])) -> Result<usize, TestingError> {
        let known = self.known_degree(u);
        let mut i = 1;
        loop {
            if known.is_some_and(|d| i > d) {
                return Ok(i - 1);
            }
            match self.neighbour_query(u, i)? {
                NeighbourAnswer::Edge(rest) => visit(&rest),
                NeighbourAnswer::DegreeExceeded => return Ok(i - 1),
            }
            i += 1;
        }
    }

    /// Expands every vertex within distance `depth` of `sources`; returns
    /// the largest degree met.
    fn explore(&mut self, sources: &[Vertex], depth: usize) -> Result<usize, TestingError> {
        let mut dist: BTreeMap<Vertex, usize> = sources.iter().map(|&s| (s, 0)).collect();
        let mut queue: VecDeque<Vertex> = sources.iter().copied().collect();
        let mut max_degree = 0;
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du > depth {
                continue;
            }
            let mut found = Vec::new();
            let deg = self.expand(u, |rest| found.extend_from_slice(rest))?;
            max_degree = max_degree.max(deg);
            for w in found {
                if let alloc::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                    slot.insert(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(max_degree)
    }
}

/// Outcome of one tester run.
#[derive(Clone, Debug, PartialEq)]
pub struct TesterVerdict {
    pub accept: bool,
    /// A copy of `F` made of confirmed edges; present exactly on rejection.
    pub witness: Option<Occurrence>,
    pub queries: QueryCounts,
    /// The query budget ran out before the tester finished.
    pub truncated: bool,
    pub sample_size: usize,
    /// Worst-case query count of this run given the degrees it met.
    pub analytic_budget: Option<u64>,
}

/// Promises about the input plus the tester constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TesterParams {
    /// Average degree.
    pub d: f64,
    /// Maximum degree.
    pub max_degree: usize,
    pub c1: f64,
    pub c: f64,
}

impl TesterParams {
    pub fn new(d: f64, max_degree: usize) -> Self {
        TesterParams {
            d,
            max_degree,
            c1: DEFAULT_C1,
            c: DEFAULT_C,
        }
    }

    /// Average and maximum degree of `g`.
    pub fn for_graph(g: &Hypergraph) -> Self {
        let d = (g.r() * g.len()) as f64 / g.n() as f64;
        TesterParams::new(d, g.max_degree())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TesterKind {
    Bfs,
    EdgeRooted,
    Canonical,
}

impl TesterKind {
    pub fn name(self) -> &'static str {
        match self {
            TesterKind::Bfs => "bfs",
            TesterKind::EdgeRooted => "edge-bfs",
            TesterKind::Canonical => "canonical",
        }
    }

    pub fn parse(s: &str) -> Option<TesterKind> {
        match s {
            "bfs" => Some(TesterKind::Bfs),
            "edge-bfs" | "edge-rooted" => Some(TesterKind::EdgeRooted),
            "canonical" => Some(TesterKind::Canonical),
            _ => None,
        }
    }
}

pub fn run_tester<R: Rng + ?Sized>(
    kind: TesterKind,
    oracle: &mut Oracle,
    f: &Hypergraph,
    eps: f64,
    params: &TesterParams,
    rng: &mut R,
) -> Result<TesterVerdict, TestingError> {
    match kind {
        TesterKind::Bfs => bfs_tester(oracle, f, eps, params, rng),
        TesterKind::EdgeRooted => edge_rooted_bfs_tester(oracle, f, eps, params, rng),
        TesterKind::Canonical => canonical_tester(oracle, f, eps, params, rng),
    }
}

fn sample_vertices<R: Rng + ?Sized>(n: usize, c1: f64, eps: f64, rng: &mut R) -> Vec<Vertex> {
    let want = if eps > 0.0 { libm::ceil(c1 / eps) } else { f64::INFINITY };
    let k = if want >= n as f64 { n } else { want as usize };
    index::sample(rng, n, k).into_vec()
}

fn finish(
    oracle: &Oracle,
    accept: bool,
    witness: Option<Occurrence>,
    truncated: bool,
    sample_size: usize,
    analytic_budget: Option<u64>,
) -> TesterVerdict {
    TesterVerdict {
        accept,
        witness,
        queries: oracle.counts(),
        truncated,
        sample_size,
        analytic_budget,
    }
}

fn ball_size_bound(r: usize, max_degree: usize, depth: usize) -> u64 {
    let growth = ((r - 1) * max_degree) as u64;
    (0..=depth).map(|j| growth.saturating_pow(j as u32)).fold(0u64, u64::saturating_add)
}

/// Samples `⌈c1/ε⌉` vertices and reveals every edge within distance `D + 1`
/// of each (all vertices at distance at most `D` are fully expanded).
pub fn bfs_tester<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    f: &Hypergraph,
    eps: f64,
    params: &TesterParams,
    rng: &mut R,
) -> Result<TesterVerdict, TestingError> {
    let diameter = f.diameter().finite().ok_or(TestingError::DisconnectedPattern)?;
    let sample = sample_vertices(oracle.n(), params.c1, eps, rng);
    let mut max_seen = 0;
    let mut truncated = false;
    let mut witness = None;
    for &v in &sample {
        match oracle.explore(&[v], diameter) {
            Ok(deg) => max_seen = max_seen.max(deg),
            Err(TestingError::BudgetExhausted) => truncated = true,
            Err(e) => return Err(e),
        }
        witness = census::find_copy(oracle.history().e1(), f);
        if witness.is_some() || truncated {
            break;
        }
    }
    let per_vertex = ball_size_bound(oracle.r(), max_seen, diameter).saturating_mul(max_seen as u64 + 1);
    let budget = per_vertex.saturating_mul(sample.len() as u64);
    Ok(finish(oracle, witness.is_none(), witness, truncated, sample.len(), Some(budget)))
}

/// For patterns in `F_E`: samples `⌈c1/ε⌉` vertices, takes a uniform edge at
/// each and reveals everything within distance `D` of that edge.
pub fn edge_rooted_bfs_tester<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    f: &Hypergraph,
    eps: f64,
    params: &TesterParams,
    rng: &mut R,
) -> Result<TesterVerdict, TestingError> {
    let analysis = match spanning::analyze_pattern(f) {
        Ok(a) => a,
        Err(SpanningError::Disconnected) => return Err(TestingError::DisconnectedPattern),
        Err(e) => return Err(e.into()),
    };
    if !analysis.in_fe {
        return Err(TestingError::NotInFE);
    }
    let depth = analysis.diameter.saturating_sub(1);
    let sample = sample_vertices(oracle.n(), params.c1, eps, rng);
    let mut max_seen = 0;
    let mut truncated = false;
    let mut witness = None;
    for &v in &sample {
        let step = (|| -> Result<usize, TestingError> {
            let deg = oracle.degree_probe(v)?;
            if deg == 0 {
                return Ok(0);
            }
            let i = rng.gen_range(1..=deg);
            let NeighbourAnswer::Edge(rest) = oracle.neighbour_query(v, i)? else {
                unreachable!("index within the probed degree")
            };
            let mut root = rest;
            root.push(v);
            Ok(deg.max(oracle.explore(&root, depth)?))
        })();
        match step {
            Ok(deg) => max_seen = max_seen.max(deg),
            Err(TestingError::BudgetExhausted) => truncated = true,
            Err(e) => return Err(e),
        }
        witness = census::find_copy(oracle.history().e1(), f);
        if witness.is_some() || truncated {
            break;
        }
    }
    let r = oracle.r() as u64;
    let probe = 2 * (usize::BITS - max_seen.leading_zeros()) as u64 + 2;
    let explore = r
        .saturating_mul(ball_size_bound(oracle.r(), max_seen, depth))
        .saturating_mul(max_seen as u64 + 1);
    let budget = (probe + 1 + explore).saturating_mul(sample.len() as u64);
    Ok(finish(oracle, witness.is_none(), witness, truncated, sample.len(), Some(budget)))
}

/// `s = c·max{ n/(εnd)^{1/v_F}, (n^{ℓ−2}Δ/(εd))^{1/(ℓ−1)} }`, rounded up
/// and capped at `n`.
pub fn canonical_sample_size(n: usize, f: &Hypergraph, ell: usize, eps: f64, params: &TesterParams) -> usize {
    let nf = n as f64;
    if eps <= 0.0 || params.d <= 0.0 {
        return n;
    }
    let a = nf / libm::pow(eps * nf * params.d, 1.0 / f.n() as f64);
    let ell = ell.max(2) as f64;
    let b = libm::pow(
        libm::pow(nf, ell - 2.0) * params.max_degree as f64 / (eps * params.d),
        1.0 / (ell - 1.0),
    );
    let s = libm::ceil(params.c * a.max(b));
    if s.is_nan() || s >= nf {
        n
    } else {
        (s as usize).max(f.n().min(n))
    }
}

/// Queries every `r`-subset of a random `s`-set `S` and rejects iff `G[S]`
/// contains `F`.
pub fn canonical_tester<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    f: &Hypergraph,
    eps: f64,
    params: &TesterParams,
    rng: &mut R,
) -> Result<TesterVerdict, TestingError> {
    if f.has_isolated_vertex() {
        return Err(TestingError::IsolatedVerticesInPattern);
    }
    let ell = spanning::vertex_overlap_index(f)?.ell;
    let n = oracle.n();
    let r = oracle.r();
    let s = canonical_sample_size(n, f, ell, eps, params);
    let mut set = index::sample(rng, n, s).into_vec();
    set.sort_unstable();
    let mut subsets: Vec<Vec<usize>> = Combinations::new(s, r).collect();
    subsets.shuffle(rng);
    let mut truncated = false;
    for idx in subsets {
        let q: Vec<Vertex> = idx.into_iter().map(|i| set[i]).collect();
        match oracle.vertex_set_query(&q) {
            Ok(_) => {}
            Err(TestingError::BudgetExhausted) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let witness = census::find_copy(oracle.history().e1(), f);
    let budget = binomial(s as u64, r as u64).map(|b| b as u64);
    Ok(finish(oracle, witness.is_none(), witness, truncated, s, budget))
}

/// Whether `verdict` is consistent: a rejection carries a copy of `F` whose
/// edges were all confirmed by the oracle.
pub fn witness_is_valid(verdict: &TesterVerdict, f: &Hypergraph, history: &History) -> bool {
    match (&verdict.witness, verdict.accept) {
        (None, true) => true,
        (Some(w), false) => {
            let all_confirmed = w.edges().iter().all(|e| history.e1().contains(e));
            let local = Hypergraph::from_edge_keys(history.e1().n(), f.r(), w.edges().iter().cloned());
            all_confirmed && w.vertices().len() == f.n() && local.is_ok_and(|g| census::count_copies(&g, f) >= 1)
        }
        _ => false,
    }
}

/// Whether every edge of `F` has at most one vertex in each of `k` classes
/// under some colouring.
pub fn is_k_partite(f: &Hypergraph, k: usize) -> bool {
    fn assign(f: &Hypergraph, k: usize, colour: &mut Vec<Option<usize>>, v: usize) -> bool {
        if v == f.n() {
            return true;
        }
        // symmetry: a new vertex never needs more than one fresh colour
        let used = colour[..v].iter().flatten().max().map_or(0, |&c| c + 1);
        for c in 0..k.min(used + 1) {
            colour[v] = Some(c);
            let ok = f.incidence(v).iter().all(|&ei| {
                let e = f.edge(ei);
                let cs: Vec<usize> = e.vertices().iter().filter_map(|&w| colour[w]).collect();
                let mut sorted = cs.clone();
                sorted.sort_unstable();
                sorted.dedup();
                sorted.len() == cs.len()
            });
            if ok && assign(f, k, colour, v + 1) {
                return true;
            }
        }
        colour[v] = None;
        false
    }
    assign(f, k, &mut vec![None; f.n()], 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundFamily {
    /// An `F`-free host with `nd/r` edges plus isolated vertices.
    F1,
    /// A clique on `⌈(nd(r−1)!)^{1/r}⌉` vertices plus isolated vertices.
    F2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundInstance {
    pub graph: Hypergraph,
    /// Vertices carrying the host or clique.
    pub core_vertices: usize,
    pub average_degree: f64,
}

fn host_candidate(h: usize, f: &Hypergraph) -> Option<Vec<EdgeKey>> {
    let r = f.r();
    if h < r {
        return None;
    }
    let parts = if r == 2 {
        let chi = (1..=f.n()).find(|&k| is_k_partite(f, k))?;
        (chi >= 3).then_some(chi - 1)
    } else {
        (!is_k_partite(f, r)).then_some(r)
    };
    if let Some(k) = parts {
        // complete k-partite: every part class is v mod k
        let edges = Combinations::new(h, r)
            .filter(|vs| {
                let mut cs: Vec<usize> = vs.iter().map(|v| v % k).collect();
                cs.sort_unstable();
                cs.dedup();
                cs.len() == r
            })
            .map(EdgeKey::from_sorted)
            .collect();
        return Some(edges);
    }
    let sets = binomial(h as u64, r as u64)?;
    if sets <= 21 {
        let ex = spanning::extremal_number_exact(h, f, spanning::DEFAULT_SEARCH_BUDGET).ok()?;
        return Some(ex.witness.edges().to_vec());
    }
    None
}

/// One labelled member of a lower-bound family, vertices shuffled.
pub fn build_lowerbound_family<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    f: &Hypergraph,
    which: LowerBoundFamily,
    rng: &mut R,
) -> Result<LowerBoundInstance, TestingError> {
    let r = f.r();
    let m = libm::round((n * d) as f64 / r as f64) as usize;
    let (core_vertices, mut edges) = match which {
        LowerBoundFamily::F1 => {
            let mut found = None;
            for h in r..=n {
                match host_candidate(h, f) {
                    Some(edges) if edges.len() >= m => {
                        found = Some((h, edges));
                        break;
                    }
                    Some(_) => {}
                    None if h > 7 => break,
                    None => {}
                }
            }
            let (h, mut edges) = found.ok_or(TestingError::ConstructionUnavailable("no F-free host with nd/r edges"))?;
            edges.shuffle(rng);
            edges.truncate(m);
            (h, edges)
        }
        LowerBoundFamily::F2 => {
            let k = libm::ceil(libm::pow(
                (n * d) as f64 * crate::combinatorics::factorial_f64((r - 1) as u64),
                1.0 / r as f64,
            )) as usize;
            if k > n {
                return Err(TestingError::ConstructionUnavailable("clique larger than n"));
            }
            (k, Combinations::new(k, r).map(EdgeKey::from_sorted).collect())
        }
    };
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    for e in &mut edges {
        *e = e.map(|v| perm[v]);
    }
    edges.sort();
    let graph = Hypergraph::from_edge_keys(n, r, edges)?;
    let average_degree = (r * graph.len()) as f64 / n as f64;
    Ok(LowerBoundInstance {
        graph,
        core_vertices,
        average_degree,
    })
}

/// Parameters of the blocked family.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockedFamilyParams {
    pub n_star: usize,
    pub t: usize,
    /// Exact block sizes; they sum to `n`.
    pub block_sizes: Vec<usize>,
    pub eta: f64,
}

impl BlockedFamilyParams {
    /// `n/t`.
    pub fn n_tilde(&self) -> f64 {
        self.block_sizes.iter().sum::<usize>() as f64 / self.t as f64
    }
}

/// Largest feasible `n0 ≤ n` with `Φ_{F,n0,d} ≥ (1 − η)·n0·d/r`.
pub fn n_star(n: usize, d: usize, f: &Hypergraph, eta: f64) -> Result<usize, TestingError> {
    if f.is_weak_forest() {
        return Err(TestingError::NoWeakForestPattern);
    }
    let r = f.r();
    for n0 in (r..=n).rev() {
        if !regular_exists(n0, r, d) {
            continue;
        }
        let phi = census::phi_f(n0, r, d, f, PhiOptions::default())?;
        if phi.value >= (1.0 - eta) * (n0 * d) as f64 / r as f64 {
            return Ok(n0);
        }
    }
    Err(TestingError::Infeasible { n, d })
}

pub fn blocked_family_params(n: usize, d: usize, f: &Hypergraph, eta: f64) -> Result<BlockedFamilyParams, TestingError> {
    let ns = n_star(n, d, f, eta)?;
    let t = n / ns;
    let r = f.r();
    let mut sizes = Vec::with_capacity(t);
    let mut remaining = n;
    for left in (1..=t).rev() {
        let target = remaining / left;
        let size = if left == 1 {
            Some(remaining).filter(|&s| regular_exists(s, r, d))
        } else {
            (0..=target)
                .flat_map(|k| [target + k, target.wrapping_sub(k)])
                .find(|&s| s <= remaining && regular_exists(s, r, d) && remaining - s >= (left - 1) * r)
        };
        let size = size.ok_or(TestingError::Infeasible { n, d })?;
        sizes.push(size);
        remaining -= size;
    }
    Ok(BlockedFamilyParams {
        n_star: ns,
        t,
        block_sizes: sizes,
        eta,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockedInstance {
    pub graph: Hypergraph,
    pub params: BlockedFamilyParams,
    pub blocks: Vec<Vec<Vertex>>,
}

/// Sampler used for the blocks unless told otherwise: the switching chain.
pub fn default_block_sampler() -> SamplerConfig {
    SamplerConfig::with_method(Method::Mcmc)
}

/// Disjoint union of independent uniform `d`-regular blocks on a random
/// partition of the vertex set.
pub fn build_blocked_instance<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    f: &Hypergraph,
    eta: f64,
    sampler_config: &SamplerConfig,
    rng: &mut R,
) -> Result<BlockedInstance, TestingError> {
    let params = blocked_family_params(n, d, f, eta)?;
    let r = f.r();
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    let mut blocks = Vec::with_capacity(params.t);
    let mut start = 0;
    for &size in &params.block_sizes {
        let block: Vec<Vertex> = perm[start..start + size].to_vec();
        start += size;
        let g = sampler::sample(size, r, d, sampler_config, rng)?;
        edges.extend(g.edges().iter().map(|e| e.map(|v| block[v])));
        let mut sorted = block;
        sorted.sort_unstable();
        blocks.push(sorted);
    }
    edges.sort();
    Ok(BlockedInstance {
        graph: Hypergraph::from_edge_keys(n, r, edges)?,
        params,
        blocks,
    })
}

/// Settings of the simple-history experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistoryExperiment {
    pub n: usize,
    pub d: usize,
    pub eta: f64,
    pub tester: TesterKind,
    pub eps: f64,
    pub c_simple: f64,
    pub seed: u64,
}

/// One run: a fresh blocked instance from stream `trial`, the tester under
/// a budget of `q` queries; returns whether the final history is not
/// simple.
pub fn history_trial(exp: &HistoryExperiment, f: &Hypergraph, q: Option<u64>, trial: u64) -> Result<bool, TestingError> {
    let mut rng = crate::seed_stream(exp.seed, trial);
    let inst = build_blocked_instance(exp.n, exp.d, f, exp.eta, &default_block_sampler(), &mut rng)?;
    let params = TesterParams::for_graph(&inst.graph);
    let mut oracle = Oracle::new(inst.graph, rng.gen()).with_budget(q);
    let kind = if exp.tester == TesterKind::EdgeRooted && !spanning::analyze_pattern(f).is_ok_and(|a| a.in_fe) {
        return Err(TestingError::NotInFE);
    } else {
        exp.tester
    };
    run_tester(kind, &mut oracle, f, exp.eps, &params, &mut rng)?;
    Ok(!is_simple(oracle.history(), exp.d as f64, exp.c_simple))
}

/// Fraction of `trials` runs whose history is not simple after `q`
/// queries.
pub fn simple_history_experiment(exp: &HistoryExperiment, f: &Hypergraph, q: Option<u64>, trials: u64) -> Result<f64, TestingError> {
    if trials == 0 {
        return Ok(0.0);
    }
    let mut bad = 0;
    for t in 0..trials {
        if history_trial(exp, f, q, t)? {
            bad += 1;
        }
    }
    Ok(bad as f64 / trials as f64)
}
