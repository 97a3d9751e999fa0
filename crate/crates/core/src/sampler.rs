//! Enumeration and uniform sampling of `d`-regular `r`-graphs, plain and
//! conditioned on containing `H` and avoiding `H'`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::combinatorics::{binomial, binomial_f64, factorial_f64, Combinations, Ratio};
use crate::hypergraph::{regular_exists, EdgeKey, Hypergraph, HypergraphError, Vertex};
use crate::switching::SwitchChain;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_REJECTION_CAP: u64 = 1_000_000;
/// Conditioning classes on at most this many candidate edges are checked
/// for emptiness by enumeration before giving up on rejection sampling.
const TINY_CLASS_EDGES: u128 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("no {d}-regular {r}-graph on {n} vertices")]
    Infeasible { n: usize, r: usize, d: usize },
    #[error("enumeration exceeded the node budget of {budget}")]
    TooLarge { budget: u64 },
    #[error("no sample accepted within {attempts} attempts")]
    RejectionCapExceeded { attempts: u64 },
    #[error("the conditional class is empty")]
    EmptyClass,
    #[error("invalid conditioning: {0}")]
    InvalidConditioning(&'static str),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Enumerate,
    Pairing,
    Mcmc,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Enumerate => "enumerate",
            Method::Pairing => "pairing",
            Method::Mcmc => "mcmc",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "enumerate" => Some(Method::Enumerate),
            "pairing" => Some(Method::Pairing),
            "mcmc" => Some(Method::Mcmc),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub method: Method,
    pub seed: u64,
    /// Lazy switching steps; `None` means `200·n·d`.
    pub burn_in: Option<u64>,
    pub rejection_cap: u64,
    pub node_budget: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            method: Method::Pairing,
            seed: 0,
            burn_in: None,
            rejection_cap: DEFAULT_REJECTION_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl SamplerConfig {
    pub fn with_method(method: Method) -> Self {
        SamplerConfig {
            method,
            ..SamplerConfig::default()
        }
    }

    pub fn burn_in_for(&self, n: usize, d: usize) -> u64 {
        self.burn_in.unwrap_or(200 * n as u64 * d as u64)
    }
}

fn check_feasible(n: usize, r: usize, d: usize) -> Result<(), SamplerError> {
    if regular_exists(n, r, d) {
        Ok(())
    } else {
        Err(SamplerError::Infeasible { n, r, d })
    }
}

/// Every labelled `d`-regular `r`-graph on `n` vertices, each once.
pub fn enumerate_regular(n: usize, r: usize, d: usize, node_budget: u64) -> Result<Vec<Hypergraph>, SamplerError> {
    enumerate_conditional(n, r, d, &[], &[], node_budget)
}

/// Every member of `G_{n,d,H,H'}`: `d`-regular, containing `forced`,
/// avoiding `forbidden`.
pub fn enumerate_conditional(
    n: usize,
    r: usize,
    d: usize,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    node_budget: u64,
) -> Result<Vec<Hypergraph>, SamplerError> {
    let mut search = Enumerator::new(n, r, d, forced, forbidden, node_budget, Sink::Collect)?;
    if let Some(search) = search.as_mut() {
        search.search()?;
    }
    Ok(search.map(|s| s.results).unwrap_or_default())
}

/// `|G_{n,d,H,H'}|` without storing the members.
pub fn count_conditional(
    n: usize,
    r: usize,
    d: usize,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    node_budget: u64,
) -> Result<u64, SamplerError> {
    let Some(mut search) = Enumerator::new(n, r, d, forced, forbidden, node_budget, Sink::Count)? else {
        return Ok(0);
    };
    search.search()?;
    Ok(search.count)
}

/// The `k`-th member (0-based) in enumeration order.
fn nth_conditional(
    n: usize,
    r: usize,
    d: usize,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    node_budget: u64,
    k: u64,
) -> Result<Option<Hypergraph>, SamplerError> {
    let Some(mut search) = Enumerator::new(n, r, d, forced, forbidden, node_budget, Sink::Nth(k))? else {
        return Ok(None);
    };
    search.search()?;
    Ok(search.results.pop())
}

/// Uniform member of `G_{n,d,H,H'}` by counting and then walking the
/// enumeration to a random index.
fn sample_enumerated<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    d: usize,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    node_budget: u64,
    rng: &mut R,
) -> Result<Option<Hypergraph>, SamplerError> {
    let size = count_conditional(n, r, d, forced, forbidden, node_budget)?;
    if size == 0 {
        return Ok(None);
    }
    nth_conditional(n, r, d, forced, forbidden, node_budget, rng.gen_range(0..size))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sink {
    Collect,
    Count,
    Nth(u64),
}

struct Enumerator {
    n: usize,
    r: usize,
    deficit: Vec<i64>,
    forced: Vec<EdgeKey>,
    excluded: BTreeSet<EdgeKey>,
    chosen: Vec<EdgeKey>,
    results: Vec<Hypergraph>,
    sink: Sink,
    count: u64,
    done: bool,
    nodes: u64,
    budget: u64,
}

impl Enumerator {
    /// `None` when the class is trivially empty.
    fn new(
        n: usize,
        r: usize,
        d: usize,
        forced: &[EdgeKey],
        forbidden: &[EdgeKey],
        budget: u64,
        sink: Sink,
    ) -> Result<Option<Self>, SamplerError> {
        check_feasible(n, r, d)?;
        let forced_set: BTreeSet<EdgeKey> = forced.iter().cloned().collect();
        let forbidden_set: BTreeSet<EdgeKey> = forbidden.iter().cloned().collect();
        for e in forced.iter().chain(forbidden) {
            if e.len() != r || e.vertices().iter().any(|&v| v >= n) {
                return Err(SamplerError::InvalidConditioning("edge does not fit the vertex set"));
            }
        }
        if forced_set.len() != forced.len() {
            return Err(SamplerError::InvalidConditioning("H repeats an edge"));
        }
        if forced_set.iter().any(|e| forbidden_set.contains(e)) {
            return Ok(None);
        }
        let mut deficit = vec![d as i64; n];
        for e in forced {
            for &v in e.vertices() {
                deficit[v] -= 1;
            }
        }
        if deficit.iter().any(|&x| x < 0) {
            return Ok(None);
        }
        Ok(Some(Enumerator {
            n,
            r,
            deficit,
            forced: forced.to_vec(),
            excluded: forced_set.union(&forbidden_set).cloned().collect(),
            chosen: Vec::new(),
            results: Vec::new(),
            sink,
            count: 0,
            done: false,
            nodes: 0,
            budget,
        }))
    }

    fn leaf(&mut self) -> Result<(), SamplerError> {
        let keep = match self.sink {
            Sink::Collect => true,
            Sink::Count => false,
            Sink::Nth(k) => {
                self.done = self.count == k;
                self.done
            }
        };
        self.count += 1;
        if keep {
            let edges = self.forced.iter().chain(&self.chosen).cloned();
            self.results.push(Hypergraph::from_edge_keys(self.n, self.r, edges)?);
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<(), SamplerError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(SamplerError::TooLarge { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Completes the smallest vertex with positive deficit. All of its
    /// missing edges consist of it and higher vertices with deficit.
    fn search(&mut self) -> Result<(), SamplerError> {
        self.tick()?;
        let Some(v) = (0..self.n).find(|&v| self.deficit[v] > 0) else {
            return self.leaf();
        };
        let others: Vec<Vertex> = (v + 1..self.n).filter(|&w| self.deficit[w] > 0).collect();
        let candidates: Vec<EdgeKey> = Combinations::new(others.len(), self.r - 1)
            .map(|idx| {
                let mut vs = Vec::with_capacity(self.r);
                vs.push(v);
                vs.extend(idx.into_iter().map(|i| others[i]));
                EdgeKey::from_sorted(vs)
            })
            .filter(|e| !self.excluded.contains(e))
            .collect();
        self.pick(v, &candidates, 0)
    }

    fn pick(&mut self, v: Vertex, candidates: &[EdgeKey], start: usize) -> Result<(), SamplerError> {
        if self.deficit[v] == 0 {
            return self.search();
        }
        self.tick()?;
        if ((candidates.len() - start) as i64) < self.deficit[v] {
            return Ok(());
        }
        for i in start..candidates.len() {
            if self.done {
                break;
            }
            let c = &candidates[i];
            if c.vertices().iter().any(|&w| self.deficit[w] == 0) {
                continue;
            }
            for &w in c.vertices() {
                self.deficit[w] -= 1;
            }
            self.chosen.push(c.clone());
            let res = self.pick(v, candidates, i + 1);
            self.chosen.pop();
            for &w in c.vertices() {
                self.deficit[w] += 1;
            }
            res?;
        }
        Ok(())
    }
}

/// Pairing model: `nd` stubs shuffled and cut into groups of `r`; an
/// attempt is rejected on a repeated vertex inside a group or on a repeated
/// group.
pub fn sample_pairing<R: Rng + ?Sized>(n: usize, r: usize, d: usize, rejection_cap: u64, rng: &mut R) -> Result<Hypergraph, SamplerError> {
    check_feasible(n, r, d)?;
    let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| core::iter::repeat_n(v, d)).collect();
    for _ in 0..rejection_cap {
        stubs.shuffle(rng);
        if let Some(edges) = group_stubs(&stubs, r) {
            return Ok(Hypergraph::from_edge_keys(n, r, edges)?);
        }
    }
    Err(SamplerError::RejectionCapExceeded { attempts: rejection_cap })
}

fn group_stubs(stubs: &[Vertex], r: usize) -> Option<Vec<EdgeKey>> {
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(stubs.len() / r);
    for chunk in stubs.chunks(r) {
        let mut vs = chunk.to_vec();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let key = EdgeKey::from_sorted(vs);
        if !seen.insert(key.clone()) {
            return None;
        }
        edges.push(key);
    }
    Some(edges)
}

const START_SEED: u64 = 0x5747_4152_5452_4753;

/// Deterministic `d`-regular start graph: an edge-disjoint union of
/// `d/r_2` relabelled `(r − r_1)`-overlapping cycles where `r = r_1 r_2`,
/// `r_1 | n`, `r_2 | d`. Dense instances use the complement of a sparse
/// one.
pub fn start_graph(n: usize, r: usize, d: usize) -> Result<Hypergraph, SamplerError> {
    check_feasible(n, r, d)?;
    let max = binomial((n - 1) as u64, (r - 1) as u64).unwrap_or(u128::MAX);
    if d == 0 {
        return Ok(Hypergraph::empty(n, r)?);
    }
    if d as u128 == max {
        return Ok(Hypergraph::complete(n, r)?);
    }
    if (d as u128) * 2 > max {
        let sparse = start_graph(n, r, (max - d as u128) as usize)?;
        return Ok(sparse.complement());
    }
    let mut rng = crate::seed_stream(START_SEED, 0);
    for r1 in (1..=r).filter(|&r1| r.is_multiple_of(r1) && n.is_multiple_of(r1)) {
        let r2 = r / r1;
        if !d.is_multiple_of(r2) {
            continue;
        }
        let Ok(cycle) = crate::spanning::overlap_cycle_pattern(n, r, r - r1) else {
            continue;
        };
        if let Some(g) = stack_cycles(&cycle, d / r2, &mut rng) {
            return Ok(g);
        }
    }
    for _ in 0..64 {
        if let Ok(g) = sample_pairing(n, r, d, 10_000, &mut rng) {
            return Ok(g);
        }
    }
    enumerate_regular(n, r, d, DEFAULT_NODE_BUDGET)?
        .into_iter()
        .next()
        .ok_or(SamplerError::Infeasible { n, r, d })
}

/// `layers` edge-disjoint relabellings of `cycle`, chosen greedily with
/// bounded backtracking.
fn stack_cycles(cycle: &Hypergraph, layers: usize, rng: &mut crate::Rng) -> Option<Hypergraph> {
    const TRIES_PER_LAYER: usize = 200;
    const RESTARTS: usize = 50;
    let n = cycle.n();
    let mut identity: Vec<Vertex> = (0..n).collect();
    for _ in 0..RESTARTS {
        let mut used: BTreeSet<EdgeKey> = BTreeSet::new();
        let mut stack: Vec<Vec<EdgeKey>> = Vec::new();
        let mut failures = 0;
        while stack.len() < layers && failures < TRIES_PER_LAYER * layers {
            // the first layer keeps the natural labelling
            if !stack.is_empty() {
                identity.shuffle(rng);
            } else {
                identity.sort_unstable();
            }
            let layer: Vec<EdgeKey> = cycle.edges().iter().map(|e| e.map(|v| identity[v])).collect();
            if layer.iter().all(|e| !used.contains(e)) {
                used.extend(layer.iter().cloned());
                stack.push(layer);
            } else {
                failures += 1;
                if failures % TRIES_PER_LAYER == 0 && stack.len() > 1 {
                    for e in stack.pop().expect("nonempty") {
                        used.remove(&e);
                    }
                }
            }
        }
        if stack.len() == layers {
            return Hypergraph::from_edge_keys(n, cycle.r(), stack.into_iter().flatten()).ok();
        }
    }
    None
}

/// Start graph followed by `burn_in` lazy switching steps.
pub fn sample_mcmc<R: Rng + ?Sized>(n: usize, r: usize, d: usize, burn_in: u64, rng: &mut R) -> Result<Hypergraph, SamplerError> {
    let start = start_graph(n, r, d)?;
    if burn_in == 0 {
        return Ok(start);
    }
    let mut chain = SwitchChain::new(&start);
    for _ in 0..burn_in {
        chain.step(rng);
    }
    Ok(chain.to_hypergraph())
}

/// Uniform element of `G_{n,d}` by the configured method.
pub fn sample<R: Rng + ?Sized>(n: usize, r: usize, d: usize, config: &SamplerConfig, rng: &mut R) -> Result<Hypergraph, SamplerError> {
    match config.method {
        Method::Pairing => sample_pairing(n, r, d, config.rejection_cap, rng),
        Method::Mcmc => sample_mcmc(n, r, d, config.burn_in_for(n, d), rng),
        Method::Enumerate => sample_enumerated(n, r, d, &[], &[], config.node_budget, rng)?.ok_or(SamplerError::Infeasible { n, r, d }),
    }
}

fn validate_conditioning(n: usize, r: usize, d: usize, forced: &[EdgeKey], forbidden: &[EdgeKey]) -> Result<(), SamplerError> {
    let mut deg = vec![0usize; n];
    for e in forced.iter().chain(forbidden) {
        if e.len() != r || e.vertices().iter().any(|&v| v >= n) {
            return Err(SamplerError::InvalidConditioning("edge does not fit the vertex set"));
        }
    }
    let h: BTreeSet<&EdgeKey> = forced.iter().collect();
    if forbidden.iter().any(|e| h.contains(e)) {
        return Err(SamplerError::InvalidConditioning("H and H' share an edge"));
    }
    for e in &h {
        for &v in e.vertices() {
            deg[v] += 1;
        }
    }
    if deg.iter().any(|&x| x > d) {
        return Err(SamplerError::InvalidConditioning("H has a vertex of degree above d"));
    }
    Ok(())
}

fn in_class(g: &Hypergraph, forced: &[EdgeKey], forbidden: &[EdgeKey]) -> bool {
    forced.iter().all(|e| g.contains(e)) && forbidden.iter().all(|e| !g.contains(e))
}

/// Uniform element of `G_{n,d,H,H'}` by rejection from the unconditional
/// sampler (or directly from the enumerated class).
pub fn sample_conditional<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    d: usize,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    config: &SamplerConfig,
    rng: &mut R,
) -> Result<Hypergraph, SamplerError> {
    check_feasible(n, r, d)?;
    validate_conditioning(n, r, d, forced, forbidden)?;
    if config.method == Method::Enumerate {
        return sample_enumerated(n, r, d, forced, forbidden, config.node_budget, rng)?.ok_or(SamplerError::EmptyClass);
    }
    for _ in 0..config.rejection_cap {
        let g = sample(n, r, d, config, rng)?;
        if in_class(&g, forced, forbidden) {
            return Ok(g);
        }
    }
    let tiny = binomial(n as u64, r as u64).is_some_and(|m| m <= TINY_CLASS_EDGES);
    if tiny && count_conditional(n, r, d, forced, forbidden, config.node_budget)? == 0 {
        return Err(SamplerError::EmptyClass);
    }
    Err(SamplerError::RejectionCapExceeded {
        attempts: config.rejection_cap,
    })
}

/// `P[e ∈ G_{n,d}] = (nd/r) / C(n,r)`, exact by symmetry.
pub fn theoretical_edge_probability(n: usize, r: usize, d: usize) -> Result<Ratio, SamplerError> {
    check_feasible(n, r, d)?;
    let total = binomial(n as u64, r as u64).ok_or(SamplerError::TooLarge { budget: 0 })?;
    Ok(Ratio::new((n * d / r) as u128, total))
}

/// Exact `P[e ∈ G | G ∈ G_{n,d,H,H'}]` from the enumerated class.
pub fn exact_conditional_edge_probability(
    n: usize,
    r: usize,
    d: usize,
    e: &EdgeKey,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    node_budget: u64,
) -> Result<Ratio, SamplerError> {
    check_target(e, forced, forbidden)?;
    let class = enumerate_conditional(n, r, d, forced, forbidden, node_budget)?;
    if class.is_empty() {
        return Err(SamplerError::EmptyClass);
    }
    let hits = class.iter().filter(|g| g.contains(e)).count();
    Ok(Ratio::new(hits as u128, class.len() as u128))
}

fn check_target(e: &EdgeKey, forced: &[EdgeKey], forbidden: &[EdgeKey]) -> Result<(), SamplerError> {
    if forced.contains(e) || forbidden.contains(e) {
        Err(SamplerError::InvalidConditioning("target edge lies in H or H'"))
    } else {
        Ok(())
    }
}

/// Monte-Carlo estimate of a conditional edge probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    /// `(r−1)!·d/n^{r−1}`.
    pub formula_value: f64,
    /// `|estimate − formula_value| / formula_value`.
    pub relative_gap: f64,
}

impl EdgeEstimate {
    pub fn from_hits(hits: u64, trials: u64, n: usize, r: usize, d: usize) -> Self {
        let estimate = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
        let stderr = if trials == 0 {
            0.0
        } else {
            libm::sqrt(estimate * (1.0 - estimate) / trials as f64)
        };
        let formula_value = formula_probability(n, r, d);
        EdgeEstimate {
            hits,
            trials,
            estimate,
            stderr,
            formula_value,
            relative_gap: if formula_value > 0.0 {
                libm::fabs(estimate - formula_value) / formula_value
            } else {
                0.0
            },
        }
    }
}

fn formula_probability(n: usize, r: usize, d: usize) -> f64 {
    factorial_f64((r - 1) as u64) * d as f64 / libm::pow(n as f64, (r - 1) as f64)
}

/// Whether one conditional sample from stream `trial` contains `e`.
#[allow(clippy::too_many_arguments)]
pub fn edge_trial(
    n: usize,
    r: usize,
    d: usize,
    e: &EdgeKey,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    config: &SamplerConfig,
    trial: u64,
) -> Result<bool, SamplerError> {
    let mut rng = crate::seed_stream(config.seed, trial);
    Ok(sample_conditional(n, r, d, forced, forbidden, config, &mut rng)?.contains(e))
}

/// Sequential estimate over `trials` independent streams of `config.seed`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_edge_probability(
    n: usize,
    r: usize,
    d: usize,
    e: &EdgeKey,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    trials: u64,
    config: &SamplerConfig,
) -> Result<EdgeEstimate, SamplerError> {
    check_target(e, forced, forbidden)?;
    let mut hits = 0;
    for t in 0..trials {
        if edge_trial(n, r, d, e, forced, forbidden, config, t)? {
            hits += 1;
        }
    }
    Ok(EdgeEstimate::from_hits(hits, trials, n, r, d))
}

/// Quantities attached to the sandwich coupling between `G_{n,d}` and the
/// binomial and uniform-size models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticParams {
    pub p: f64,
    pub p_exact: f64,
    pub eps_nd: f64,
    pub delta_nd: f64,
    pub p_d: f64,
    pub m_d: f64,
    pub c: f64,
    /// `δ_{n,d} < 1`.
    pub applicable: bool,
}

pub fn asymptotic_params(n: usize, r: usize, d: usize, c: f64) -> AsymptoticParams {
    let nf = n as f64;
    let df = d as f64;
    let n_pow = libm::pow(nf, (r - 1) as f64);
    let p = factorial_f64((r - 1) as u64) * df / n_pow;
    let p_exact = (nf * df / r as f64) / binomial_f64(n as u64, r as u64);
    let eps_nd = 1.0 / nf + 1.0 / df + df / n_pow;
    let delta_nd = c * (libm::cbrt(df / n_pow + libm::log(nf) / df) + 1.0 / nf);
    let keep = (1.0 - delta_nd).max(0.0);
    AsymptoticParams {
        p,
        p_exact,
        eps_nd,
        delta_nd,
        p_d: keep * df / binomial_f64((n - 1) as u64, (r - 1) as u64),
        m_d: keep * nf * df / r as f64,
        c,
        applicable: delta_nd < 1.0,
    }
}

/// `G^{(r)}(n, p)`.
pub fn sample_binomial<R: Rng + ?Sized>(n: usize, r: usize, p: f64, rng: &mut R) -> Result<Hypergraph, SamplerError> {
    let edges = Combinations::new(n, r)
        .filter(|_| rng.gen_bool(p.clamp(0.0, 1.0)))
        .map(EdgeKey::from_sorted)
        .collect::<Vec<_>>();
    Ok(Hypergraph::from_edge_keys(n, r, edges)?)
}

/// `G^{(r)}(n, m)`.
pub fn sample_uniform_m<R: Rng + ?Sized>(n: usize, r: usize, m: usize, rng: &mut R) -> Result<Hypergraph, SamplerError> {
    let all: Vec<Vec<Vertex>> = Combinations::new(n, r).collect();
    if m > all.len() {
        return Err(SamplerError::InvalidConditioning("more edges than r-sets"));
    }
    let mut picked: Vec<usize> = index::sample(rng, all.len(), m).into_vec();
    picked.sort_unstable();
    Ok(Hypergraph::from_edge_keys(
        n,
        r,
        picked.into_iter().map(|i| EdgeKey::from_sorted(all[i].clone())),
    )?)
}
