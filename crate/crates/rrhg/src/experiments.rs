//! Monte-Carlo drivers. Trial `i` always draws from `seed_stream(seed, i)`
//! and results are reduced in trial order, so output does not depend on
//! the number of worker threads.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rrhg_core::census::{self, CensusError};
use rrhg_core::combinatorics::{binomial, Combinations};
use rrhg_core::property_testing::{self as pt, HistoryExperiment, LowerBoundFamily, Oracle, TesterKind, TesterParams, TestingError};
use rrhg_core::sampler::{self, EdgeEstimate, SamplerConfig, SamplerError};
use rrhg_core::spanning::{self, SpanningError};
use rrhg_core::{seed_stream, EdgeKey, Hypergraph};
use serde::Serialize;

use crate::stats::{self, ChiSquare};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityRow {
    pub n: usize,
    pub r: usize,
    pub d: usize,
    pub method: &'static str,
    pub samples: u64,
    pub class_size: usize,
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
    pub min_count: u64,
    pub max_count: u64,
}

/// Draws `samples` graphs and tallies them over the enumerated class.
pub fn class_counts(n: usize, r: usize, d: usize, config: &SamplerConfig, samples: u64) -> Result<Vec<u64>, SamplerError> {
    class_counts_conditional(n, r, d, &[], &[], config, samples)
}

pub fn class_counts_conditional(
    n: usize,
    r: usize,
    d: usize,
    forced: &[EdgeKey],
    forbidden: &[EdgeKey],
    config: &SamplerConfig,
    samples: u64,
) -> Result<Vec<u64>, SamplerError> {
    let class = sampler::enumerate_conditional(n, r, d, forced, forbidden, config.node_budget)?;
    let index: BTreeMap<Vec<EdgeKey>, usize> = class.iter().enumerate().map(|(i, g)| (g.sorted_edges(), i)).collect();
    let picks: Vec<usize> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let g = sampler::sample_conditional(n, r, d, forced, forbidden, config, &mut seed_stream(config.seed, i))?;
            Ok(index[&g.sorted_edges()])
        })
        .collect::<Result<_, SamplerError>>()?;
    let mut counts = vec![0u64; class.len()];
    for p in picks {
        counts[p] += 1;
    }
    Ok(counts)
}

pub fn uniformity(n: usize, r: usize, d: usize, config: &SamplerConfig, samples: u64) -> Result<UniformityRow, SamplerError> {
    let counts = class_counts(n, r, d, config, samples)?;
    let chi: ChiSquare = stats::chi_square_uniform(&counts);
    Ok(UniformityRow {
        n,
        r,
        d,
        method: config.method.name(),
        samples,
        class_size: counts.len(),
        statistic: chi.statistic,
        dof: chi.dof,
        p_value: chi.p_value,
        min_count: counts.iter().copied().min().unwrap_or(0),
        max_count: counts.iter().copied().max().unwrap_or(0),
    })
}

/// Parallel version of [`sampler::estimate_edge_probability`]; identical
/// result for the same seed.
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
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| sampler::edge_trial(n, r, d, e, forced, forbidden, config, t))
        .collect::<Result<_, _>>()?;
    let k = hits.iter().filter(|&&h| h).count() as u64;
    Ok(EdgeEstimate::from_hits(k, trials, n, r, d))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub n: usize,
    pub r: usize,
    pub d: usize,
    pub edge: String,
    pub h_size: usize,
    pub h_prime_size: usize,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub formula: f64,
    pub relative_gap: f64,
    /// Enumeration-exact conditional probability, when the class is small
    /// enough to enumerate.
    pub exact: Option<f64>,
    pub z_exact: Option<f64>,
}

pub fn edge_label(e: &EdgeKey) -> String {
    e.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
}

/// Conditioning sets of sizes `0..=max_h` drawn from one reference member
/// of the class avoiding `e`: `H` from its edges, `H'` from its non-edges.
pub fn conditioning_sets(
    n: usize,
    r: usize,
    d: usize,
    e: &EdgeKey,
    max_h: usize,
    config: &SamplerConfig,
) -> Result<(Vec<EdgeKey>, Vec<EdgeKey>), SamplerError> {
    let reference = sampler::sample_conditional(
        n,
        r,
        d,
        &[],
        std::slice::from_ref(e),
        config,
        &mut seed_stream(config.seed, u64::MAX),
    )?;
    let h: Vec<EdgeKey> = reference.sorted_edges().into_iter().take(max_h).collect();
    let h_prime: Vec<EdgeKey> = Combinations::new(n, r)
        .map(|c| EdgeKey::new(&c).expect("distinct"))
        .filter(|s| s != e && !reference.contains(s))
        .take(max_h)
        .collect();
    Ok((h, h_prime))
}

#[allow(clippy::too_many_arguments)]
pub fn correlation_sweep(
    n: usize,
    r: usize,
    d: usize,
    e: &EdgeKey,
    max_h: usize,
    trials: u64,
    config: &SamplerConfig,
    exact_budget: u64,
) -> Result<Vec<CorrelationRow>, SamplerError> {
    let (h_all, hp_all) = conditioning_sets(n, r, d, e, max_h, config)?;
    let mut rows = Vec::new();
    for hs in 0..=h_all.len() {
        for hps in 0..=hp_all.len() {
            let (h, hp) = (&h_all[..hs], &hp_all[..hps]);
            let est = estimate_edge_probability(n, r, d, e, h, hp, trials, config)?;
            let exact = match sampler::exact_conditional_edge_probability(n, r, d, e, h, hp, exact_budget) {
                Ok(p) => Some(p.to_f64()),
                Err(SamplerError::TooLarge { .. }) => None,
                Err(err) => return Err(err),
            };
            rows.push(CorrelationRow {
                n,
                r,
                d,
                edge: edge_label(e),
                h_size: hs,
                h_prime_size: hps,
                trials,
                hits: est.hits,
                estimate: est.estimate,
                stderr: est.stderr,
                formula: est.formula_value,
                relative_gap: est.relative_gap,
                exact,
                z_exact: exact.map(|p| {
                    let se = stats::binomial_stderr(p, trials);
                    if se > 0.0 {
                        (est.estimate - p) / se
                    } else {
                        0.0
                    }
                }),
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HamiltonRow {
    pub n: usize,
    pub r: usize,
    pub ell: usize,
    pub d: usize,
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub smoothed: f64,
    pub expected_count: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Spanning(#[from] SpanningError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Testing(#[from] TestingError),
}

/// Existence frequency of an `ℓ`-overlapping Hamilton cycle in samples of
/// `G_{n,d}` for each `d`. Degrees with no `d`-regular graph are skipped.
pub fn hamilton_sweep(
    n: usize,
    r: usize,
    ell: usize,
    degrees: &[usize],
    trials: u64,
    config: &SamplerConfig,
    budget: u64,
) -> Result<Vec<HamiltonRow>, ExperimentError> {
    spanning::CyclePattern::new(n, r, ell)?;
    let mut rows = Vec::new();
    for &d in degrees {
        if !rrhg_core::hypergraph::regular_exists(n, r, d) {
            continue;
        }
        let stream_base = (d as u64) << 32;
        let found: Vec<bool> = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<bool, ExperimentError> {
                let g = sampler::sample(n, r, d, config, &mut seed_stream(config.seed, stream_base + t))?;
                Ok(spanning::has_hamilton(&g, ell, budget)?)
            })
            .collect::<Result<_, _>>()?;
        let hits = found.iter().filter(|&&x| x).count() as u64;
        rows.push(HamiltonRow {
            n,
            r,
            ell,
            d,
            trials,
            hits,
            frequency: hits as f64 / trials.max(1) as f64,
            smoothed: 0.0,
            expected_count: spanning::expected_hamilton(n, r, ell, d)?,
        });
    }
    let smoothed = stats::median3(&rows.iter().map(|r| r.frequency).collect::<Vec<_>>());
    for (row, s) in rows.iter_mut().zip(smoothed) {
        row.smoothed = s;
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// Disjoint union of regular blocks, far from `F`-free.
    Blocked,
    /// `F`-free host plus isolated vertices.
    FreeHost,
    /// Clique plus isolated vertices.
    Clique,
    /// One uniform `d`-regular graph.
    Regular,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Blocked => "blocked",
            InstanceKind::FreeHost => "f1",
            InstanceKind::Clique => "f2",
            InstanceKind::Regular => "regular",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "blocked" => Some(InstanceKind::Blocked),
            "f1" | "free" => Some(InstanceKind::FreeHost),
            "f2" | "clique" => Some(InstanceKind::Clique),
            "regular" => Some(InstanceKind::Regular),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TesterSetup {
    pub tester: TesterKind,
    pub instance: InstanceKind,
    pub pattern_name: String,
    pub pattern: Hypergraph,
    pub n: usize,
    pub d: usize,
    pub eta: f64,
    /// Overrides the measured farness.
    pub eps: Option<f64>,
    pub c: f64,
    pub c1: f64,
    pub copy_cap: usize,
    pub query_budget: Option<u64>,
    pub sampler: SamplerConfig,
}

impl TesterSetup {
    pub fn new(tester: TesterKind, instance: InstanceKind, pattern_name: &str, pattern: Hypergraph, n: usize, d: usize) -> Self {
        TesterSetup {
            tester,
            instance,
            pattern_name: pattern_name.into(),
            pattern,
            n,
            d,
            eta: 0.1,
            eps: None,
            c: pt::DEFAULT_C,
            c1: pt::DEFAULT_C1,
            copy_cap: census::DEFAULT_COPY_CAP,
            query_budget: None,
            sampler: pt::default_block_sampler(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TesterTrial {
    pub trial: u64,
    pub accept: bool,
    pub eps_measured: f64,
    pub farness_exact: bool,
    pub vset_queries: u64,
    pub nbr_queries: u64,
    pub sample_size: usize,
    pub analytic_budget: Option<u64>,
    pub truncated: bool,
    pub witness_valid: bool,
    pub history_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TesterRow {
    pub tester: &'static str,
    pub n: usize,
    pub r: usize,
    pub d: usize,
    pub pattern: String,
    pub eps_measured: f64,
    pub trials: u64,
    pub reject_rate: f64,
    pub mean_vset_queries: f64,
    pub mean_nbr_queries: f64,
    pub budget: Option<u64>,
}

pub fn build_instance(setup: &TesterSetup, rng: &mut rrhg_core::Rng) -> Result<Hypergraph, ExperimentError> {
    let (n, d, f) = (setup.n, setup.d, &setup.pattern);
    Ok(match setup.instance {
        InstanceKind::Blocked => pt::build_blocked_instance(n, d, f, setup.eta, &setup.sampler, rng)?.graph,
        InstanceKind::FreeHost => pt::build_lowerbound_family(n, d, f, LowerBoundFamily::F1, rng)?.graph,
        InstanceKind::Clique => pt::build_lowerbound_family(n, d, f, LowerBoundFamily::F2, rng)?.graph,
        InstanceKind::Regular => sampler::sample(n, f.r(), d, &setup.sampler, rng)?,
    })
}

pub fn tester_trial(setup: &TesterSetup, seed: u64, trial: u64) -> Result<TesterTrial, ExperimentError> {
    let mut rng = seed_stream(seed, trial);
    let g = build_instance(setup, &mut rng)?;
    let far = census::farness(&g, &setup.pattern, setup.copy_cap)?;
    let eps = setup.eps.unwrap_or(far.epsilon);
    let mut params = TesterParams::for_graph(&g);
    params.c = setup.c;
    params.c1 = setup.c1;
    let mut oracle = Oracle::new(g.clone(), rand::Rng::gen(&mut rng)).with_budget(setup.query_budget);
    let v = pt::run_tester(setup.tester, &mut oracle, &setup.pattern, eps, &params, &mut rng)?;
    Ok(TesterTrial {
        trial,
        accept: v.accept,
        eps_measured: far.epsilon,
        farness_exact: far.exact,
        vset_queries: v.queries.vertex_set,
        nbr_queries: v.queries.neighbour,
        sample_size: v.sample_size,
        analytic_budget: v.analytic_budget,
        truncated: v.truncated,
        witness_valid: pt::witness_is_valid(&v, &setup.pattern, oracle.history()),
        history_consistent: oracle.history().consistent_with(&g),
    })
}

pub fn tester_experiment(setup: &TesterSetup, seed: u64, trials: u64) -> Result<(TesterRow, Vec<TesterTrial>), ExperimentError> {
    let runs: Vec<TesterTrial> = (0..trials)
        .into_par_iter()
        .map(|t| tester_trial(setup, seed, t))
        .collect::<Result<_, _>>()?;
    let k = runs.len().max(1) as f64;
    let mean = |f: &dyn Fn(&TesterTrial) -> f64| runs.iter().map(f).sum::<f64>() / k;
    let row = TesterRow {
        tester: setup.tester.name(),
        n: setup.n,
        r: setup.pattern.r(),
        d: setup.d,
        pattern: setup.pattern_name.clone(),
        eps_measured: mean(&|t| t.eps_measured),
        trials,
        reject_rate: mean(&|t| if t.accept { 0.0 } else { 1.0 }),
        mean_vset_queries: mean(&|t| t.vset_queries as f64),
        mean_nbr_queries: mean(&|t| t.nbr_queries as f64),
        budget: setup.query_budget,
    };
    Ok((row, runs))
}

/// `C(s, r)`, the vertex-set queries a canonical run with sample size `s`
/// must issue.
pub fn canonical_query_count(s: usize, r: usize) -> u64 {
    binomial(s as u64, r as u64).map_or(u64::MAX, |b| b as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundRow {
    pub tester: &'static str,
    pub n: usize,
    pub r: usize,
    pub d: usize,
    pub pattern: String,
    pub q: Option<u64>,
    pub trials: u64,
    pub non_simple: u64,
    pub fraction: f64,
    pub smoothed: f64,
}

/// Fraction of non-simple histories for each query budget in `budgets`
/// (`None` means unlimited). Every budget reuses the same trial streams.
pub fn lowerbound_sweep(
    exp: &HistoryExperiment,
    pattern_name: &str,
    f: &Hypergraph,
    budgets: &[Option<u64>],
    trials: u64,
) -> Result<Vec<LowerBoundRow>, ExperimentError> {
    let mut rows = Vec::new();
    for &q in budgets {
        let bad: Vec<bool> = (0..trials)
            .into_par_iter()
            .map(|t| pt::history_trial(exp, f, q, t))
            .collect::<Result<_, _>>()?;
        let non_simple = bad.iter().filter(|&&b| b).count() as u64;
        rows.push(LowerBoundRow {
            tester: exp.tester.name(),
            n: exp.n,
            r: f.r(),
            d: exp.d,
            pattern: pattern_name.into(),
            q,
            trials,
            non_simple,
            fraction: non_simple as f64 / trials.max(1) as f64,
            smoothed: 0.0,
        });
    }
    let smoothed = stats::median3(&rows.iter().map(|r| r.fraction).collect::<Vec<_>>());
    for (row, s) in rows.iter_mut().zip(smoothed) {
        row.smoothed = s;
    }
    Ok(rows)
}
