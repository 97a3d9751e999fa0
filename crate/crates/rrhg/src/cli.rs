//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rrhg_core::census::{self, CensusError, EdgeProbability, PhiOptions};
use rrhg_core::hypergraph::HypergraphError;
use rrhg_core::property_testing::{self as pt, HistoryExperiment, TesterKind, TestingError};
use rrhg_core::sampler::{self, Method, SamplerConfig, SamplerError};
use rrhg_core::spanning::{self, SpanningError};
use rrhg_core::switching::SwitchError;
use rrhg_core::text::{self, ParseError};
use rrhg_core::{patterns, seed_stream, EdgeKey, Hypergraph};
use serde::Serialize;

use crate::experiments::{self as ex, ExperimentError, InstanceKind, TesterSetup};
use crate::report::{self, ExperimentRecord};

#[derive(Parser, Debug)]
#[command(name = "rrhg", version, about = "Random regular hypergraph experiments")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw one d-regular r-graph and print it in text format.
    Sample(SampleArgs),
    /// Enumerate G_{n,d} (optionally conditioned on H and H').
    Enumerate(EnumerateArgs),
    /// Estimate P[e ∈ G] over conditioning sets of growing size.
    VerifyCorrelation(CorrelationArgs),
    /// Count copies of a pattern and compare with the expected count.
    Census(CensusArgs),
    /// Edge-disjoint packings and deletion distance.
    Pack(PackArgs),
    /// Existence frequency of overlapping Hamilton cycles across d.
    Hamilton(HamiltonArgs),
    /// Diameter, F_E membership, overlap index and density of a pattern.
    AnalyzePattern(PatternArgs),
    /// Run a property tester over generated instances.
    Test(TestArgs),
    /// Simple-history fraction against the query budget.
    Lowerbound(LowerboundArgs),
    /// Line plot (SVG) from a CSV table.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// pairing, mcmc or enumerate.
    #[arg(long, default_value = "pairing")]
    pub method: String,
    /// Switching steps for mcmc (default 200·n·d).
    #[arg(long)]
    pub burnin: Option<u64>,
}

impl SamplerArgs {
    fn config(&self, node_budget: Option<u64>) -> Result<SamplerConfig> {
        let method = Method::parse(&self.method).ok_or_else(|| anyhow!("unknown method {:?}", self.method))?;
        let mut cfg = SamplerConfig::with_method(method);
        cfg.seed = self.seed;
        cfg.burn_in = self.burnin;
        if let Some(b) = node_budget {
            cfg.node_budget = b;
        }
        Ok(cfg)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ShapeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long)]
    pub d: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Enumeration node cap.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Forced edges H, e.g. "0-1,2-3".
    #[arg(long, default_value = "")]
    pub forced: String,
    /// Forbidden edges H'.
    #[arg(long, default_value = "")]
    pub forbidden: String,
    /// Search node cap.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Print every member in text format instead of the summary row.
    #[arg(long)]
    pub list: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CorrelationArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Target edge (default 0-1-…-(r−1)).
    #[arg(long)]
    pub edge: Option<String>,
    /// Largest |H| and |H'| in the sweep.
    #[arg(long, default_value_t = 2)]
    pub max_h: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Node cap for the exact enumeration column.
    #[arg(long, default_value_t = 2_000_000)]
    pub budget: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GraphSource {
    /// Hypergraph file in text format; otherwise one is sampled.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    pub sampler: SamplerArgs,
}

impl GraphSource {
    fn load(&self) -> Result<Hypergraph> {
        match (&self.graph, self.n, self.d) {
            (Some(path), _, _) => {
                let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(text::parse(&s)?)
            }
            (None, Some(n), Some(d)) => {
                let cfg = self.sampler.config(None)?;
                Ok(sampler::sample(n, self.r, d, &cfg, &mut seed_stream(cfg.seed, 0))?)
            }
            _ => bail!("give --graph PATH or --n and --d"),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CensusArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long)]
    pub pattern: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PackArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long)]
    pub pattern: String,
    /// Largest number of copies handed to the exact solvers.
    #[arg(long, default_value_t = census::DEFAULT_COPY_CAP)]
    pub budget: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HamiltonArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// Degrees: "2:10", "2:10:2" or "3,5,8".
    #[arg(long)]
    pub d_sweep: String,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "mcmc")]
    pub method: String,
    #[arg(long)]
    pub burnin: Option<u64>,
    /// Search node cap per instance.
    #[arg(long, default_value_t = spanning::DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PatternArgs {
    #[arg(long)]
    pub pattern: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TestArgs {
    /// bfs, edge-bfs or canonical.
    #[arg(long, default_value = "canonical")]
    pub tester: String,
    #[arg(long, default_value = "triangle")]
    pub pattern: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// blocked, f1, f2 or regular.
    #[arg(long, default_value = "blocked")]
    pub instance: String,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Proximity parameter; defaults to the measured farness.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = pt::DEFAULT_C)]
    pub c: f64,
    #[arg(long, default_value_t = pt::DEFAULT_C1)]
    pub c1: f64,
    /// Query cap per run.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Emit one row per run.
    #[arg(long)]
    pub per_trial: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LowerboundArgs {
    #[arg(long, default_value = "triangle")]
    pub pattern: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    #[arg(long, default_value = "canonical")]
    pub tester: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Query budgets, e.g. "0:2000:250,full".
    #[arg(long)]
    pub q_sweep: String,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = pt::DEFAULT_C_SIMPLE)]
    pub c_simple: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub x: String,
    /// Comma-separated y columns.
    #[arg(long)]
    pub y: String,
    #[arg(long, default_value = "")]
    pub title: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `"0-1,2-3"` → two edges.
pub fn parse_edges(s: &str) -> Result<Vec<EdgeKey>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(parse_edge).collect()
}

pub fn parse_edge(s: &str) -> Result<EdgeKey> {
    let vs: Vec<usize> = s
        .split('-')
        .map(|v| v.trim().parse().with_context(|| format!("bad edge {s:?}")))
        .collect::<Result<_>>()?;
    Ok(EdgeKey::new(&vs)?)
}

/// `"a:b"`, `"a:b:step"` or a comma list; `full` stands for no limit.
pub fn parse_sweep(s: &str) -> Result<Vec<Option<u64>>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "full" {
            out.push(None);
            continue;
        }
        let nums: Vec<u64> = part
            .split(':')
            .map(|x| x.parse().with_context(|| format!("bad sweep {part:?}")))
            .collect::<Result<_>>()?;
        match nums[..] {
            [v] => out.push(Some(v)),
            [a, b] => out.extend((a..=b).map(Some)),
            [a, b, step] if step > 0 => out.extend((a..=b).step_by(step as usize).map(Some)),
            _ => bail!("bad sweep {part:?}"),
        }
    }
    if out.is_empty() {
        bail!("empty sweep");
    }
    Ok(out)
}

fn pattern(name: &str) -> Result<Hypergraph> {
    patterns::by_name(name).ok_or_else(|| anyhow!("unknown pattern {name:?}"))
}

fn tester_kind(name: &str) -> Result<TesterKind> {
    TesterKind::parse(name).ok_or_else(|| anyhow!("unknown tester {name:?}"))
}

struct Emitter {
    experiment: &'static str,
    seed: u64,
    trials: u64,
    params: serde_json::Value,
    started: Instant,
}

impl Emitter {
    fn emit<T: Serialize + Clone>(&self, output: &OutputArgs, rows: &[T], stdout: &mut dyn Write) -> Result<()> {
        let body = match output.format {
            Format::Csv => report::to_csv(rows)?,
            Format::Json => {
                let params: BTreeMap<String, serde_json::Value> = match &self.params {
                    serde_json::Value::Object(m) => m.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
                    _ => BTreeMap::new(),
                };
                ExperimentRecord {
                    experiment: self.experiment.into(),
                    versions: report::VERSIONS,
                    master_seed: self.seed,
                    params,
                    trials: self.trials,
                    rows: rows.to_vec(),
                    wall_time_ms: self.started.elapsed().as_millis(),
                }
                .to_json()?
            }
        };
        write_out(output.out.as_ref(), &body, stdout)
    }
}

fn write_out(path: Option<&PathBuf>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => Ok(stdout.write_all(body.as_bytes())?),
    }
}

#[derive(Clone, Serialize)]
struct EnumerateRow {
    n: usize,
    r: usize,
    d: usize,
    h_size: usize,
    h_prime_size: usize,
    class_size: u64,
}

#[derive(Clone, Serialize)]
struct CensusRow {
    n: usize,
    r: usize,
    edges: usize,
    d: Option<usize>,
    pattern: String,
    copies: u64,
    aut: u128,
    expected_exact: Option<f64>,
    expected_asymptotic: Option<f64>,
    phi: Option<f64>,
}

#[derive(Clone, Serialize)]
struct PackRow {
    n: usize,
    r: usize,
    edges: usize,
    pattern: String,
    copies: usize,
    conflict_pairs: usize,
    turan_bound: u64,
    greedy: usize,
    exact: Option<usize>,
    deletions: usize,
    deletions_exact: bool,
    epsilon: f64,
}

#[derive(Clone, Serialize)]
struct PatternRow {
    pattern: String,
    v: usize,
    e: usize,
    r: usize,
    diameter: usize,
    in_fe: bool,
    ell: usize,
    beta: Option<f64>,
    aut: u128,
    overlap_witness: String,
}

fn regular_degree(g: &Hypergraph) -> Option<usize> {
    let d = g.degrees().first().copied()?;
    g.is_regular(d).then_some(d)
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let params = match &cli.command {
        Command::Sample(a) => serde_json::to_value(a),
        Command::Enumerate(a) => serde_json::to_value(a),
        Command::VerifyCorrelation(a) => serde_json::to_value(a),
        Command::Census(a) => serde_json::to_value(a),
        Command::Pack(a) => serde_json::to_value(a),
        Command::Hamilton(a) => serde_json::to_value(a),
        Command::AnalyzePattern(a) => serde_json::to_value(a),
        Command::Test(a) => serde_json::to_value(a),
        Command::Lowerbound(a) => serde_json::to_value(a),
        Command::Report(a) => serde_json::to_value(a),
    }?;
    let em = |experiment, seed, trials| Emitter {
        experiment,
        seed,
        trials,
        params: params.clone(),
        started,
    };
    match cli.command {
        Command::Sample(a) => {
            let cfg = a.sampler.config(a.budget)?;
            let g = sampler::sample(a.shape.n, a.shape.r, a.shape.d, &cfg, &mut seed_stream(cfg.seed, 0))?;
            write_out(a.out.as_ref(), &text::serialize(&g), stdout)
        }
        Command::Enumerate(a) => {
            let (forced, forbidden) = (parse_edges(&a.forced)?, parse_edges(&a.forbidden)?);
            let budget = a.budget.unwrap_or(sampler::DEFAULT_NODE_BUDGET);
            let ShapeArgs { n, r, d } = a.shape;
            if a.list {
                let class = sampler::enumerate_conditional(n, r, d, &forced, &forbidden, budget)?;
                let body: Vec<String> = class.iter().map(text::serialize).collect();
                return write_out(a.output.out.as_ref(), &body.join("\n"), stdout);
            }
            let class_size = sampler::count_conditional(n, r, d, &forced, &forbidden, budget)?;
            let row = EnumerateRow {
                n,
                r,
                d,
                h_size: forced.len(),
                h_prime_size: forbidden.len(),
                class_size,
            };
            em("enumerate", 0, 0).emit(&a.output, &[row], stdout)
        }
        Command::VerifyCorrelation(a) => {
            let ShapeArgs { n, r, d } = a.shape;
            let e = match &a.edge {
                Some(s) => parse_edge(s)?,
                None => EdgeKey::new(&(0..r).collect::<Vec<_>>())?,
            };
            let cfg = a.sampler.config(None)?;
            let rows = ex::correlation_sweep(n, r, d, &e, a.max_h, a.trials, &cfg, a.budget)?;
            em("verify-correlation", cfg.seed, a.trials).emit(&a.output, &rows, stdout)
        }
        Command::Census(a) => {
            let g = a.source.load()?;
            let f = pattern(&a.pattern)?;
            if f.r() != g.r() {
                return Err(CensusError::UniformityMismatch.into());
            }
            let d = regular_degree(&g);
            let expected = |model| d.map(|d| census::expected_copies(g.n(), g.r(), d, &f, model)).transpose();
            let row = CensusRow {
                n: g.n(),
                r: g.r(),
                edges: g.len(),
                d,
                pattern: a.pattern.clone(),
                copies: census::count_copies(&g, &f),
                aut: census::automorphism_count(&f)?,
                expected_exact: expected(EdgeProbability::Exact)?,
                expected_asymptotic: expected(EdgeProbability::Asymptotic)?,
                phi: d
                    .map(|d| census::phi_f(g.n(), g.r(), d, &f, PhiOptions::default()).map(|p| p.value))
                    .transpose()?,
            };
            em("census", a.source.sampler.seed, 1).emit(&a.output, &[row], stdout)
        }
        Command::Pack(a) => {
            let g = a.source.load()?;
            let f = pattern(&a.pattern)?;
            if f.r() != g.r() {
                return Err(CensusError::UniformityMismatch.into());
            }
            let cg = census::conflict_graph(&g, &f)?;
            let exact = match census::exact_packing(&g, &f, a.budget) {
                Ok(k) => Some(k),
                Err(CensusError::TooLarge(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let far = census::farness(&g, &f, a.budget)?;
            let row = PackRow {
                n: g.n(),
                r: g.r(),
                edges: g.len(),
                pattern: a.pattern.clone(),
                copies: cg.node_count(),
                conflict_pairs: cg.edge_count(),
                turan_bound: census::turan_bound(cg.node_count() as u64, cg.edge_count() as u64),
                greedy: cg.greedy_independent().len(),
                exact,
                deletions: far.deletions,
                deletions_exact: far.exact,
                epsilon: far.epsilon,
            };
            em("pack", a.source.sampler.seed, 1).emit(&a.output, &[row], stdout)
        }
        Command::Hamilton(a) => {
            let degrees: Vec<usize> = parse_sweep(&a.d_sweep)?
                .into_iter()
                .map(|d| d.map(|d| d as usize).ok_or_else(|| anyhow!("degree sweep must be finite")))
                .collect::<Result<_>>()?;
            let cfg = SamplerArgs {
                seed: a.seed,
                method: a.method.clone(),
                burnin: a.burnin,
            }
            .config(None)?;
            let rows = ex::hamilton_sweep(a.n, a.r, a.ell, &degrees, a.trials, &cfg, a.budget)?;
            em("hamilton", a.seed, a.trials).emit(&a.output, &rows, stdout)
        }
        Command::AnalyzePattern(a) => {
            let f = pattern(&a.pattern)?;
            let an = spanning::analyze_pattern(&f)?;
            let witness = an
                .ell_witness
                .as_ref()
                .map(|w| w.second_copy(&f).iter().map(ex::edge_label).collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            let row = PatternRow {
                pattern: a.pattern.clone(),
                v: f.n(),
                e: f.len(),
                r: f.r(),
                diameter: an.diameter,
                in_fe: an.in_fe,
                ell: an.ell,
                beta: an.beta,
                aut: census::automorphism_count(&f)?,
                overlap_witness: witness,
            };
            em("analyze-pattern", 0, 0).emit(&a.output, &[row], stdout)
        }
        Command::Test(a) => {
            let kind = tester_kind(&a.tester)?;
            let instance = InstanceKind::parse(&a.instance).ok_or_else(|| anyhow!("unknown instance {:?}", a.instance))?;
            let mut setup = TesterSetup::new(kind, instance, &a.pattern, pattern(&a.pattern)?, a.n, a.d);
            setup.eta = a.eta;
            setup.eps = a.eps;
            setup.c = a.c;
            setup.c1 = a.c1;
            setup.query_budget = a.budget;
            let (row, runs) = ex::tester_experiment(&setup, a.seed, a.trials)?;
            let e = em("test", a.seed, a.trials);
            if a.per_trial {
                e.emit(&a.output, &runs, stdout)
            } else {
                e.emit(&a.output, &[row], stdout)
            }
        }
        Command::Lowerbound(a) => {
            let f = pattern(&a.pattern)?;
            let exp = HistoryExperiment {
                n: a.n,
                d: a.d,
                eta: a.eta,
                tester: tester_kind(&a.tester)?,
                eps: a.eps,
                c_simple: a.c_simple,
                seed: a.seed,
            };
            let rows = ex::lowerbound_sweep(&exp, &a.pattern, &f, &parse_sweep(&a.q_sweep)?, a.trials)?;
            em("lowerbound", a.seed, a.trials).emit(&a.output, &rows, stdout)
        }
        Command::Report(a) => {
            let input = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
            let ys: Vec<&str> = a.y.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let svg = report::svg_line_plot(&input, &a.x, &ys, &a.title)?;
            write_out(a.out.as_ref(), &svg, stdout)
        }
    }
}

fn variant<E: std::fmt::Debug>(e: &E) -> String {
    let dbg = format!("{e:?}");
    dbg.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

fn library_error_name(e: &(dyn std::error::Error + 'static)) -> Option<String> {
    if let Some(x) = e.downcast_ref::<ExperimentError>() {
        return match x {
            ExperimentError::Sampler(s) => library_error_name(s),
            ExperimentError::Spanning(s) => library_error_name(s),
            ExperimentError::Census(s) => library_error_name(s),
            ExperimentError::Testing(s) => library_error_name(s),
        };
    }
    macro_rules! named {
        ($($t:ident),*) => {
            $(if let Some(x) = e.downcast_ref::<$t>() {
                return Some(format!("{}::{}", stringify!($t), variant(x)));
            })*
        };
    }
    named!(SamplerError, CensusError, SpanningError, TestingError, SwitchError, HypergraphError);
    if let Some(x) = e.downcast_ref::<ParseError>() {
        return Some(format!("ParseError::{}", variant(&x.kind)));
    }
    None
}

/// `Type::Variant` of the first library error in the chain.
pub fn error_name(err: &anyhow::Error) -> Option<String> {
    err.chain().find_map(library_error_name)
}

/// Parses `args` and runs; returns the process exit code. Usage errors
/// exit with 2, failed computations with 1.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let msg = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(msg.as_bytes());
            } else {
                let _ = stderr.write_all(msg.as_bytes());
            }
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            match error_name(&e) {
                Some(name) => {
                    let _ = writeln!(stderr, "error: {name}: {e:#}");
                }
                None => {
                    let _ = writeln!(stderr, "error: {e:#}");
                }
            }
            1
        }
    }
}
