//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rrhg::experiments::{self as ex, InstanceKind, TesterSetup};
use rrhg::stats;
use rrhg_core::census;
use rrhg_core::combinatorics::Combinations;
use rrhg_core::property_testing::{self as pt, HistoryExperiment, TesterKind};
use rrhg_core::sampler::{self, Method, SamplerConfig};
use rrhg_core::spanning;
use rrhg_core::switching::{self, GammaCount};
use rrhg_core::{patterns, seed_stream, EdgeKey, Hypergraph};

type Outcome = Result<String, String>;

fn key(vs: &[usize]) -> EdgeKey {
    EdgeKey::new(vs).unwrap()
}

fn keys(list: &[&[usize]]) -> Vec<EdgeKey> {
    list.iter().map(|v| key(v)).collect()
}

fn check(ok: bool, msg: impl Into<String>) -> Outcome {
    if ok {
        Ok(msg.into())
    } else {
        Err(msg.into())
    }
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn switching_algebra() -> Outcome {
    let mut report = Vec::new();
    for (r, n, d) in [(2usize, 20usize, 4usize), (3, 18, 4)] {
        let want_in = factorial(r).pow(r as u32 - 1);
        let want_out = factorial(r - 1).pow(r as u32);
        let mut rng = seed_stream(11, r as u64);
        let cfg = SamplerConfig::with_method(Method::Mcmc);
        let mut pairs = 0;
        while pairs < 1000 {
            let g = sampler::sample(n, r, d, &cfg, &mut rng).map_err(|e| e.to_string())?;
            for _ in 0..50 {
                let Some((out, inc)) = switching::random_related_pair_a(&g, 10_000, &mut rng) else {
                    return Err(format!("r={r}: no related pair found"));
                };
                pairs += 1;
                if switching::is_related_a(&out, &inc) != Ok(true) {
                    return Err(format!("r={r}: drawn pair not related"));
                }
                let h = switching::apply_switch(&g, out.edges(), inc.edges()).map_err(|e| e.to_string())?;
                if h.degrees() != g.degrees() {
                    return Err(format!("r={r}: switch changed a degree"));
                }
                let back = switching::apply_switch(&h, inc.edges(), out.edges()).map_err(|e| e.to_string())?;
                if !back.same_edge_set(&g) {
                    return Err(format!("r={r}: switch is not an involution"));
                }
                let ins = switching::enumerate_related_in_a(&out);
                let outs = switching::enumerate_related_out_a(&inc);
                if ins.len() != want_in || outs.len() != want_out {
                    return Err(format!(
                        "r={r}: in/out counts {}/{} want {want_in}/{want_out}",
                        ins.len(),
                        outs.len()
                    ));
                }
            }
        }
        report.push(format!("r={r}: {pairs} pairs, in/out {want_in}/{want_out}"));
    }
    Ok(report.join("; "))
}

fn double_counting() -> Outcome {
    type Case = (usize, usize, usize, Vec<EdgeKey>, Vec<EdgeKey>, EdgeKey);
    let cases: Vec<Case> = vec![
        (6, 2, 2, vec![], vec![], key(&[0, 1])),
        (6, 2, 2, keys(&[&[2, 3]]), vec![], key(&[0, 1])),
        (6, 2, 2, vec![], keys(&[&[2, 3], &[4, 5]]), key(&[0, 1])),
        (8, 2, 3, vec![], vec![], key(&[0, 1])),
        (8, 2, 3, keys(&[&[2, 3], &[4, 5]]), keys(&[&[2, 6]]), key(&[0, 1])),
        (6, 3, 2, vec![], vec![], key(&[0, 1, 2])),
        (6, 3, 2, keys(&[&[3, 4, 5]]), keys(&[&[0, 1, 3]]), key(&[0, 1, 2])),
    ];
    let mut feasible = 0;
    let mut lines = Vec::new();
    for (n, r, d, forced, forbidden, e) in cases {
        let c: GammaCount =
            switching::double_count_gamma(n, r, d, &forced, &forbidden, &e, sampler::DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        if c.out_total != c.in_total {
            return Err(format!(
                "({n},{r},{d}) |H|={} |H'|={}: {} != {}",
                forced.len(),
                forbidden.len(),
                c.out_total,
                c.in_total
            ));
        }
        if c.with_edge > 0 && c.without_edge > 0 && c.out_total > 0 {
            feasible += 1;
        }
        lines.push(c.out_total.to_string());
    }
    check(
        feasible >= 5,
        format!("{feasible} feasible instances, totals [{}]", lines.join(", ")),
    )
}

fn sampler_uniformity() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, r, d, method, class) in [
        (6, 2, 2, Method::Pairing, 70),
        (6, 2, 2, Method::Mcmc, 70),
        (6, 3, 2, Method::Pairing, 0),
    ] {
        let mut cfg = SamplerConfig::with_method(method);
        cfg.seed = 2024;
        let row = ex::uniformity(n, r, d, &cfg, 70_000).map_err(|e| e.to_string())?;
        ok &= row.p_value > 0.01 && (class == 0 || row.class_size == class);
        lines.push(format!(
            "({n},{r},{d}) {} |G|={} p={:.3}",
            method.name(),
            row.class_size,
            row.p_value
        ));
    }
    check(ok, lines.join("; "))
}

fn correlation() -> Outcome {
    let mut cfg = SamplerConfig::with_method(Method::Pairing);
    cfg.seed = 77;
    let e = key(&[0, 1]);
    let trials = 40_000;
    let a = ex::estimate_edge_probability(8, 2, 3, &e, &[], &[], trials, &cfg).map_err(|e| e.to_string())?;
    let za = (a.estimate - 3.0 / 7.0) / a.stderr;
    let forced = keys(&[&[0, 1]]);
    let target = key(&[2, 3]);
    let exact = sampler::exact_conditional_edge_probability(6, 2, 2, &target, &forced, &[], sampler::DEFAULT_NODE_BUDGET)
        .map_err(|e| e.to_string())?
        .to_f64();
    let b = ex::estimate_edge_probability(6, 2, 2, &target, &forced, &[], trials, &cfg).map_err(|e| e.to_string())?;
    let zb = (b.estimate - exact) / b.stderr;
    check(
        za.abs() <= 4.0 && zb.abs() <= 4.0,
        format!(
            "(8,2,3) {:.4} vs 3/7 z={za:.2}; (6,2,2|01) {:.4} vs {exact:.4} z={zb:.2}",
            a.estimate, b.estimate
        ),
    )
}

fn random_graph(rng: &mut impl Rng, n: usize, r: usize, p: f64) -> Hypergraph {
    let edges: Vec<EdgeKey> = Combinations::new(n, r).filter(|_| rng.gen_bool(p)).map(|vs| key(&vs)).collect();
    Hypergraph::from_edge_keys(n, r, edges).unwrap()
}

/// Copies as distinct edge sets, by trying every injection.
fn naive_copies(g: &Hypergraph, f: &Hypergraph) -> Vec<BTreeSet<EdgeKey>> {
    let (v, n) = (f.n(), g.n());
    let mut found = BTreeSet::new();
    let mut map = vec![0usize; v];
    let mut used = vec![false; n];
    fn go(i: usize, g: &Hypergraph, f: &Hypergraph, map: &mut Vec<usize>, used: &mut Vec<bool>, found: &mut BTreeSet<BTreeSet<EdgeKey>>) {
        if i == f.n() {
            let image: Option<BTreeSet<EdgeKey>> = f
                .edges()
                .iter()
                .map(|e| {
                    let k = key(&e.vertices().iter().map(|&x| map[x]).collect::<Vec<_>>());
                    g.contains(&k).then_some(k)
                })
                .collect();
            if let Some(s) = image {
                found.insert(s);
            }
            return;
        }
        for x in 0..g.n() {
            if !used[x] {
                used[x] = true;
                map[i] = x;
                go(i + 1, g, f, map, used, found);
                used[x] = false;
            }
        }
    }
    go(0, g, f, &mut map, &mut used, &mut found);
    found.into_iter().collect()
}

fn brute_packing(copies: &[BTreeSet<EdgeKey>]) -> usize {
    let k = copies.len();
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let chosen: Vec<&BTreeSet<EdgeKey>> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &copies[i]).collect();
        let disjoint = chosen
            .iter()
            .enumerate()
            .all(|(i, a)| chosen[i + 1..].iter().all(|b| a.is_disjoint(b)));
        if disjoint {
            best = size;
        }
    }
    best
}

struct CensusCase {
    g: Hypergraph,
    f: Hypergraph,
    copies: Vec<BTreeSet<EdgeKey>>,
}

fn census_cases() -> Vec<CensusCase> {
    let pats2: Vec<Hypergraph> = ["triangle", "path2", "path3", "c4", "k4", "matching2"]
        .iter()
        .map(|p| patterns::by_name(p).unwrap())
        .collect();
    let pats3: Vec<Hypergraph> = vec![
        patterns::single_edge(3),
        Hypergraph::from_edge_keys(5, 3, keys(&[&[0, 1, 2], &[2, 3, 4]])).unwrap(),
        Hypergraph::from_edge_keys(4, 3, keys(&[&[0, 1, 2], &[1, 2, 3]])).unwrap(),
        patterns::complete(4, 3),
    ];
    let mut rng = seed_stream(5150, 0);
    (0..200)
        .map(|i| {
            let r = if i % 2 == 0 { 2 } else { 3 };
            let n = rng.gen_range(4..=8);
            let p = rng.gen_range(0.2..0.7);
            let g = random_graph(&mut rng, n, r, p);
            let f = if r == 2 { pats2.choose(&mut rng) } else { pats3.choose(&mut rng) }
                .unwrap()
                .clone();
            let copies = naive_copies(&g, &f);
            CensusCase { g, f, copies }
        })
        .collect()
}

fn census_oracle(cases: &[CensusCase]) -> Outcome {
    let mut packed = 0;
    for (i, c) in cases.iter().enumerate() {
        let got = census::count_copies(&c.g, &c.f);
        if got != c.copies.len() as u64 {
            return Err(format!("instance {i}: count_copies {got} naive {}", c.copies.len()));
        }
        let pairs = c
            .copies
            .iter()
            .enumerate()
            .map(|(j, a)| c.copies[j + 1..].iter().filter(|b| !a.is_disjoint(b)).count() as u64)
            .sum::<u64>();
        let v = c.copies.len() as u64;
        let turan = if v == 0 { 0 } else { (v * v).div_ceil(2 * pairs + v) };
        let greedy = census::greedy_packing(&c.g, &c.f).map_err(|e| e.to_string())?.len() as u64;
        if greedy < turan {
            return Err(format!("instance {i}: greedy {greedy} < Turán {turan}"));
        }
        if c.copies.len() <= 15 {
            let exact = census::exact_packing(&c.g, &c.f, 15).map_err(|e| e.to_string())?;
            let brute = brute_packing(&c.copies);
            if exact != brute {
                return Err(format!("instance {i}: exact_packing {exact} brute {brute}"));
            }
            packed += 1;
        }
    }
    Ok(format!("{} instances, {packed} packings checked by brute force", cases.len()))
}

fn distance(cases: &[CensusCase]) -> Outcome {
    let k4 = patterns::complete(4, 2);
    let tri = patterns::by_name("triangle").unwrap();
    let del = census::min_deletion_distance(&k4, &tri, census::DEFAULT_COPY_CAP).map_err(|e| e.to_string())?;
    if del != 2 {
        return Err(format!("del(K4, triangle) = {del}"));
    }
    let mut tested = 0;
    for (i, c) in cases.iter().enumerate().filter(|(_, c)| c.copies.len() <= 15) {
        let del = census::min_deletion_distance(&c.g, &c.f, 15).map_err(|e| e.to_string())?;
        let pack = census::exact_packing(&c.g, &c.f, 15).map_err(|e| e.to_string())?;
        if del < pack {
            return Err(format!("instance {i}: deletion {del} < packing {pack}"));
        }
        tested += 1;
    }
    Ok(format!("del(K4, triangle) = 2; deletion >= packing on {tested} instances"))
}

fn pattern_analysis() -> Outcome {
    let ell = |name: &str| -> Result<usize, String> {
        let f = patterns::by_name(name).ok_or(format!("pattern {name}"))?;
        spanning::vertex_overlap_index(&f).map(|o| o.ell).map_err(|e| e.to_string())
    };
    let in_fe = |name: &str| -> Result<bool, String> {
        let f = patterns::by_name(name).ok_or(format!("pattern {name}"))?;
        spanning::analyze_pattern(&f).map(|a| a.in_fe).map_err(|e| e.to_string())
    };
    let (a, b, c) = (ell("k4")?, ell("k4:3")?, ell("c4")?);
    let (t, l) = (in_fe("tight-cycle:5:3")?, in_fe("loose-cycle:6:3")?);
    check(
        a == 2 && b == 3 && c == 3 && t && l,
        format!("ell(K4)={a} ell(K4^3)={b} ell(C4)={c} tight(5,3) in F_E={t} loose(6,3) in F_E={l}"),
    )
}

fn hamilton() -> Outcome {
    for (n, want) in [(4usize, 3u64), (5, 12), (6, 60)] {
        let got = spanning::count_hamilton(&patterns::complete(n, 2), 1, spanning::DEFAULT_SEARCH_BUDGET).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("count_hamilton(K_{n}) = {got}, want {want}"));
        }
    }
    let mut cfg = SamplerConfig::with_method(Method::Mcmc);
    cfg.seed = 31;
    let degrees: Vec<usize> = (2..=10).collect();
    let rows = ex::hamilton_sweep(12, 3, 2, &degrees, 200, &cfg, spanning::DEFAULT_SEARCH_BUDGET).map_err(|e| e.to_string())?;
    let smoothed: Vec<f64> = rows.iter().map(|r| r.smoothed).collect();
    let shown: Vec<String> = rows.iter().map(|r| format!("d={}:{}", r.d, r.frequency)).collect();
    check(
        rows.len() == degrees.len() && stats::is_nondecreasing(&smoothed),
        format!("K_4..K_6 counts 3/12/60; sweep {}", shown.join(" ")),
    )
}

fn testers() -> Outcome {
    let tri = patterns::by_name("triangle").unwrap();
    let mut lines = Vec::new();
    for kind in [TesterKind::Bfs, TesterKind::EdgeRooted, TesterKind::Canonical] {
        let setup = TesterSetup::new(kind, InstanceKind::FreeHost, "triangle", tri.clone(), 60, 6);
        let (row, runs) = ex::tester_experiment(&setup, 900, 200).map_err(|e| e.to_string())?;
        let rejections = runs.iter().filter(|t| !t.accept).count();
        if rejections != 0 || runs.len() != 200 {
            return Err(format!("{}: {rejections} rejections on free inputs", kind.name()));
        }
        lines.push(format!(
            "{} 0/200 (mean queries {:.0})",
            kind.name(),
            row.mean_vset_queries + row.mean_nbr_queries
        ));
    }
    let mut setup = TesterSetup::new(TesterKind::Canonical, InstanceKind::Blocked, "triangle", tri, 60, 6);
    setup.c = 4.0;
    let (row, runs) = ex::tester_experiment(&setup, 901, 300).map_err(|e| e.to_string())?;
    let exact_counts = runs
        .iter()
        .all(|t| !t.truncated && t.vset_queries == ex::canonical_query_count(t.sample_size, 2) && t.nbr_queries == 0);
    if !exact_counts {
        return Err("canonical query count differs from C(s, r)".into());
    }
    let witnesses = runs.iter().all(|t| t.witness_valid && t.history_consistent);
    lines.push(format!(
        "blocked reject rate {:.3} at measured eps {:.3}",
        row.reject_rate, row.eps_measured
    ));
    check(row.reject_rate >= 2.0 / 3.0 && witnesses, lines.join("; "))
}

fn lower_bound() -> Outcome {
    let f = patterns::by_name("triangle").unwrap();
    let exp = HistoryExperiment {
        n: 60,
        d: 6,
        eta: 0.1,
        tester: TesterKind::Canonical,
        eps: 0.1,
        c_simple: pt::DEFAULT_C_SIMPLE,
        seed: 4242,
    };
    let mut budgets: Vec<Option<u64>> = (0..=2000).step_by(100).map(Some).collect();
    budgets.push(None);
    let rows = ex::lowerbound_sweep(&exp, "triangle", &f, &budgets, 100).map_err(|e| e.to_string())?;
    let first = rows.first().map(|r| r.fraction).unwrap_or(f64::NAN);
    let last = rows.last().map(|r| r.fraction).unwrap_or(f64::NAN);
    let smoothed: Vec<f64> = rows.iter().map(|r| r.smoothed).collect();
    let shown: Vec<String> = rows
        .iter()
        .map(|r| format!("{}:{}", r.q.map_or("full".into(), |q| q.to_string()), r.fraction))
        .collect();
    check(
        first == 0.0 && last == 1.0 && stats::is_nondecreasing(&smoothed),
        format!("sweep {}", shown.join(" ")),
    )
}

fn main() {
    let mut failures = 0;
    let mut run = |id: u32, title: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(msg) if took <= limit => (true, msg),
            Ok(msg) => (false, format!("{msg}; over time limit")),
            Err(msg) => (false, msg),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {id:>2} {title}: {detail} [{:.1}s / {}s]",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    };
    let secs = Duration::from_secs;
    run(1, "switching algebra", secs(10), &mut switching_algebra);
    run(2, "double counting", secs(300), &mut double_counting);
    run(3, "sampler uniformity", secs(300), &mut sampler_uniformity);
    run(4, "correlation formula", secs(120), &mut correlation);
    let mut cases = Vec::new();
    run(5, "census oracle equivalence", secs(300), &mut || {
        cases = census_cases();
        census_oracle(&cases)
    });
    run(6, "deletion distance", secs(60), &mut || distance(&cases));
    run(7, "pattern analysis", secs(60), &mut pattern_analysis);
    run(8, "hamilton machinery", secs(600), &mut hamilton);
    run(9, "tester soundness and power", secs(600), &mut testers);
    run(10, "lower-bound demonstrator", secs(600), &mut lower_bound);
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
