use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rrhg_core::census;
use rrhg_core::combinatorics::{factorial, Combinations};
use rrhg_core::property_testing::{self as pt, Oracle, TesterKind, TesterParams};
use rrhg_core::sampler::{self, Method, SamplerConfig};
use rrhg_core::spanning;
use rrhg_core::switching::{self, InConfigA, InConfigB, OutConfigA, OutConfigB, SwitchChain};
use rrhg_core::{patterns, seed_stream, text, Distance, EdgeKey, Hypergraph};

fn graph_strategy(max_n: usize, r: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (r + 1..=max_n).prop_flat_map(move |n| {
        let sets: Vec<EdgeKey> = Combinations::new(n, r).map(|c| EdgeKey::new(&c).unwrap()).collect();
        let k = sets.len();
        proptest::sample::subsequence(sets, 0..=max_edges.min(k))
            .prop_shuffle()
            .prop_map(move |edges| Hypergraph::from_edge_keys(n, r, edges).unwrap())
    })
}

fn any_graph() -> impl Strategy<Value = Hypergraph> {
    prop_oneof![graph_strategy(8, 2, 14), graph_strategy(7, 3, 10), graph_strategy(7, 4, 6)]
}

/// Loose cycles of length 3..=k found by trying every ordered edge sequence.
fn has_loose_cycle(edges: &[EdgeKey]) -> bool {
    fn extend(edges: &[EdgeKey], path: &mut Vec<usize>) -> bool {
        let k = path.len();
        if k >= 3 {
            let (first, last) = (&edges[path[0]], &edges[path[k - 1]]);
            let closes = first.intersection_size(last) == 1;
            let joints: Vec<usize> = (0..k)
                .map(|i| {
                    let (a, b) = (&edges[path[i]], &edges[path[(i + 1) % k]]);
                    a.vertices().iter().copied().find(|&v| b.contains(v)).unwrap_or(usize::MAX)
                })
                .collect();
            let distinct = joints.iter().collect::<BTreeSet<_>>().len() == k;
            let chords_free = (0..k).all(|i| (i + 2..k).all(|j| (i == 0 && j == k - 1) || edges[path[i]].is_disjoint(&edges[path[j]])));
            if closes && distinct && chords_free {
                return true;
            }
        }
        for next in 0..edges.len() {
            if path.contains(&next) {
                continue;
            }
            let last = &edges[*path.last().unwrap()];
            if last.intersection_size(&edges[next]) != 1 {
                continue;
            }
            path.push(next);
            if extend(edges, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    (0..edges.len()).any(|s| extend(edges, &mut vec![s]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn degree_sum(g in any_graph()) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), g.r() * g.len());
    }

    #[test]
    fn distance_is_a_metric(g in any_graph()) {
        let n = g.n();
        let d = |u, v| g.distance(u, v).unwrap();
        for u in 0..n {
            prop_assert_eq!(d(u, u), Distance::Finite(0));
            for v in 0..n {
                prop_assert_eq!(d(u, v), d(v, u));
                if let Distance::Finite(uv) = d(u, v) {
                    for w in 0..n {
                        if let (Distance::Finite(uw), Distance::Finite(wv)) = (d(u, w), d(w, v)) {
                            prop_assert!(uv <= uw + wv);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weak_forest_matches_exhaustive_search(g in prop_oneof![graph_strategy(9, 2, 6), graph_strategy(9, 3, 6), graph_strategy(8, 4, 6)]) {
        let edges = g.edges();
        let linear = edges.iter().enumerate().all(|(i, a)| edges[i + 1..].iter().all(|b| a.intersection_size(b) <= 1));
        prop_assert_eq!(g.is_weak_forest(), linear && !has_loose_cycle(edges));
    }

    #[test]
    fn text_round_trip(g in any_graph()) {
        let s = text::serialize(&g);
        let back = text::parse(&s).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(text::serialize(&back), s);
    }

    #[test]
    fn copy_count_is_relabel_invariant(g in graph_strategy(8, 2, 14), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut seed_stream(seed, 0));
        let h = g.relabel(&perm);
        for f in [patterns::triangle(), patterns::cycle_graph(4), patterns::path_graph(2)] {
            prop_assert_eq!(census::count_copies(&g, &f), census::count_copies(&h, &f));
        }
    }

    #[test]
    fn packing_bounds(g in prop_oneof![graph_strategy(8, 2, 16), graph_strategy(7, 3, 10)]) {
        let fs = if g.r() == 2 {
            vec![patterns::triangle(), patterns::cycle_graph(4)]
        } else {
            vec![patterns::loose_path(2, 3), Hypergraph::new(4, 3, [[0, 1, 2], [1, 2, 3]]).unwrap()]
        };
        for f in fs {
            let cg = census::conflict_graph(&g, &f).unwrap();
            let x = cg.node_count() as u64;
            let greedy = census::greedy_packing(&g, &f).unwrap().len() as u64;
            prop_assert!(greedy >= census::turan_bound(x, cg.edge_count() as u64));
            if let Ok(exact) = census::exact_packing(&g, &f, 40) {
                prop_assert!(exact as u64 >= greedy);
                prop_assert!(exact as u64 <= x);
                prop_assert!(exact <= g.len() / f.len());
                let del = census::min_deletion_distance(&g, &f, 40).unwrap();
                prop_assert!(del >= exact);
                prop_assert!(del <= exact * f.len());
            }
        }
    }
}

fn related_counts_a(r: usize, rng: &mut impl Rng) -> (usize, usize) {
    let n = r * r + 6;
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let edges: Vec<EdgeKey> = verts.chunks(r).take(r).map(|c| EdgeKey::new(c).unwrap()).collect();
    let out = OutConfigA::new(edges).unwrap();
    let ins = switching::enumerate_related_in_a(&out);
    let target = out.target().clone();
    let mut rest: Vec<usize> = (0..n).filter(|v| !target.contains(*v)).collect();
    rest.shuffle(rng);
    let fs: Vec<EdgeKey> = target
        .vertices()
        .iter()
        .zip(rest.chunks(r - 1))
        .map(|(&v, c)| {
            let mut vs = c.to_vec();
            vs.push(v);
            EdgeKey::new(&vs).unwrap()
        })
        .collect();
    let inc = InConfigA::new(target, fs).unwrap();
    (ins.len(), switching::enumerate_related_out_a(&inc).len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn variant_a_counts(r in 2usize..=4, seed in any::<u64>()) {
        let (ins, outs) = related_counts_a(r, &mut seed_stream(seed, 0));
        let rf = factorial(r as u64).unwrap() as usize;
        let rf1 = factorial(r as u64 - 1).unwrap() as usize;
        prop_assert_eq!(ins, rf.pow(r as u32 - 1));
        prop_assert_eq!(outs, rf1.pow(r as u32));
    }

    #[test]
    fn variant_b_counts(r in 2usize..=3, seed in any::<u64>()) {
        let mut rng = seed_stream(seed, 0);
        let n = 3 * r + 3;
        let target = EdgeKey::new(&(0..r).collect::<Vec<_>>()).unwrap();
        let apex = EdgeKey::new(&(r..2 * r).collect::<Vec<_>>()).unwrap();
        let pool: Vec<usize> = (0..n).filter(|v| !apex.contains(*v)).collect();
        let mut fs: Vec<EdgeKey> = Vec::new();
        for i in 0..r {
            loop {
                let others: Vec<usize> = pool.iter().copied().filter(|&v| v != i).collect();
                let mut vs: Vec<usize> = others.choose_multiple(&mut rng, r - 1).copied().collect();
                vs.push(i);
                let f = EdgeKey::new(&vs).unwrap();
                if f != target && !fs.contains(&f) {
                    fs.push(f);
                    break;
                }
            }
        }
        let inc = InConfigB::new(target.clone(), fs, apex).unwrap();
        let outs = switching::enumerate_related_out_b(&inc);
        prop_assert_eq!(outs.len(), factorial(r as u64).unwrap() as usize);
        for out in &outs {
            prop_assert!(switching::is_related_b(out, &inc).unwrap());
            let back = switching::enumerate_related_in_b(out);
            prop_assert!(back.len() <= r.pow(r as u32));
            prop_assert!(back.contains(&inc));
        }
        let random_out: Vec<EdgeKey> = (0..r)
            .map(|i| {
                let vs: Vec<usize> = (0..n).filter(|&v| v != i).collect::<Vec<_>>().choose_multiple(&mut rng, r).copied().collect();
                EdgeKey::new(&vs).unwrap()
            })
            .collect();
        if let Ok(out) = OutConfigB::new(target, random_out) {
            prop_assert!(switching::enumerate_related_in_b(&out).len() <= r.pow(r as u32));
        }
    }

    #[test]
    fn switches_preserve_degrees_and_invert(
        (n, r, d) in prop_oneof![Just((10usize, 2usize, 3usize)), Just((12, 2, 4)), Just((9, 3, 3)), Just((12, 3, 2)), Just((8, 4, 3))],
        seed in any::<u64>(),
    ) {
        let mut rng = seed_stream(seed, 0);
        let g = sampler::sample(n, r, d, &SamplerConfig::with_method(Method::Mcmc), &mut rng).unwrap();
        if let Some((out, inc)) = switching::random_related_pair_a(&g, 10_000, &mut rng) {
            prop_assert!(switching::is_related_a(&out, &inc).unwrap());
            let h = switching::apply_switch(&g, out.edges(), inc.edges()).unwrap();
            prop_assert_eq!(h.degrees(), g.degrees());
            let back = switching::apply_switch(&h, inc.edges(), out.edges()).unwrap();
            prop_assert!(back.same_edge_set(&g));
        }
    }

    #[test]
    fn chain_stays_regular(seed in any::<u64>(), steps in 1usize..400) {
        let mut rng = seed_stream(seed, 1);
        let start = sampler::start_graph(12, 3, 3).unwrap();
        let mut chain = SwitchChain::new(&start);
        chain.run(steps, &mut rng);
        let g = chain.to_hypergraph();
        prop_assert!(g.is_regular(3));
        prop_assert_eq!(g.len(), 12);
    }

    #[test]
    fn samplers_emit_regular_graphs(
        (n, r, d) in prop_oneof![Just((8usize, 2usize, 3usize)), Just((6, 3, 2)), Just((9, 3, 2)), Just((10, 2, 4)), Just((8, 4, 2))],
        method in prop_oneof![Just(Method::Pairing), Just(Method::Mcmc), Just(Method::Enumerate)],
        seed in any::<u64>(),
    ) {
        let small_class = matches!((n, r, d), (8, 2, 3) | (6, 3, 2));
        prop_assume!(method != Method::Enumerate || small_class);
        let g = sampler::sample(n, r, d, &SamplerConfig::with_method(method), &mut seed_stream(seed, 0)).unwrap();
        prop_assert_eq!(g.r(), r);
        prop_assert!(g.is_regular(d));
        prop_assert_eq!(g.edge_set().len(), g.len());
    }

    #[test]
    fn testers_are_one_sided(g in graph_strategy(9, 2, 16), seed in any::<u64>()) {
        let t = patterns::triangle();
        let free = !census::contains_copy(&g, &t);
        let params = TesterParams::for_graph(&g);
        for kind in [TesterKind::Bfs, TesterKind::EdgeRooted, TesterKind::Canonical] {
            let mut rng = seed_stream(seed, 0);
            let mut o = Oracle::new(g.clone(), seed);
            let v = pt::run_tester(kind, &mut o, &t, 0.3, &params, &mut rng).unwrap();
            if free {
                prop_assert!(v.accept);
            }
            prop_assert!(pt::witness_is_valid(&v, &t, o.history()));
            prop_assert!(o.history().consistent_with(&g));
            if let Some(budget) = v.analytic_budget {
                prop_assert!(v.queries.total() <= budget, "{:?} used {} > {}", kind, v.queries.total(), budget);
            }
        }
    }

    #[test]
    fn degree_probe_cost(g in graph_strategy(9, 2, 30), v in 0usize..9, seed in any::<u64>()) {
        let v = v % g.n();
        let mut o = Oracle::new(g.clone(), seed);
        let deg = o.degree_probe(v).unwrap();
        prop_assert_eq!(deg, g.degree(v).unwrap());
        let bound = 2 * (usize::BITS - deg.leading_zeros()) as u64 + 2;
        prop_assert!(o.counts().neighbour <= bound);
    }
}

#[test]
fn n_star_nondecreasing_in_eta() {
    for f in [patterns::triangle(), patterns::cycle_graph(4)] {
        let mut last = 0;
        for eta in [0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8] {
            let ns = pt::n_star(60, 6, &f, eta).unwrap();
            assert!(ns >= last, "eta {eta}");
            last = ns;
        }
    }
}

#[test]
fn n_star_matches_direct_scan() {
    let t = patterns::triangle();
    let (n, d, eta) = (60usize, 6usize, 0.1);
    // Φ for the triangle is the minimum of the expected edge, cherry and
    // triangle counts with p = d/(n0 − 1)
    let direct = (3..=n)
        .filter(|&n0| n0 > d && (n0 * d) % 2 == 0)
        .filter(|&n0| {
            let x = n0 as f64;
            let p = d as f64 / (x - 1.0);
            let edge = x * (x - 1.0) / 2.0 * p;
            let cherry = x * (x - 1.0) * (x - 2.0) / 2.0 * p * p;
            let tri = x * (x - 1.0) * (x - 2.0) / 6.0 * p * p * p;
            edge.min(cherry).min(tri) >= (1.0 - eta) * x * d as f64 / 2.0
        })
        .max()
        .unwrap();
    assert_eq!(pt::n_star(n, d, &t, eta).unwrap(), direct);
}

#[test]
fn overlap_cycles_are_rotation_invariant() {
    for (n, r, l) in [(6, 3, 1), (12, 3, 2), (8, 4, 2), (9, 3, 0), (10, 5, 3), (12, 4, 1)] {
        let c = spanning::overlap_cycle_pattern(n, r, l).unwrap();
        let step = r - l;
        let rot: Vec<usize> = (0..n).map(|v| (v + step) % n).collect();
        assert!(c.relabel(&rot).same_edge_set(&c), "({n},{r},{l})");
        let mut shifted: Vec<usize> = c.relabel(&(0..n).map(|v| (v + 1) % n).collect::<Vec<_>>()).degrees();
        let mut orig = c.degrees();
        shifted.sort_unstable();
        orig.sort_unstable();
        assert_eq!(shifted, orig);
        if r % step == 0 {
            assert!(c.is_regular(r / step));
        }
    }
}

fn layer_by_bfs(f: &Hypergraph, e: &EdgeKey, depth: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; f.n()];
    let mut queue = VecDeque::new();
    for &v in e.vertices() {
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        for g in f.edges().iter().filter(|g| g.contains(u)) {
            for &w in g.vertices() {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    (0..f.n()).filter(|&v| dist[v] == depth).collect()
}

#[test]
fn fe_membership_rechecked() {
    let cases = [
        patterns::triangle(),
        patterns::cycle_graph(4),
        patterns::cycle_graph(5),
        patterns::cycle_graph(6),
        patterns::complete(4, 2),
        patterns::triangle_with_pendant(),
        patterns::path_graph(3),
        spanning::overlap_cycle_pattern(5, 3, 2).unwrap(),
        spanning::overlap_cycle_pattern(6, 3, 1).unwrap(),
        Hypergraph::new(5, 2, [[0, 1], [1, 2], [2, 0], [0, 3], [3, 4], [4, 0]]).unwrap(),
    ];
    for f in cases {
        let a = spanning::analyze_pattern(&f).unwrap();
        let direct = f.edges().iter().all(|e| {
            let layer = layer_by_bfs(&f, e, a.diameter);
            f.edges().iter().all(|g| !g.vertices().iter().all(|v| layer.contains(v)))
        });
        assert_eq!(a.in_fe, direct, "{f:?}");
    }
}

#[test]
fn triangle_census_sanity_band() {
    let (n, r, d) = (30, 2, 6);
    let t = patterns::triangle();
    let cfg = SamplerConfig::with_method(Method::Mcmc);
    let counts: Vec<f64> = (0..200)
        .map(|i| census::count_copies(&sampler::sample(n, r, d, &cfg, &mut seed_stream(21, i)).unwrap(), &t) as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    let expected = census::expected_copies(n, r, d, &t, census::EdgeProbability::Exact).unwrap();
    assert!((mean - expected).abs() <= 5.0 * var.sqrt(), "mean {mean}, expected {expected}");
}

#[test]
fn edge_frequency_matches_density() {
    let (n, r, d) = (8, 2, 3);
    let e = EdgeKey::new(&[0, 1]).unwrap();
    let cfg = SamplerConfig {
        seed: 5,
        ..SamplerConfig::with_method(Method::Pairing)
    };
    let est = sampler::estimate_edge_probability(n, r, d, &e, &[], &[], 20_000, &cfg).unwrap();
    assert!((est.estimate - 3.0 / 7.0).abs() <= 4.0 * est.stderr);
}

#[test]
fn lowerbound_instances() {
    let mut rng = seed_stream(31, 0);
    for f in [patterns::triangle(), patterns::complete(4, 2), patterns::complete(4, 3)] {
        for (n, d) in [(60, 4), (100, 8)] {
            let r = f.r();
            if let Ok(inst) = pt::build_lowerbound_family(n, d, &f, pt::LowerBoundFamily::F1, &mut rng) {
                assert!(!census::contains_copy(&inst.graph, &f));
                assert_eq!(inst.graph.len(), ((n * d) as f64 / r as f64).round() as usize);
            }
            let f2 = pt::build_lowerbound_family(n, d, &f, pt::LowerBoundFamily::F2, &mut rng).unwrap();
            if f2.core_vertices >= f.n() {
                assert!(census::contains_copy(&f2.graph, &f));
            }
        }
    }
}

#[test]
fn blocked_instance_packs_many_triangles() {
    let t = patterns::triangle();
    let mut rng = seed_stream(41, 0);
    let inst = pt::build_blocked_instance(60, 6, &t, 0.1, &pt::default_block_sampler(), &mut rng).unwrap();
    assert!(inst.graph.is_regular(6));
    let p = &inst.params;
    assert!(p.n_star as f64 <= p.n_tilde() && p.n_tilde() <= 2.0 * p.n_star as f64);
    let packing = census::greedy_packing(&inst.graph, &t).unwrap().len();
    assert!(packing as f64 >= 0.05 * 60.0 * 6.0 / 3.0);
}
