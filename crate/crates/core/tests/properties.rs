use std::collections::BTreeSet;

use proptest::prelude::*;

use nsd22::dcs::{self, DcsOptions, ModTarget};
use nsd22::decompose::{self, PairAssignment};
use nsd22::graph::load_edge_list;
use nsd22::lll::{self, HView};
use nsd22::verify::{self, DEFAULT_BRUTE_LIMIT};
use nsd22::weighter::{self, Certificate};
use nsd22::{euler, rng, EdgeBipartition, Graph, Rational, Rule, Side};
use rand::Rng as _;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..1.0, any::<u64>()).prop_map(|(n, p, seed)| Graph::gnp(n, p, seed))
}

fn pairs_strategy(n: usize, ys: &'static [u64]) -> impl Strategy<Value = PairAssignment> {
    proptest::collection::vec((0..ys.len(), any::<u64>(), any::<u64>()), n).prop_map(move |v| {
        let y: Vec<u64> = v.iter().map(|&(i, _, _)| ys[i]).collect();
        let c1 = v.iter().zip(&y).map(|(&(_, a, _), &y)| a % y).collect();
        let c2 = v.iter().zip(&y).map(|(&(_, _, b), &y)| b % y).collect();
        PairAssignment::new(c1, c2, y).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(30)) {
        let back = load_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn euler_split_is_balanced(g in graph_strategy(40)) {
        let (bip, exc) = euler::balanced_split(&g);
        let [d1, d2] = bip.side_degrees(&g);
        for v in 0..g.vertex_count() {
            let d = g.degree(v);
            if exc.contains(&v) {
                prop_assert_eq!((d1[v], d2[v]), ((d + 2) / 2, (d - 1) / 2));
            } else {
                prop_assert!(d1[v] >= d / 2 && d2[v] >= d / 2);
            }
        }
        for comp in g.components() {
            prop_assert!(comp.iter().filter(|v| exc.contains(v)).count() <= 1);
        }
    }

    #[test]
    fn classification_is_symmetric(a in (0u64..8, 0u64..8), b in (0u64..8, 0u64..8)) {
        prop_assert_eq!(decompose::classify_pairs(a, b), decompose::classify_pairs(b, a));
    }

    #[test]
    fn h_double_prime_depends_on_pairs_alone(
        g in graph_strategy(25),
        pa in pairs_strategy(25, &[1, 2, 4]),
    ) {
        let pa = PairAssignment::new(
            (0..g.vertex_count()).map(|v| pa.pair(v).0).collect(),
            (0..g.vertex_count()).map(|v| pa.pair(v).1).collect(),
            pa.ys()[..g.vertex_count()].to_vec(),
        ).unwrap();
        let all: Vec<usize> = (0..g.edge_count()).collect();
        let outcome = decompose::apply_rules(&g, &all, &pa);
        for side in Side::BOTH {
            let expected: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&e| {
                    let (u, v) = g.endpoints(e);
                    decompose::classify_pairs(pa.pair(u), pa.pair(v)).map(|x| x.0) == Some(side)
                })
                .collect();
            prop_assert_eq!(outcome.h_double_prime(side), expected);
        }
        // Every edge is placed exactly once and E0 edges are the identical-pair edges.
        prop_assert_eq!(outcome.placement.len(), g.edge_count());
        for &e in &outcome.e0 {
            let (u, v) = g.endpoints(e);
            prop_assert_eq!(pa.pair(u), pa.pair(v));
        }
        prop_assert!(outcome.t_value >= 1);
    }

    #[test]
    fn pair_text_round_trip(pa in pairs_strategy(20, &[1, 2, 4, 8, 16])) {
        prop_assert_eq!(PairAssignment::parse(&pa.to_text(), 20).unwrap(), pa);
    }

    #[test]
    fn weighted_degree_implementations_agree(g in graph_strategy(30), seed in any::<u64>()) {
        let mut r = rng::from_seed(seed);
        let w: Vec<u64> = (0..g.edge_count()).map(|_| r.gen_range(1..=3)).collect();
        prop_assert_eq!(verify::weighted_degrees(&g, &w), verify::weighted_degrees_by_adjacency(&g, &w));
        let check = verify::verify_nsd(&g, &w).unwrap();
        let conflicts: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.endpoints(e);
                check.sums[u] == check.sums[v]
            })
            .collect();
        prop_assert_eq!(check.conflicts, conflicts);
    }

    #[test]
    fn lll_success_survives_fresh_scan(n in 20usize..40, seed in any::<u64>()) {
        let d = 8;
        let g = Graph::random_regular(n - n % 2, d, seed).unwrap();
        let h: Vec<usize> = (0..g.edge_count()).collect();
        let y = vec![16; g.vertex_count()];
        let q = Rational::new(1, 10).unwrap();
        let (pa, rep) = lll::resample_until_good(&g, &h, &y, q, 2, seed, 2000, false);
        let (a, b) = HView::new(&g, &h).scan(&pa, q, 2);
        prop_assert_eq!(&rep.violated_a, &a);
        prop_assert_eq!(&rep.violated_b, &b);
        let (again, rep2) = lll::resample_until_good(&g, &h, &y, q, 2, seed, 2000, false);
        prop_assert_eq!(again, pa);
        prop_assert_eq!(rep2, rep);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn brute_force_witnesses_and_refutations(g in graph_strategy(6), k in 1u64..=3, seed in any::<u64>()) {
        match verify::brute_force_nsd(&g, k, DEFAULT_BRUTE_LIMIT).unwrap() {
            Some(w) => {
                prop_assert!(w.iter().all(|&x| (1..=k).contains(&x)));
                prop_assert!(verify::verify_nsd(&g, &w).unwrap().ok);
            }
            None => {
                let mut r = rng::from_seed(seed);
                for _ in 0..1000 {
                    let w: Vec<u64> = (0..g.edge_count()).map(|_| r.gen_range(1..=k)).collect();
                    prop_assert!(!verify::verify_nsd(&g, &w).unwrap().ok);
                }
            }
        }
    }

    #[test]
    fn dcs_solutions_verify(g in graph_strategy(12), lambda in 2u64..4, seed in any::<u64>()) {
        let mut r = rng::from_seed(seed);
        let a: Vec<i64> = (0..g.vertex_count()).map(|_| r.gen_range(-5..5)).collect();
        let targets = ModTarget::new(a, vec![lambda; g.vertex_count()]).unwrap();
        let opts = DcsOptions { exact_threshold: 40, seed, ..DcsOptions::default() };
        if let Ok(sol) = dcs::find_dcs(&g, &targets, &opts) {
            prop_assert!(dcs::verify_dcs(&g, &sol.edges, &targets).unwrap().ok);
        }
    }

    #[test]
    fn dcs_potential_vanishes_exactly_on_admissible_degrees(d in 0usize..60, a in -50i64..50, lambda in 2u64..30, x in 0usize..60) {
        prop_assume!(x <= d);
        let targets = ModTarget::new(vec![a], vec![lambda]).unwrap();
        let (lo, hi) = dcs::degree_interval(d);
        let (r0, r1) = targets.residues(0);
        let r = x as u64 % lambda;
        let admissible = lo <= x && x <= hi && (r == r0 || r == r1);
        prop_assert_eq!(dcs::vertex_potential(d, &targets, 0, x) == 0, admissible);
    }

    #[test]
    fn certificate_text_round_trip(seed in any::<u64>()) {
        let g = Graph::gnp(7, 0.5, seed);
        if let Ok(Some(cert)) = verify::brute_force_22(&g) {
            prop_assert_eq!(Certificate::parse(&cert.to_text()).unwrap(), cert);
        }
    }
}

/// Five pair classes (the four pairs with `y = 2` and the pair `(0, 0)` with `y = 1`), 32
/// vertices each, joined across classes with probability 0.9. No edge joins identical
/// pairs with equal `y`, so `t = 1` suffices and every sum is fixed by the lists.
fn weighted_instance(seed: u64) -> (Graph, PairAssignment, EdgeBipartition, weighter::SideTargets, Certificate) {
    let class = |v: usize| v / 32;
    let mut r = rng::from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..160 {
        for v in u + 1..160 {
            if class(u) != class(v) && r.gen_bool(0.9) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(160, edges).unwrap();
    let (c1, c2, y) = (0..160)
        .map(|v| match class(v) {
            4 => (0, 0, 1),
            c => ((c / 2) as u64, (c % 2) as u64, 2),
        })
        .fold((vec![], vec![], vec![]), |(mut a, mut b, mut c), (x, z, w)| {
            a.push(x);
            b.push(z);
            c.push(w);
            (a, b, c)
        });
    let pa = PairAssignment::new(c1, c2, y).unwrap();
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let outcome = decompose::apply_rules(&g, &all, &pa);
    assert_eq!(outcome.t_value, 1);
    let bip = decompose::outcome_bipartition(&g, &outcome);
    let targets = weighter::assign_targets(&g, &bip, &outcome, &pa, 1).unwrap();
    let (cert, _) = weighter::build_weighting(&g, &bip, &targets, &DcsOptions { seed, ..DcsOptions::default() });
    (g, pa, bip, targets, cert)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn weighting_sum_structure(seed in any::<u64>()) {
        let (g, pa, bip, targets, cert) = weighted_instance(seed);
        prop_assert!(!matches!(cert.verdict, nsd22::Verdict::Failed { .. }), "{}", cert.verdict);
        for side in Side::BOTH {
            let i = side.index();
            let s = &cert.sums[i];
            for v in 0..g.vertex_count() {
                let d = targets.side_degree[i][v];
                if d == 0 {
                    prop_assert_eq!(s[&v], 0);
                    continue;
                }
                // s - d is the weight-2 degree and lies in the degree interval.
                let extra = (s[&v] - d as u64) as usize;
                let (lo, hi) = dcs::degree_interval(d);
                prop_assert!(lo <= extra && extra <= hi);
                let r = s[&v] % targets.lambda[v];
                prop_assert!(r == targets.aprime[i][v] || r == targets.aprime[i][v] + 1);
            }
            for e in bip.edges_on(side) {
                if bip.rule(e) == Rule::HPrime {
                    continue;
                }
                let (u, v) = g.endpoints(e);
                let (yu, yv) = (pa.y(u), pa.y(v));
                if yu == 2 * yv || yv == 2 * yu {
                    let (big, small) = if yu > yv { (u, v) } else { (v, u) };
                    let base = 2 * pa.y(small).trailing_zeros() as u64 % 4;
                    let own: BTreeSet<u64> = [base, (base + 1) % 4].into();
                    prop_assert!(own.contains(&(s[&small] % 4)));
                    prop_assert!(!own.contains(&(s[&big] % 4)));
                }
                if yu == yv && pa.pair(u) != pa.pair(v) {
                    prop_assert_ne!(s[&u] % targets.lambda[u], s[&v] % targets.lambda[v]);
                }
            }
        }
        prop_assert!(cert.verdict.is_valid());
        prop_assert!(verify::verify_certificate(&g, &cert).unwrap().ok);
    }
}

#[test]
fn tampered_certificates_are_caught() {
    let g = Graph::complete_bipartite(110, 54);
    let params = weighter::PipelineParams { t: 1, ..Default::default() };
    let cert = weighter::full_pipeline(&g, &params).certificate;
    assert!(verify::verify_certificate(&g, &cert).unwrap().ok);

    // A flipped weight changes two sums, so check (c) fires first.
    let mut flipped = cert.clone();
    let e = *flipped.weights[0].keys().next().unwrap();
    let w = flipped.weights[0].get_mut(&e).unwrap();
    *w = 3 - *w;
    let f = verify::verify_certificate(&g, &flipped).unwrap().failure.unwrap();
    assert!(matches!(f, verify::CertFailure::SumMismatch { side: Side::One, .. }), "{f}");

    // Flip the weight and repair the sums: the conflict, if any, is named at (d); otherwise
    // the certificate stays valid.
    let mut repaired = flipped.clone();
    let (u, v) = g.endpoints(e);
    for x in [u, v] {
        let s = repaired.sums[0].get_mut(&x).unwrap();
        *s = if cert.weights[0][&e] == 1 { *s + 1 } else { *s - 1 };
    }
    let check = verify::verify_certificate(&g, &repaired).unwrap();
    if let Some(f) = check.failure {
        assert!(matches!(f, verify::CertFailure::Conflict { .. }), "{f}");
    }

    let mut bad_sum = cert.clone();
    *bad_sum.sums[1].get_mut(&0).unwrap() += 1;
    assert!(matches!(
        verify::verify_certificate(&g, &bad_sum).unwrap().failure,
        Some(verify::CertFailure::SumMismatch { side: Side::Two, vertex: 0, .. })
    ));

    let mut bad_weight = cert.clone();
    bad_weight.weights[1].insert(*cert.weights[1].keys().next().unwrap(), 5);
    assert!(matches!(
        verify::verify_certificate(&g, &bad_weight).unwrap().failure,
        Some(verify::CertFailure::BadWeight { .. })
    ));

    let mut unassigned = cert.clone();
    unassigned.sides[3] = None;
    assert_eq!(
        verify::verify_certificate(&g, &unassigned).unwrap().failure,
        Some(verify::CertFailure::Unassigned { edge: 3 })
    );
}

#[test]
fn knsq_sides_meet_degree_and_colouring_bounds() {
    for n in [2, 4, 6, 8] {
        let (g, pa) = decompose::knsq_assignment(n).unwrap();
        let all: Vec<usize> = (0..g.edge_count()).collect();
        let bip = decompose::outcome_bipartition(&g, &decompose::apply_rules(&g, &all, &pa));
        let degrees = bip.side_degrees(&g);
        for side in Side::BOTH {
            assert!(degrees[side.index()].iter().all(|&d| d >= (n * n - 1) / 2));
            for e in bip.edges_on(side) {
                let (u, v) = g.endpoints(e);
                assert_ne!(pa.coordinate(u, side), pa.coordinate(v, side));
            }
        }
    }
}

#[test]
fn every_pair_routes_enough_choices_to_each_side() {
    for yu in [2u64, 4, 8] {
        for yv in [yu / 2, yu, 2 * yu] {
            for pv in (0..yv).flat_map(|a| (0..yv).map(move |b| (a, b))) {
                let mut count = [0u64; 2];
                for pu in (0..yu).flat_map(|a| (0..yu).map(move |b| (a, b))) {
                    if let Some((side, _)) = decompose::classify_pairs(pu, pv) {
                        count[side.index()] += 1;
                    }
                }
                let bound = (yu * yu - yu) / 2;
                assert!(count[0] >= bound && count[1] >= bound, "yu={yu} yv={yv} pv={pv:?} {count:?}");
            }
        }
    }
}
