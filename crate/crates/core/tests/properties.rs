use proptest::prelude::*;

use hardreg::balanced::{check_condition, sample_once, BalanceSpec, Condition};
use hardreg::counterexample::{build_triangle_free, convex_decompose, recombine, CounterexampleParams};
use hardreg::exact::{fmt_rational, int, parse_rational, ratio};
use hardreg::graphs::io::{bipartite_from_text, bipartite_to_text, kgraph_from_text, kgraph_to_text};
use hardreg::graphs::{aux_graph, lift_graph_to_kgraph};
use hardreg::regularity::{is_delta_regular_pair, CheckOptions, PairVerdict};
use hardreg::{seed, BipartiteGraph, KPartiteKGraph, Rational, Real, VertexPartition};

fn graph(max: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        proptest::collection::vec(any::<bool>(), n * m).prop_map(move |bits| {
            let edges = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i / m, i % m));
            BipartiteGraph::from_edges(n, m, edges).unwrap()
        })
    })
}

/// A point of `[0,1]^n` with integral coordinate sum.
fn integral_point() -> impl Strategy<Value = Vec<Rational>> {
    (1usize..10, 1i64..9).prop_flat_map(|(n, den)| {
        proptest::collection::vec(0..=den, n).prop_filter_map("sum not integral", move |v| {
            let mut x: Vec<Rational> = v.iter().map(|&a| ratio(a, den)).collect();
            let frac = x.iter().sum::<Rational>().fract();
            let last = &x[n - 1] - frac;
            (last >= int(0)).then(|| {
                x[n - 1] = last;
                x
            })
        })
    })
}

fn delta() -> impl Strategy<Value = Rational> {
    (1i64..5, 2i64..9).prop_filter_map("delta must lie in (0,1]", |(a, b)| (a <= b).then(|| ratio(a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convex_decomposition_recombines(x in integral_point()) {
        let terms = convex_decompose(&x).unwrap();
        let norm: Rational = x.iter().sum();
        prop_assert!(terms.len() <= x.len() + 1);
        prop_assert_eq!(terms.iter().map(|(w, _)| w.clone()).sum::<Rational>(), int(1));
        for (w, y) in &terms {
            prop_assert!(*w > int(0));
            prop_assert_eq!(int(y.iter().filter(|&&b| b).count() as u64), norm.clone());
        }
        prop_assert_eq!(recombine(&terms, x.len()), x);
    }

    #[test]
    fn irregular_verdicts_carry_checkable_witnesses(g in graph(7), d in delta()) {
        match is_delta_regular_pair(&g, &d, &CheckOptions::default()).unwrap() {
            PairVerdict::Irregular(w) => prop_assert!(w.verify(&g, &d)),
            PairVerdict::Regular => {}
            PairVerdict::NoWitnessFound => prop_assert!(false, "exact mode must decide"),
        }
    }

    #[test]
    fn sampled_witnesses_agree_with_exact(g in graph(7), d in delta(), s in any::<u64>()) {
        let exact = is_delta_regular_pair(&g, &d, &CheckOptions::default()).unwrap();
        let sampled = is_delta_regular_pair(&g, &d, &CheckOptions::sampled(s, 4)).unwrap();
        if let PairVerdict::Irregular(w) = &sampled {
            prop_assert!(w.verify(&g, &d));
            prop_assert!(!exact.is_regular());
        }
    }

    #[test]
    fn complete_and_empty_pairs_are_regular(n in 1usize..8, m in 1usize..8, d in delta()) {
        let opts = CheckOptions::default();
        prop_assert!(is_delta_regular_pair(&BipartiteGraph::complete(n, m), &d, &opts).unwrap().is_regular());
        prop_assert!(is_delta_regular_pair(&BipartiteGraph::empty(n, m), &d, &opts).unwrap().is_regular());
    }

    #[test]
    fn blowup_keeps_density_and_scales_counts(g in graph(5), f in 1usize..4) {
        let b = g.blowup(f).unwrap();
        prop_assert_eq!(b.density(), g.density());
        prop_assert_eq!(b.edge_count(), g.edge_count() * (f * f) as u64);
        for u in 0..b.left() {
            for v in 0..b.right() {
                prop_assert_eq!(b.has_edge(u, v), g.has_edge(u / f, v / f));
            }
        }
    }

    #[test]
    fn bipartite_text_round_trips(g in graph(9)) {
        prop_assert_eq!(bipartite_from_text(&bipartite_to_text(&g)).unwrap(), g);
    }

    #[test]
    fn aux_and_lift_are_inverse(sizes in proptest::collection::vec(1usize..4, 2..5), s in any::<u64>()) {
        use rand::Rng;
        let mut rng = seed::rng(s);
        let total: usize = sizes.iter().product();
        let codes: Vec<u64> = (0..total as u64).filter(|_| rng.random_bool(0.4)).collect();
        let h = KPartiteKGraph::from_codes(&sizes, codes).unwrap();
        let k = sizes.len();
        let aux = aux_graph(&h, k - 1).unwrap();
        prop_assert_eq!(aux.graph.edge_count(), h.edge_count());
        prop_assert_eq!(&lift_graph_to_kgraph(&aux.graph, &sizes[..k - 1]).unwrap(), &h);
        prop_assert_eq!(kgraph_from_text(&kgraph_to_text(&h)).unwrap(), h);
    }

    #[test]
    fn blocks_are_equitable_chains(size in 1usize..9, c in 1usize..8) {
        let n = size * c;
        let p = VertexPartition::blocks(n, c).unwrap();
        prop_assert!(p.is_equitable());
        prop_assert!(p.refines(&VertexPartition::trivial(n).unwrap()));
        prop_assert!(VertexPartition::singletons(n).refines(&p));
        prop_assert_eq!(VertexPartition::from_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn rationals_print_and_parse(a in -1000i64..1000, b in 1i64..1000) {
        let x = ratio(a, b);
        prop_assert_eq!(parse_rational(&fmt_rational(&x)).unwrap(), x);
    }

    #[test]
    fn seed_derivation_is_stable_and_label_sensitive(master in any::<u64>(), a in "[a-z]{1,6}", b in "[a-z]{1,6}") {
        prop_assert_eq!(seed::derive(master, &[&a]), seed::derive(master, &[&a]));
        if a != b {
            prop_assert_ne!(seed::derive(master, &[&a]), seed::derive(master, &[&b]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampler_forces_equitability_and_complements(
        xc in 1usize..4, xs in 1usize..5, yc in 1usize..4, ys in 1usize..5, s in any::<u64>()
    ) {
        let x = VertexPartition::blocks(2 * xs * xc, xc).unwrap();
        let y = VertexPartition::blocks(2 * ys * yc, yc).unwrap();
        let f = y.cells().to_vec();
        let spec = BalanceSpec::new(x, y, f, Real::rational(ratio(1, 2)), ratio(1, 4)).unwrap();
        let (g, phi) = sample_once(&spec, s);
        prop_assert!(check_condition(&g, &spec, Condition::Equitable).unwrap().is_none());
        prop_assert!(check_condition(&g, &spec, Condition::ComplementClosed).unwrap().is_none());
        for (v, &w) in phi.iter().enumerate() {
            prop_assert_eq!(phi[w], v);
            prop_assert_eq!(spec.y.cell_of(v), spec.y.cell_of(w));
        }
    }

    #[test]
    fn deletion_leaves_no_triangles_and_stays_balanced(s in any::<u64>()) {
        let params = CounterexampleParams::desk();
        let t = build_triangle_free(&params, s).unwrap();
        let a = &t.audit;
        prop_assert_eq!(t.base.triangle_count(), 0);
        prop_assert_eq!(t.blowup.triangle_count(), 0);
        prop_assert!(a.deleted.len() as u64 <= a.attempts[a.chosen].triangles);
        prop_assert_eq!(a.deletions.iter().sum::<u64>(), a.deleted.len() as u64);
        let (lo, hi) = (a.deletions.iter().min().unwrap(), a.deletions.iter().max().unwrap());
        prop_assert!(hi - lo <= 1, "deletions {:?}", a.deletions);
        prop_assert_eq!(t.blowup.n, t.base.n * params.m);
    }
}
