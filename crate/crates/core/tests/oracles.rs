//! Library results against direct recounts.

use rand::Rng;

use hardreg::balanced::{check_condition, sample_once, verify_balanced, BalanceSpec, Condition};
use hardreg::core_construction::{
    build_core_sequence, default_parts, find_irregularity_witnesses, verify_degree_property, CoreSequence, GrowthProfile,
};
use hardreg::counterexample::{build_triangle_free, CounterexampleParams};
use hardreg::exact::{int, ratio, Rational};
use hardreg::graphs::Side;
use hardreg::regularity::{is_delta_regular_pair, sparsest_pair, CheckOptions};
use hardreg::{seed, BipartiteGraph, KPartiteKGraph, Real, VertexPartition};

fn random_graph(n: usize, m: usize, pct: u32, rng: &mut seed::Rng) -> BipartiteGraph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..m).map(move |v| (u, v))).filter(|_| rng.random_range(0..100) < pct).collect();
    BipartiteGraph::from_edges(n, m, edges).unwrap()
}

fn small_core(seed: u64) -> CoreSequence {
    let p = GrowthProfile {
        r_sizes: vec![4, 16],
        e: vec![2, 4],
        blowup_l: 2,
        blowup_r: 1,
        alpha: vec![Some(ratio(1, 1)); 2],
        beta: vec![Some(ratio(1, 2)); 2],
        require_quadrupling: true,
        max_retries: 16,
        keep_unaccepted: false,
        strict: false,
    };
    let (l, r) = default_parts(&p).unwrap();
    build_core_sequence(&p, &l, &r, seed).unwrap()
}

#[test]
fn codegree_is_the_neighbourhood_intersection() {
    let mut rng = seed::rng(61);
    let g = random_graph(16, 16, 50, &mut rng);
    for v in 0..16 {
        for w in 0..16 {
            let left = (0..16).filter(|&x| g.has_edge(v, x) && g.has_edge(w, x)).count() as u64;
            let right = (0..16).filter(|&u| g.has_edge(u, v) && g.has_edge(u, w)).count() as u64;
            assert_eq!(g.codegree(Side::Left, v, w).unwrap(), left);
            assert_eq!(g.codegree(Side::Right, v, w).unwrap(), right);
        }
    }
}

#[test]
fn edges_between_is_the_double_loop() {
    let mut rng = seed::rng(68);
    let g = random_graph(12, 12, 40, &mut rng);
    for _ in 0..100 {
        let s: Vec<usize> = (0..12).filter(|_| rng.random_bool(0.5)).collect();
        let t: Vec<usize> = (0..12).filter(|_| rng.random_bool(0.5)).collect();
        let naive = s.iter().map(|&u| t.iter().filter(|&&v| g.has_edge(u, v)).count() as u64).sum::<u64>();
        assert_eq!(g.edges_between(&s, &t).unwrap(), naive);
    }
}

#[test]
fn kgraph_tuples_are_the_listed_products() {
    let tuples = [vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]];
    let h = KPartiteKGraph::from_tuples(&[2, 2, 2], tuples.clone()).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                assert_eq!(h.contains(&[a, b, c]), tuples.contains(&vec![a, b, c]));
            }
        }
    }
    assert_eq!(h.edge_count(), 3);
}

/// Every pair of subsets of size at least `(a, b)`: the fewest edges at
/// exactly `(a, b)` and the smallest density overall.
fn subset_extremes(g: &BipartiteGraph, a: usize, b: usize) -> (u64, Rational) {
    let (n, m) = (g.left(), g.right());
    let cols: Vec<u32> = (0..m).map(|v| (0..n).filter(|&u| g.has_edge(u, v)).fold(0, |acc, u| acc | 1 << u)).collect();
    let mut sums = vec![0u64; 1 << m];
    let mut fewest = u64::MAX;
    // Sparsest density as a fraction (edges, pairs).
    let (mut num, mut den) = (1u64, 1u64);
    for sa in 1u32..1 << n {
        let sa_len = sa.count_ones() as usize;
        if sa_len < a {
            continue;
        }
        for sb in 1usize..1 << m {
            sums[sb] = sums[sb & (sb - 1)] + (cols[sb.trailing_zeros() as usize] & sa).count_ones() as u64;
            let sb_len = sb.count_ones() as usize;
            if sb_len < b {
                continue;
            }
            let (e, pairs) = (sums[sb], (sa_len * sb_len) as u64);
            if sa_len == a && sb_len == b {
                fewest = fewest.min(e);
            }
            if e * den < num * pairs {
                (num, den) = (e, pairs);
            }
        }
    }
    (fewest, int(num) / int(den))
}

#[test]
fn threshold_sizes_attain_the_minimum_density() {
    let mut rng = seed::rng(266);
    let deltas = [ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3)];
    for _ in 0..60 {
        let (n, m) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let g = random_graph(n, m, rng.random_range(10..90), &mut rng);
        for d in &deltas {
            let sp = sparsest_pair(&g, d, &CheckOptions::default()).unwrap().expect("thresholds fit");
            let (a, b) = (sp.a.len(), sp.b.len());
            assert_eq!(int(a as u64), (d * int(n as u64)).ceil().max(int(1)));
            assert_eq!(int(b as u64), (d * int(m as u64)).ceil().max(int(1)));
            let (fewest, sparsest) = subset_extremes(&g, a, b);
            assert_eq!(sp.edges, fewest);
            assert_eq!(int(fewest) / int((a * b) as u64), sparsest);
        }
    }
}

#[test]
fn twelve_by_twelve_pair_matches_all_subsets() {
    let d = ratio(1, 4);
    for s in 0..3 {
        let mut rng = seed::rng(261 + s);
        let g = random_graph(12, 12, 50, &mut rng);
        let e = g.edge_count();
        let (a, b) = (3usize, 3usize);
        // Irregular iff the sparsest threshold pair is below half the density.
        let (fewest, _) = subset_extremes(&g, a, b);
        let naive_regular = e == 0 || 2 * fewest * 144 >= e * (a * b) as u64;
        assert_eq!(is_delta_regular_pair(&g, &d, &CheckOptions::default()).unwrap().is_regular(), naive_regular);
    }
}

/// Conditions (i) to (iv) with plain loops.
fn naive_conditions(g: &BipartiteGraph, spec: &BalanceSpec) -> [bool; 4] {
    let (nx, ny) = (spec.x_size(), spec.y_size());
    let equitable = spec.x.cells().iter().all(|c| (0..ny).all(|y| 2 * c.iter().filter(|&&x| g.has_edge(x, y)).count() == c.len()));
    let balanced = spec.f.iter().all(|f| {
        (0..nx).all(|x| {
            (x + 1..nx).all(|x2| {
                let agree = f.iter().filter(|&&y| g.has_edge(x, y) == g.has_edge(x2, y)).count();
                int(agree as u64) <= (ratio(1, 2) + &spec.beta) * int(f.len() as u64)
            })
        })
    });
    let pseudorandom = spec.x.cells().iter().all(|c| {
        let n = c.len() as u64;
        spec.f.iter().all(|f| {
            f.iter().all(|&y| {
                f.iter().filter(|&&y2| y2 != y).all(|&y2| {
                    let co = c.iter().filter(|&&x| g.has_edge(x, y) && g.has_edge(x, y2)).count() as u64;
                    4 * co <= n || spec.alpha.cmp_rational(&(int(4 * co - n) / int(n))).is_ge()
                })
            })
        })
    });
    let complements = spec.y.cells().iter().all(|c| {
        let row = |y: usize| (0..nx).map(|x| g.has_edge(x, y)).collect::<Vec<bool>>();
        let rows: Vec<Vec<bool>> = c.iter().map(|&y| row(y)).collect();
        rows.iter().all(|r| {
            let flip: Vec<bool> = r.iter().map(|b| !b).collect();
            rows.iter().filter(|s| **s == *r).count() == rows.iter().filter(|s| **s == flip).count()
        })
    });
    [equitable, balanced, pseudorandom, complements]
}

#[test]
fn balanced_verdicts_match_naive_recounts() {
    let x = VertexPartition::blocks(128, 4).unwrap();
    let y = VertexPartition::blocks(64, 4).unwrap();
    let f = y.cells().to_vec();
    let alpha = Real::root(ratio(1, 32), 3);
    let loose = BalanceSpec::new(x.clone(), y.clone(), f.clone(), alpha.clone(), ratio(1, 2)).unwrap();
    let tight = BalanceSpec::new(x, y, f, alpha, ratio(1, 16)).unwrap();
    let mut rng = seed::rng(359);
    let mut seen = [[0usize; 2]; 4];
    for s in 0..8 {
        for spec in [&loose, &tight] {
            let (mut g, _) = sample_once(spec, s);
            if s % 2 == 1 {
                let (u, v) = (rng.random_range(0..g.left()), rng.random_range(0..g.right()));
                g.set_edge(u, v, !g.has_edge(u, v));
            }
            let naive = naive_conditions(&g, spec);
            for (i, c) in Condition::ALL.into_iter().enumerate() {
                let lib = check_condition(&g, spec, c).unwrap().is_none();
                assert_eq!(lib, naive[i], "seed {s}, condition {c}");
                seen[i][usize::from(lib)] += 1;
            }
            assert_eq!(verify_balanced(&g, spec).unwrap().holds(), naive.iter().all(|&b| b));
        }
    }
    // Both outcomes occur for the forced conditions.
    assert!(seen[0][0] > 0 && seen[0][1] > 0 && seen[3][0] > 0 && seen[3][1] > 0, "{seen:?}");
}

#[test]
fn triangles_match_the_triple_loop() {
    let params = CounterexampleParams::desk();
    let t = build_triangle_free(&params, 3).unwrap();
    let count = |tp: &hardreg::counterexample::Tripartite| {
        let [g01, g02, g12] = &tp.pairs;
        let n = tp.n;
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .filter(|&(a, b, c)| g01.has_edge(a, b) && g02.has_edge(a, c) && g12.has_edge(b, c))
            .count() as u64
    };
    assert_eq!(count(&t.base), 0);
    assert_eq!(count(&t.blowup), 0);
    // Restoring the deleted edges brings back triangles the listing agrees on.
    let mut raw = t.base.clone();
    for &(pair, u, v) in &t.audit.deleted {
        raw.pairs[pair].add_edge(u, v);
    }
    assert_eq!(raw.triangle_count(), count(&raw));
    assert_eq!(raw.triangles().len() as u64, count(&raw));
}

#[test]
fn neighbour_families_match_an_adjacency_scan() {
    let seq = small_core(4);
    for i in 1..=seq.s() {
        let rp = seq.r_part(i);
        for parent in 0..seq.members(i - 1) {
            let g = seq.member_graph(i - 1, parent);
            for l in 0..seq.l_part(i - 1).len() {
                let u = seq.l_part(i - 1).cell(l)[0];
                let scan: Vec<usize> = (0..rp.len()).filter(|&r| g.has_edge(u, rp.cell(r)[0])).collect();
                assert_eq!(seq.neighbor_family(i, parent, l).unwrap().members, scan);
            }
        }
    }
}

#[test]
fn degrees_match_a_per_vertex_recount() {
    let seq = small_core(4);
    let ell = seq.s();
    for m in 0..seq.members(ell) {
        let g = seq.member_graph(ell, m);
        for i in 1..=ell {
            let q = seq.quotient(i, seq.ancestor(ell, m, i));
            for (l, r) in q.edges() {
                let r_set = seq.r_part(i).cell(r);
                let want = (r_set.len() as u64) >> (ell - i);
                let naive = seq.l_part(i).cell(l).iter().all(|&u| r_set.iter().filter(|&&v| g.has_edge(u, v)).count() as u64 == want);
                assert!(naive);
                assert_eq!(verify_degree_property(&seq, ell, m, i, l, r).unwrap().holds(), naive);
            }
        }
    }
}

#[test]
fn witnesses_match_an_exhaustive_cluster_scan() {
    let seq = small_core(4);
    let l2 = seq.l_part(2);
    let kids = &seq.l_children(2)[0];
    let p: Vec<usize> = l2.cell(kids[0]).iter().chain(l2.cell(kids[1])).copied().collect();
    for m in 0..seq.members(2) {
        let g = seq.member_graph(2, m);
        let rep = find_irregularity_witnesses(&seq, 2, m, 2, &p, &ratio(1, 2)).unwrap();
        assert!(!rep.witnesses.is_empty());
        for w in &rep.witnesses {
            let r_set = seq.r_part(2).cell(w.cluster);
            let p1: Vec<usize> = p.iter().copied().filter(|&u| r_set.iter().all(|&v| !g.has_edge(u, v))).collect();
            assert_eq!(w.p1, p1);
            let e: u64 = p.iter().map(|&u| r_set.iter().filter(|&&v| g.has_edge(u, v)).count() as u64).sum();
            assert_eq!(w.e_pr, e);
            // d(P, R) >= 2^i p / 4 with p = 2^-ℓ and ℓ = i here.
            assert!(4 * e >= (p.len() * r_set.len()) as u64);
        }
    }
}
