use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hardreg::balanced::{sample_once, BalanceSpec};
use hardreg::core_construction::{build_core_sequence, default_parts, GrowthProfile};
use hardreg::counterexample::{build_triangle_free, CounterexampleParams};
use hardreg::exact::ratio;
use hardreg::hypergraph_construction::{build_pasted_instance, ParamSchedule};
use hardreg::regularity::{is_delta_regular_pair, CheckOptions};
use hardreg::{BipartiteGraph, Real, VertexPartition};

fn pair_check(c: &mut Criterion) {
    let g = BipartiteGraph::from_edges(10, 10, (0..10).flat_map(|u| (0..10).map(move |v| (u, v))).filter(|(u, v)| (u * 7 + v * 3) % 5 < 3))
        .unwrap();
    let opts = CheckOptions::default();
    c.bench_function("pair_exact_10x10", |b| b.iter(|| is_delta_regular_pair(black_box(&g), &ratio(1, 4), &opts).unwrap()));
    let big = g.blowup(6).unwrap();
    let sampled = CheckOptions::sampled(1, 8);
    c.bench_function("pair_sampled_60x60", |b| b.iter(|| is_delta_regular_pair(black_box(&big), &ratio(1, 4), &sampled).unwrap()));
}

fn sampler(c: &mut Criterion) {
    let x = VertexPartition::blocks(256, 4).unwrap();
    let y = VertexPartition::blocks(128, 4).unwrap();
    let f = y.cells().to_vec();
    let spec = BalanceSpec::new(x, y, f, Real::rational(ratio(1, 4)), ratio(1, 16)).unwrap();
    let mut seed = 0u64;
    c.bench_function("balanced_draw_256x128", |b| {
        b.iter(|| {
            seed += 1;
            sample_once(&spec, seed)
        })
    });
}

fn builds(c: &mut Criterion) {
    let profile = GrowthProfile {
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
    let (l, r) = default_parts(&profile).unwrap();
    c.bench_function("core_small", |b| b.iter(|| build_core_sequence(&profile, &l, &r, 4).unwrap()));
    let params = CounterexampleParams::desk();
    c.bench_function("triangle_free_desk", |b| b.iter(|| build_triangle_free(&params, 2).unwrap()));
    let sched = ParamSchedule::desk();
    c.bench_function("pasted_k3_s2", |b| b.iter(|| build_pasted_instance(3, 2, &sched, 8).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = pair_check, sampler, builds
}
criterion_main!(benches);
