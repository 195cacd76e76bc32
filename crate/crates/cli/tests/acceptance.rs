//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL ...` line.
//! Run with `cargo test --release -p hardreg-cli --test acceptance -- --nocapture`.

mod common;

use std::fs;
use std::time::{Duration, Instant};

use rand::Rng;

use common::{code, hardreg, p, profile, stdout};
use hardreg::balanced::{check_condition, check_one_six, sample_once, BalanceSpec, Condition, Weights};
use hardreg::core_construction::{
    build_core_sequence, default_parts, find_irregularity_witnesses, one_twelve_for, verify_all_core_properties,
    verify_structure, CoreSequence, GrowthProfile,
};
use hardreg::counterexample::{build_triangle_free, convex_decompose, recombine, verify_counterexample, CounterexampleParams};
use hardreg::exact::{fmt_rational, int, parse_rational, pow2, ratio};
use hardreg::graphs::io::sha256_hex;
use hardreg::graphs::{aux_graph, lift_graph_to_kgraph};
use hardreg::hypergraph_construction::{
    ackermann, build_pasted_instance, delta_k, pasted_density, verify_family, verify_pasted, ParamSchedule,
    DEFAULT_CUTOFF_BITS,
};
use hardreg::regularity::{is_delta_regular_pair, CheckOptions, PairVerdict};
use hardreg::rs_regularity::{dense_counting_check, is_eps_regular_partition, relative_density, RankedHypergraph};
use hardreg::{seed, BipartiteGraph, KPartiteKGraph, KPartition, Polyad, Rational, Real, VertexPartition};

fn report(n: u32, ok: bool, elapsed: Duration, limit: u64, detail: String) {
    let in_time = elapsed.as_secs_f64() < limit as f64;
    let pass = ok && in_time;
    println!(
        "criterion {n}: {} {detail} [{:.2}s, limit {limit}s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} over its time limit");
}

fn desk(seed: u64) -> hardreg::Result<CoreSequence> {
    let profile = GrowthProfile::desk();
    let (l, r) = default_parts(&profile)?;
    build_core_sequence(&profile, &l, &r, seed)
}

#[test]
fn criterion_01_ackermann_arithmetic() {
    let t = Instant::now();
    let ack = |k, n| ackermann(k, n, DEFAULT_CUTOFF_BITS).unwrap().to_u64();
    let values = [ack(1, 3), ack(2, 1), ack(2, 3)];
    let deltas = [delta_k(1).unwrap(), delta_k(2).unwrap()];
    let ok = values == [Some(8), Some(2), Some(16)] && deltas == [pow2(-8), pow2(-64)];
    report(
        1,
        ok,
        t.elapsed(),
        1,
        format!("Ack_1(3), Ack_2(1), Ack_2(3) = {values:?}; delta_1 = {}, delta_2 = {}", deltas[0], deltas[1]),
    );
}

#[test]
fn criterion_02_core_structure() {
    let t = Instant::now();
    let seq = desk(0).unwrap();
    let r = verify_structure(&seq);
    let ok = r.holds() && r.members_checked > 0;
    report(
        2,
        ok,
        t.elapsed(),
        60,
        format!(
            "{} members; failures: density {}, chain {}, blowup {}, family {}",
            r.members_checked,
            r.density_failures.len(),
            r.chain_failures.len(),
            r.blowup_failures.len(),
            r.family_failures.len()
        ),
    );
}

#[test]
fn criterion_03_core_properties() {
    let t = Instant::now();
    let (mut accepted, mut rejected, mut checked, mut bad1, mut bad2) = (0, 0, 0, 0, 0);
    for s in 0..20 {
        let seq = match desk(s) {
            Ok(seq) if seq.all_accepted() => seq,
            _ => {
                rejected += 1;
                continue;
            }
        };
        accepted += 1;
        for r in verify_all_core_properties(&seq).unwrap() {
            checked += 1;
            bad1 += usize::from(!r.item1_holds());
            bad2 += usize::from(!r.item2_holds());
        }
    }
    report(
        3,
        accepted > 0 && bad1 == 0 && bad2 == 0,
        t.elapsed(),
        120,
        format!("20 seeds, {accepted} accepted, {rejected} rejected; {checked} reports; item 1 failures {bad1}, item 2 failures {bad2}"),
    );
}

/// Regular unless some `A' ⊆ A`, `B' ⊆ B` of size at least `δ|A|`, `δ|B|`
/// have `d(A',B') < d(A,B)/2`. Every pair of subsets is tried.
fn naive_regular(g: &BipartiteGraph, delta: &Rational) -> bool {
    let (n, m) = (g.left(), g.right());
    let e = g.edge_count();
    if e == 0 {
        return true;
    }
    let big = |size: usize, whole: usize| int(size as u64) >= delta * int(whole as u64);
    let cols: Vec<u32> = (0..m).map(|v| (0..n).filter(|&u| g.has_edge(u, v)).fold(0, |acc, u| acc | 1 << u)).collect();
    let mut sums = vec![0u64; 1 << m];
    for a in 1u32..1 << n {
        if !big(a.count_ones() as usize, n) {
            continue;
        }
        for b in 1usize..1 << m {
            let low = b.trailing_zeros() as usize;
            sums[b] = sums[b & (b - 1)] + (cols[low] & a).count_ones() as u64;
            let bs = b.count_ones() as u64;
            if big(bs as usize, m) && 2 * sums[b] * ((n * m) as u64) < e * a.count_ones() as u64 * bs {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_04_pair_oracle() {
    let t = Instant::now();
    let deltas = [ratio(1, 4), ratio(1, 3), ratio(1, 2)];
    let mut rng = seed::rng_for(4, &["acceptance", "oracle"]);
    let (mut cases, mut agree, mut irregular) = (0, 0, 0);
    let mut first_disagreement = None;
    for i in 0..200 {
        let (n, m) = (rng.random_range(1..=10), rng.random_range(1..=10));
        let pct = rng.random_range(0..=100);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..m).map(move |v| (u, v))).filter(|_| rng.random_range(0..100) < pct).collect();
        let g = BipartiteGraph::from_edges(n, m, edges).unwrap();
        for d in &deltas {
            cases += 1;
            let fast = is_delta_regular_pair(&g, d, &CheckOptions::default()).unwrap();
            if let PairVerdict::Irregular(w) = &fast {
                assert!(w.verify(&g, d), "witness does not check out");
                irregular += 1;
            }
            if fast.is_regular() == naive_regular(&g, d) {
                agree += 1;
            } else if first_disagreement.is_none() {
                first_disagreement = Some(format!("graph {i} ({n}x{m}), delta {d}"));
            }
        }
    }
    report(
        4,
        agree == cases,
        t.elapsed(),
        120,
        format!("{agree}/{cases} agree ({irregular} irregular); first disagreement: {first_disagreement:?}"),
    );
}

#[test]
fn criterion_05_balanced_sampler() {
    let t = Instant::now();
    let x = VertexPartition::blocks(256, 4).unwrap();
    let y = VertexPartition::blocks(128, 4).unwrap();
    let f: Vec<Vec<usize>> = y.cells().to_vec();
    let spec = BalanceSpec::new(x, y, f, Real::rational(ratio(1, 4)), ratio(1, 16)).unwrap();
    let mut rng = seed::rng_for(5, &["acceptance", "lambda"]);
    let (mut forced_ok, mut accepted, mut six_checks, mut six_ok) = (0, 0, 0, 0);
    let mut first_rejection = None;
    for s in 0..100 {
        let (g, _) = sample_once(&spec, s);
        let eq = check_condition(&g, &spec, Condition::Equitable).unwrap();
        let cc = check_condition(&g, &spec, Condition::ComplementClosed).unwrap();
        forced_ok += usize::from(eq.is_none() && cc.is_none());
        let bal = check_condition(&g, &spec, Condition::Balanced).unwrap();
        let pr = check_condition(&g, &spec, Condition::Pseudorandom).unwrap();
        if bal.is_none() && pr.is_none() {
            accepted += 1;
            for _ in 0..20 {
                let w: Vec<u64> = (0..g.left()).map(|_| rng.random_range(0..=100)).collect();
                let Ok(lambda) = Weights::new(w) else { continue };
                six_checks += 1;
                six_ok += usize::from(check_one_six(&g, &lambda).is_ok_and(|r| r.holds));
            }
        } else if first_rejection.is_none() {
            first_rejection = bal.or(pr).map(|v| format!("{} {}", v.condition, v.detail));
        }
    }
    let ok = forced_ok == 100 && 2 * accepted >= 100 && six_ok == six_checks;
    report(
        5,
        ok,
        t.elapsed(),
        180,
        format!(
            "(i)+(iv) on {forced_ok}/100; (ii)+(iii) accepted {accepted}/100 (gate 50); one-six {six_ok}/{six_checks}; first rejection: {}",
            first_rejection.unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_06_witnesses_match_one_twelve() {
    let t = Instant::now();
    let seq = desk(0).unwrap();
    let ell = seq.s();
    let (mut cases, mut matched, mut witnesses, mut sound) = (0, 0, 0, 0);
    for i in 1..=ell {
        let li = seq.l_part(i);
        for kids in seq.l_children(i).iter().take(2) {
            let mut choices = vec![vec![kids[0], kids[1]], vec![kids[0], kids[kids.len() - 1]]];
            if kids.len() >= 3 {
                choices.push(kids[..3].to_vec());
            }
            for cells in choices {
                let set: Vec<usize> = cells.iter().flat_map(|&c| li.cell(c).iter().copied()).collect();
                for m in 0..seq.members(ell) {
                    let rep = find_irregularity_witnesses(&seq, ell, m, i, &set, &ratio(1, 4)).unwrap();
                    let ot = one_twelve_for(&seq, ell, m, i, &set).unwrap();
                    let found: Vec<usize> = rep.witnesses.iter().map(|w| w.cluster).collect();
                    cases += 1;
                    matched += usize::from(found == ot.qualifying);
                    witnesses += rep.witnesses.len();
                    sound += rep.witnesses.iter().filter(|w| w.p1_isolated && w.dense).count();
                }
            }
        }
    }
    report(
        6,
        cases > 0 && matched == cases && witnesses > 0 && sound == witnesses,
        t.elapsed(),
        60,
        format!("{matched}/{cases} P choices match the one-twelve count; {sound}/{witnesses} witnesses isolated and dense"),
    );
}

/// Changes the last field of a body line so that it still parses where possible.
fn bump_last(line: &str) -> String {
    let (head, last) = line.rsplit_once(' ').unwrap_or(("", line));
    let new = match parse_rational(last) {
        Ok(x) => fmt_rational(&(x + int(1))),
        Err(_) if last == "true" => "false".into(),
        Err(_) if last == "false" => "true".into(),
        Err(_) => format!("{}0", &last[..last.len() - 1]),
    };
    if head.is_empty() {
        new
    } else {
        format!("{head} {new}")
    }
}

fn with_digest(body: &[String]) -> String {
    let text = body.join("\n") + "\n";
    let digest = sha256_hex(text.as_bytes());
    format!("{text}digest {digest}\n")
}

#[test]
fn criterion_07_certificate_round_trip() {
    let t = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("core");
    let o = hardreg(&["build-core", "--profile", p(&profile("small-core.toml")), "--seed", "21", "--out", p(&dir)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let cert = tmp.path().join("cert.txt");
    let o = hardreg(&[
        "certify", "--dir", p(&dir), "--p", p(&dir.join("L1.txt")), "--q", p(&dir.join("R2.txt")), "--delta", "1/1048576",
        "--level", "2", "--member", "1", "--t", "2", "--out", p(&cert),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let verify = |path: &std::path::Path| hardreg(&["verify-cert", "--dir", p(&dir), "--cert", p(path)]);
    let o = verify(&cert);
    let text = fs::read_to_string(&cert).unwrap();
    let lines: Vec<String> = text.lines().map(String::from).collect();
    let ledger = lines.iter().filter(|l| l.starts_with("line ")).count();
    let clean = code(&o) == 0 && stdout(&o).contains(&format!("{ledger} ledger lines checked, refutes true, ok true"));

    let forged = tmp.path().join("forged.txt");
    let mut caught = 0;
    for i in 0..lines.len() {
        let mut v = lines.clone();
        v[i].push('7');
        fs::write(&forged, v.join("\n") + "\n").unwrap();
        caught += usize::from(code(&verify(&forged)) == 1);
    }
    // Semantic edits with a recomputed digest: every ledger field that is
    // recounted, plus the totals and the graph binding.
    let body = &lines[..lines.len() - 1];
    let mut redigested = 0;
    let mut recaught = 0;
    for i in 0..body.len() {
        let l = &body[i];
        let mut variants = Vec::new();
        if l.starts_with("line ") {
            let mut f: Vec<String> = l.split(' ').map(String::from).collect();
            for idx in [4, 5, 8] {
                let orig = f[idx].clone();
                f[idx] = fmt_rational(&(parse_rational(&orig).unwrap() + int(1)));
                variants.push(f.join(" "));
                f[idx] = orig;
            }
        } else if ["total ", "edges ", "graph ", "refutes "].iter().any(|k| l.starts_with(k)) {
            variants.push(bump_last(l));
        }
        for new in variants {
            let mut v = body.to_vec();
            v[i] = new;
            fs::write(&forged, with_digest(&v)).unwrap();
            redigested += 1;
            recaught += usize::from(code(&verify(&forged)) == 1);
        }
    }
    report(
        7,
        clean && ledger > 0 && caught == lines.len() && recaught == redigested,
        t.elapsed(),
        60,
        format!(
            "fresh-process check {} ({ledger} ledger lines); tampered lines rejected {caught}/{}; re-digested edits rejected {recaught}/{redigested}",
            if clean { "ok" } else { "FAILED" },
            lines.len()
        ),
    );
}

#[test]
fn criterion_08_hypergraph_pipeline() {
    let t = Instant::now();
    let sched = ParamSchedule::desk();
    let (k, s) = (3, 2);
    let inst = build_pasted_instance(k, s, &sched, 8).unwrap();
    let pasted = verify_pasted(&inst, &sched).unwrap();
    let mut problems = Vec::new();
    if !pasted.holds(s) || pasted.density != pasted_density(k, s) || pasted.density != ratio(3, 16) {
        problems.push(format!("pasted density {} / {pasted:?}", pasted.density));
    }
    if !inst.chain.iter().flatten().all(VertexPartition::is_equitable) {
        problems.push("vertex chain not equitable".into());
    }
    let mut members = 0;
    for (x, fam) in inst.families.iter().enumerate() {
        let fr = verify_family(fam, &sched).unwrap();
        if !fr.holds() {
            problems.push(format!("family {x}: {fr:?}"));
        }
        let mut level = Some(fam);
        while let Some(f) = level {
            let sizes = f.core.left_size() as u64 * f.core.right_size() as u64;
            for j in 1..=f.s {
                let hs: Vec<KPartiteKGraph> = (0..f.members(j)).map(|m| f.member(j, m).unwrap()).collect();
                let total: u64 = hs.iter().map(KPartiteKGraph::edge_count).sum();
                let union = hs.iter().skip(1).fold(hs[0].clone(), |a, b| a.union(b).unwrap());
                let equal = hs.iter().all(|h| h.edge_count() == hs[0].edge_count());
                if total != sizes || union.edge_count() != sizes || !equal {
                    problems.push(format!("family {x}, k={}, H_{j} is not an equal partition", f.k));
                }
                for (m, h) in hs.iter().enumerate() {
                    members += 1;
                    if h.density() != pow2(-(j as i64)) {
                        problems.push(format!("family {x}, k={}, H_{j}[{m}] density {}", f.k, h.density()));
                    }
                    let aux = aux_graph(h, f.k - 1).unwrap();
                    let lifted = lift_graph_to_kgraph(&aux.graph, &h.sizes()[..f.k - 1]).unwrap();
                    if lifted != *h || aux.graph != f.core.member_graph(j, m) {
                        problems.push(format!("family {x}, k={}, H_{j}[{m}] lift/aux mismatch", f.k));
                    }
                }
            }
            level = f.sub.as_deref();
        }
    }
    report(
        8,
        problems.is_empty() && members > 0,
        t.elapsed(),
        300,
        format!(
            "pasted density {} (expected {}), {members} members checked; problems: {}",
            pasted.density,
            pasted_density(k, s),
            if problems.is_empty() { "none".into() } else { problems.join("; ") }
        ),
    );
}

#[test]
fn criterion_09_counterexample() {
    let t = Instant::now();
    let params = CounterexampleParams::desk();
    let (mut triangles, mut sparse, mut recombine_bad, mut recount_bad, mut samples) = (0u64, 0, 0, 0, 0);
    for s in 0..20 {
        let tf = build_triangle_free(&params, s).unwrap();
        triangles += tf.base.triangle_count() + tf.blowup.triangle_count();
        sparse += tf.base.densities().iter().filter(|d| **d < params.p).count();
        let r = verify_counterexample(&tf.base, &tf.blowup, &params, &CheckOptions::default(), 50, s).unwrap();
        samples += r.samples.len();
        recount_bad += r.samples.iter().filter(|x| x.recombined != int(x.direct)).count();
        let mut rng = seed::rng_for(s, &["acceptance", "convex"]);
        for _ in 0..50 {
            let n = rng.random_range(1..=12);
            let den = rng.random_range(1..=12i64);
            let mut x: Vec<Rational> = (0..n).map(|_| ratio(rng.random_range(0..=den), den)).collect();
            // Round the last coordinate so that the sum is an integer.
            let frac = x.iter().sum::<Rational>().fract();
            let last = &x[n - 1] - frac;
            if last < int(0) {
                continue;
            }
            x[n - 1] = last;
            let terms = convex_decompose(&x).unwrap();
            let weights: Rational = terms.iter().map(|(w, _)| w.clone()).sum();
            if recombine(&terms, n) != x || weights != int(1) || terms.iter().any(|(w, _)| *w < int(0)) {
                recombine_bad += 1;
            }
        }
    }
    report(
        9,
        triangles == 0 && sparse == 0 && recombine_bad == 0 && recount_bad == 0 && samples == 20 * 150,
        t.elapsed(),
        120,
        format!(
            "20 seeds: triangles {triangles}, pairs below p {sparse}, convex failures {recombine_bad}, recount mismatches {recount_bad}/{samples}"
        ),
    );
}

fn random_kgraph(sizes: &[usize], pct: u32, s: u64) -> KPartiteKGraph {
    let mut rng = seed::rng_for(s, &["acceptance", "rs"]);
    let all = KPartiteKGraph::from_codes(sizes, (0..sizes.iter().product::<usize>() as u64).collect()).unwrap();
    let tuples: Vec<Vec<usize>> = all.tuples().filter(|_| rng.random_range(0..100) < pct).collect();
    KPartiteKGraph::from_tuples(sizes, tuples).unwrap()
}

#[test]
fn criterion_10_rs_suite() {
    let t = Instant::now();
    let mut problems = Vec::new();

    let h = random_kgraph(&[2, 2], 50, 0);
    for empty in [Polyad::pair(vec![0, 1], vec![]).unwrap(), Polyad::pair(vec![], vec![2]).unwrap()] {
        if relative_density(&h, &empty).unwrap() != int(0) {
            problems.push("empty polyad density is not 0".to_string());
        }
    }
    let h3 = random_kgraph(&[2, 2, 2], 60, 1);
    let no_faces = Polyad::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]], vec![vec![], vec![], vec![]]).unwrap();
    if relative_density(&h3, &no_faces).unwrap() != int(0) {
        problems.push("faceless 3-polyad density is not 0".into());
    }

    let mut complexes = 0;
    for sizes in [vec![2, 3], vec![3, 3, 3], vec![2, 3, 4], vec![2, 2, 2, 3]] {
        let c = RankedHypergraph::complete(&sizes).unwrap();
        let r = dense_counting_check(&c, &ratio(1, 10), &vec![int(1); sizes.len() - 2]).unwrap();
        complexes += 1;
        if r.slack != int(0) || r.count as usize != sizes.iter().product::<usize>() || r.extension.exceptional != 0 {
            problems.push(format!("complete complex {sizes:?}: {r:?}"));
        }
    }

    let eps = [ratio(1, 20), ratio(1, 10), ratio(1, 5), ratio(1, 4), ratio(1, 3), ratio(1, 2), int(1)];
    let mut sweeps = 0;
    for s in 0..12 {
        let (sizes, arity) = if s % 2 == 0 { (vec![6, 6], 1) } else { (vec![4, 4, 4], 2) };
        let h = random_kgraph(&sizes, 30 + 5 * s as u32, s + 10);
        let n: usize = sizes.iter().sum();
        let vp = VertexPartition::blocks(n, 2 * sizes.len()).unwrap();
        let kp = if arity == 1 { KPartition::trivial(vp) } else { KPartition::complete(vp, arity).unwrap() };
        let masses: Vec<u128> =
            eps.iter().map(|e| is_eps_regular_partition(&h, &kp, e, &CheckOptions::default()).unwrap().mass).collect();
        sweeps += 1;
        if masses.windows(2).any(|w| w[1] > w[0]) {
            problems.push(format!("seed {s}: mass not monotone {masses:?}"));
        }
    }
    report(
        10,
        problems.is_empty(),
        t.elapsed(),
        60,
        format!(
            "zero-denominator cases 3, complete complexes {complexes}, eps sweeps {sweeps}; problems: {}",
            if problems.is_empty() { "none".into() } else { problems.join("; ") }
        ),
    );
}
