use rand::seq::index::sample;

use crate::counterexample::{convex_decompose, CounterexampleParams, Tripartite, PAIRS};
use crate::error::Result;
use crate::exact::{int, Rational};
use crate::graphs::BipartiteGraph;
use crate::regularity::{is_delta_regular_pair, sparsest_pair, CheckOptions, PairVerdict, SparsestPair};
use crate::seed;

/// Result of the strengthened lower-density check on one class pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck {
    pub classes: (usize, usize),
    pub density: Rational,
    pub density_ok: bool,
    /// Sparsest threshold-size pair; `None` when `⌈δk⌉ > k`.
    pub sparsest: Option<SparsestPair>,
    /// `d(S,T) / d(V_a,V_b)` at the sparsest pair.
    pub worst_ratio: Option<Rational>,
    /// `worst_ratio >= 1 - δ`, or `None` when sampled mode found no violation.
    pub strong: Option<bool>,
    pub delta_regular: PairVerdict,
}

/// One random `(S, T)` in the blowup and its recount through the convex
/// decomposition of the block profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupSample {
    pub pair: usize,
    pub direct: u64,
    pub recombined: Rational,
    pub terms: (usize, usize),
    /// `e(S,T)·|V|² >= (1-δ)·e·|S||T|`.
    pub bound: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleReport {
    pub base_triangle_free: bool,
    pub blowup_triangle_free: bool,
    pub pairs: Vec<PairCheck>,
    pub samples: Vec<BlowupSample>,
    pub recount_exact: bool,
    pub samples_within_bound: bool,
}

impl CounterexampleReport {
    /// Triangle-free, dense, recount exact; the strengthened property is
    /// reported separately.
    pub fn structural(&self) -> bool {
        self.base_triangle_free && self.blowup_triangle_free && self.recount_exact && self.pairs.iter().all(|p| p.density_ok)
    }

    pub fn strong(&self) -> Option<bool> {
        let mut out = Some(true);
        for p in &self.pairs {
            match p.strong {
                Some(false) => return Some(false),
                None => out = None,
                _ => {}
            }
        }
        out
    }
}

fn check_pair(g: &BipartiteGraph, classes: (usize, usize), params: &CounterexampleParams, opts: &CheckOptions) -> Result<PairCheck> {
    let density = g.density();
    let sparsest = sparsest_pair(g, &params.delta, opts)?;
    let (worst_ratio, strong) = match &sparsest {
        None => (None, Some(true)),
        Some(_) if g.edge_count() == 0 => (None, Some(true)),
        Some(s) => {
            let r = int(s.edges) / int((s.a.len() * s.b.len()) as u64) / &density;
            let ok = r >= int(1) - &params.delta;
            (Some(r), if ok && !s.exhaustive { None } else { Some(ok) })
        }
    };
    Ok(PairCheck {
        classes,
        density_ok: density >= params.p,
        density,
        sparsest,
        worst_ratio,
        strong,
        delta_regular: is_delta_regular_pair(g, &params.delta, opts)?,
    })
}

/// `|S ∩ block_i| / m` for each base vertex `i`.
fn profile(set: &[usize], k: usize, m: usize) -> Vec<Rational> {
    let mut c = vec![0u64; k];
    for &v in set {
        c[v / m] += 1;
    }
    c.into_iter().map(|x| int(x) / int(m as u64)).collect()
}

fn recount(base: &BipartiteGraph, s: &[usize], t: &[usize], m: usize) -> Result<(Rational, (usize, usize))> {
    let k = base.left();
    let ds = convex_decompose(&profile(s, k, m))?;
    let dt = convex_decompose(&profile(t, k, m))?;
    let mut total = int(0);
    for (a, ys) in &ds {
        let si: Vec<usize> = (0..k).filter(|&i| ys[i]).collect();
        for (b, yt) in &dt {
            let tj: Vec<usize> = (0..k).filter(|&j| yt[j]).collect();
            total += a * b * int(base.edges_between(&si, &tj)?);
        }
    }
    Ok((total * int((m * m) as u64), (ds.len(), dt.len())))
}

/// Full audit of a construction: triangle-freeness, densities, the
/// strengthened property on the base graph, and `samples` random
/// `m⌈δk⌉`-sets per pair in the blowup recounted through convex combinations.
pub fn verify_counterexample(
    base: &Tripartite,
    blowup: &Tripartite,
    params: &CounterexampleParams,
    opts: &CheckOptions,
    samples: usize,
    master: u64,
) -> Result<CounterexampleReport> {
    let pairs = (0..3).map(|i| check_pair(&base.pairs[i], PAIRS[i], params, opts)).collect::<Result<Vec<_>>>()?;
    let out = sample_blowup(base, blowup, params, samples, master)?;
    Ok(CounterexampleReport {
        base_triangle_free: base.triangle_count() == 0,
        blowup_triangle_free: blowup.triangle_count() == 0,
        pairs,
        recount_exact: out.iter().all(|s| s.recombined == int(s.direct)),
        samples_within_bound: out.iter().all(|s| s.bound),
        samples: out,
    })
}

fn sample_blowup(
    base: &Tripartite,
    blowup: &Tripartite,
    params: &CounterexampleParams,
    samples: usize,
    master: u64,
) -> Result<Vec<BlowupSample>> {
    let m = params.m;
    let n = blowup.n;
    let size = (m * params.base_threshold()).min(n);
    let mut out = Vec::new();
    for (i, g) in blowup.pairs.iter().enumerate() {
        let mut rng = seed::rng_for(master, &["counterexample", "blowup", &i.to_string()]);
        let e = g.edge_count();
        for _ in 0..samples {
            let s = sample(&mut rng, n, size).into_vec();
            let tt = sample(&mut rng, n, size).into_vec();
            let direct = g.edges_between(&s, &tt)?;
            let (recombined, terms) = recount(&base.pairs[i], &s, &tt, m)?;
            let lhs = int(direct) * int((n * n) as u64);
            let rhs = (int(1) - &params.delta) * int(e) * int((size * size) as u64);
            out.push(BlowupSample { pair: i, direct, recombined, terms, bound: lhs >= rhs });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::build_triangle_free;

    #[test]
    fn desk_recount_is_exact() {
        let params = CounterexampleParams::desk();
        let t = build_triangle_free(&params, 5).unwrap();
        let r = verify_counterexample(&t.base, &t.blowup, &params, &CheckOptions::default(), 8, 5).unwrap();
        assert!(r.structural(), "{r:?}");
        assert_eq!(r.samples.len(), 24);
    }

    #[test]
    fn complete_pairs_satisfy_the_strong_property() {
        let params = CounterexampleParams { k: 4, ..CounterexampleParams::desk() };
        let full = BipartiteGraph::complete(4, 4);
        let r = check_pair(&full, (0, 1), &params, &CheckOptions::default()).unwrap();
        assert_eq!(r.strong, Some(true));
        assert_eq!(r.worst_ratio, Some(int(1)));
    }

    #[test]
    fn recount_matches_on_a_hand_example() {
        let base = BipartiteGraph::from_edges(2, 2, [(0, 0), (1, 1)]).unwrap();
        let g = base.blowup(2).unwrap();
        let (s, t) = (vec![0, 2], vec![0, 1]);
        let (r, _) = recount(&base, &s, &t, 2).unwrap();
        assert_eq!(r, int(g.edges_between(&s, &t).unwrap()));
    }
}
