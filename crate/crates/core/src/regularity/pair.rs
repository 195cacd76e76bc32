use std::cmp::Ordering;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::exact::{int, Rational, Real};
use crate::graphs::BipartiteGraph;
use crate::seed;

pub const DEFAULT_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Randomized witness search; can only ever report irregularity.
    Sampled { seed: u64, restarts: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub mode: Mode,
    /// Largest number of subsets exact mode may enumerate.
    pub cap: u128,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { mode: Mode::Exact, cap: DEFAULT_CAP }
    }
}

impl CheckOptions {
    pub fn exact(cap: u128) -> Self {
        CheckOptions { mode: Mode::Exact, cap }
    }

    pub fn sampled(seed: u64, restarts: u32) -> Self {
        CheckOptions { mode: Mode::Sampled { seed, restarts }, cap: DEFAULT_CAP }
    }
}

/// Subsets `A' ⊆ A`, `B' ⊆ B` with `d(A',B') < d(A,B)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// `d(A',B') / d(A,B)`.
    pub ratio: Rational,
}

impl DeltaWitness {
    /// Recomputes sizes and ratio from `g`.
    pub fn verify(&self, g: &BipartiteGraph, delta: &Rational) -> bool {
        let (n, m) = (g.left(), g.right());
        let a = threshold_size(&Real::rational(delta.clone()), n);
        let b = threshold_size(&Real::rational(delta.clone()), m);
        let distinct = |s: &[usize], bound| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len() == s.len() && s.iter().all(|&x| x < bound)
        };
        if self.a.len() < a || self.b.len() < b || !distinct(&self.a, n) || !distinct(&self.b, m) {
            return false;
        }
        let e = g.edge_count();
        let sub = g.edges_between(&self.a, &self.b).unwrap();
        e > 0
            && self.ratio == pair_ratio(sub, self.a.len(), self.b.len(), e, n, m)
            && 2 * (sub as u128) * ((n * m) as u128) < (e as u128) * ((self.a.len() * self.b.len()) as u128)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PairVerdict {
    Regular,
    Irregular(DeltaWitness),
    /// Sampled mode found no witness; nothing is claimed.
    NoWitnessFound,
}

impl PairVerdict {
    pub fn is_regular(&self) -> bool {
        matches!(self, PairVerdict::Regular)
    }

    pub fn witness(&self) -> Option<&DeltaWitness> {
        match self {
            PairVerdict::Irregular(w) => Some(w),
            _ => None,
        }
    }
}

/// `max(1, ⌈x·n⌉)`: the smallest admissible subset size.
pub fn threshold_size(x: &Real, n: usize) -> usize {
    (x.ceil_mul(n as u64) as usize).max(1)
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn pair_ratio(sub: u64, a: usize, b: usize, e: u64, n: usize, m: usize) -> Rational {
    Rational::new(BigInt::from(sub) * BigInt::from(n * m), BigInt::from(e) * BigInt::from(a * b))
}

/// Search space used by the exact checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub a_size: usize,
    pub b_size: usize,
    /// True when the left side is the one enumerated.
    pub enumerate_left: bool,
    /// Number of subsets enumerated.
    pub subsets: u128,
    /// No admissible pair exists (a threshold exceeds its side).
    pub empty: bool,
}

/// Only subsets of the exact threshold sizes are enumerated, and only on the
/// cheaper side: for fixed `A'` the sparsest `B'` of a given size is formed
/// by the lowest counts into `A'`.
pub fn minimal_subset_reduction(g: &BipartiteGraph, delta: &Real) -> SearchSpace {
    let (n, m) = (g.left(), g.right());
    let a = threshold_size(delta, n);
    let b = threshold_size(delta, m);
    let empty = a > n || b > m;
    let ca = binomial(n, a);
    let cb = binomial(m, b);
    let enumerate_left = ca <= cb;
    SearchSpace { a_size: a, b_size: b, enumerate_left, subsets: if empty { 0 } else { ca.min(cb) }, empty }
}

/// Extreme values of `e(A',B')` over `|A'| = a`, `|B'| = b`.
#[derive(Clone, Debug)]
pub(crate) struct Extremes {
    pub min: u64,
    pub min_sets: (Vec<usize>, Vec<usize>),
    pub max: u64,
    pub max_sets: (Vec<usize>, Vec<usize>),
}

fn smallest_sum(counts: &[u32], b: usize, hist: &mut [u32], largest: bool) -> u64 {
    hist.iter_mut().for_each(|h| *h = 0);
    for &c in counts {
        hist[c as usize] += 1;
    }
    let mut need = b as u64;
    let mut sum = 0u64;
    let order: Box<dyn Iterator<Item = usize>> =
        if largest { Box::new((0..hist.len()).rev()) } else { Box::new(0..hist.len()) };
    for c in order {
        let take = need.min(hist[c] as u64);
        sum += take * c as u64;
        need -= take;
        if need == 0 {
            break;
        }
    }
    sum
}

fn pick(counts: &[u32], b: usize, largest: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..counts.len()).collect();
    idx.sort_by(|&x, &y| {
        let o = counts[x].cmp(&counts[y]);
        (if largest { o.reverse() } else { o }).then(x.cmp(&y))
    });
    let mut out = idx[..b].to_vec();
    out.sort_unstable();
    out
}

/// Enumerates every `a`-subset of the rows of `g` in lexicographic order.
pub(crate) fn extremes(g: &BipartiteGraph, a: usize, b: usize) -> Extremes {
    let n = g.left();
    let m = g.right();
    let mut counts = vec![0u32; m];
    let mut hist = vec![0u32; a + 1];
    let mut cur: Vec<usize> = (0..a).collect();
    for &u in &cur {
        for v in g.neighbors_iter(u) {
            counts[v] += 1;
        }
    }
    let mut best = Extremes { min: u64::MAX, min_sets: (vec![], vec![]), max: 0, max_sets: (vec![], vec![]) };
    loop {
        let lo = smallest_sum(&counts, b, &mut hist, false);
        if lo < best.min {
            best.min = lo;
            best.min_sets = (cur.clone(), pick(&counts, b, false));
        }
        let hi = smallest_sum(&counts, b, &mut hist, true);
        if hi > best.max || best.max_sets.0.is_empty() {
            best.max = hi;
            best.max_sets = (cur.clone(), pick(&counts, b, true));
        }
        // Lexicographic successor with incremental count updates.
        let mut i = a;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if cur[i] < n - a + i {
                for &u in &cur[i..] {
                    for v in g.neighbors_iter(u) {
                        counts[v] -= 1;
                    }
                }
                cur[i] += 1;
                for j in i + 1..a {
                    cur[j] = cur[j - 1] + 1;
                }
                for &u in &cur[i..] {
                    for v in g.neighbors_iter(u) {
                        counts[v] += 1;
                    }
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    best
}

/// Extremes over the admissible pair sizes, enumerating the cheaper side.
/// Returned sets are always `(left, right)`.
pub(crate) fn exact_extremes(g: &BipartiteGraph, space: &SearchSpace, cap: u128) -> Result<Extremes> {
    if space.subsets > cap {
        return Err(Error::CapExceeded { needed: space.subsets, cap });
    }
    if space.enumerate_left {
        Ok(extremes(g, space.a_size, space.b_size))
    } else {
        let mut x = extremes(&g.transpose(), space.b_size, space.a_size);
        x.min_sets = (x.min_sets.1, x.min_sets.0);
        x.max_sets = (x.max_sets.1, x.max_sets.0);
        Ok(x)
    }
}

/// Sparsest pair at the threshold sizes `⌈δ|A|⌉ × ⌈δ|B|⌉`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsestPair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub edges: u64,
    /// Exact mode: no sparser pair of these sizes exists.
    pub exhaustive: bool,
}

/// Fewest edges over `A' × B'` at the threshold sizes; `None` when a
/// threshold exceeds its side. Among larger subsets the minimum density is
/// never lower.
pub fn sparsest_pair(g: &BipartiteGraph, delta: &Rational, opts: &CheckOptions) -> Result<Option<SparsestPair>> {
    let space = minimal_subset_reduction(g, &Real::rational(delta.clone()));
    if space.empty {
        return Ok(None);
    }
    Ok(Some(match opts.mode {
        Mode::Exact => {
            let x = exact_extremes(g, &space, opts.cap)?;
            SparsestPair { a: x.min_sets.0, b: x.min_sets.1, edges: x.min, exhaustive: true }
        }
        Mode::Sampled { seed, restarts } => {
            let (edges, (a, b)) = descend(g, space.a_size, space.b_size, seed, restarts);
            SparsestPair { a, b, edges, exhaustive: false }
        }
    }))
}

/// `⟨δ⟩`-regularity of a bipartite pair. A pair of density zero is regular.
///
/// Exact mode is a decision procedure and errors when the enumeration would
/// exceed the cap. Sampled mode returns a witness or [`PairVerdict::NoWitnessFound`].
pub fn is_delta_regular_pair(g: &BipartiteGraph, delta: &Rational, opts: &CheckOptions) -> Result<PairVerdict> {
    is_delta_regular_pair_real(g, &Real::rational(delta.clone()), opts)
}

/// [`is_delta_regular_pair`] for an algebraic `δ` such as `2√x`.
pub fn is_delta_regular_pair_real(g: &BipartiteGraph, delta: &Real, opts: &CheckOptions) -> Result<PairVerdict> {
    if *delta.coeff() < int(0) {
        return Err(Error::Precondition("delta must be nonnegative".into()));
    }
    let e = g.edge_count();
    let space = minimal_subset_reduction(g, delta);
    if e == 0 || space.empty {
        return Ok(PairVerdict::Regular);
    }
    let (n, m) = (g.left(), g.right());
    let (sub, sets) = match opts.mode {
        Mode::Exact => {
            let x = exact_extremes(g, &space, opts.cap)?;
            (x.min, x.min_sets)
        }
        Mode::Sampled { seed, restarts } => descend(g, space.a_size, space.b_size, seed, restarts),
    };
    let (a, b) = (space.a_size, space.b_size);
    if 2 * sub as u128 * (n * m) as u128 >= e as u128 * (a * b) as u128 {
        return Ok(match opts.mode {
            Mode::Exact => PairVerdict::Regular,
            Mode::Sampled { .. } => PairVerdict::NoWitnessFound,
        });
    }
    Ok(PairVerdict::Irregular(DeltaWitness { ratio: pair_ratio(sub, a, b, e, n, m), a: sets.0, b: sets.1 }))
}

/// Randomized local descent on `A'` (with the optimal `B'` for each `A'`).
/// Returns the sparsest pair found.
fn descend(g: &BipartiteGraph, a: usize, b: usize, seed: u64, restarts: u32) -> (u64, (Vec<usize>, Vec<usize>)) {
    let n = g.left();
    let m = g.right();
    let mut rng = seed::rng(seed);
    let mut hist = vec![0u32; a + 1];
    let eval = |set: &[usize], hist: &mut Vec<u32>| {
        let mut counts = vec![0u32; m];
        for &u in set {
            for v in g.neighbors_iter(u) {
                counts[v] += 1;
            }
        }
        (smallest_sum(&counts, b, hist, false), counts)
    };
    let mut best: Option<(u64, Vec<usize>, Vec<u32>)> = None;
    for r in 0..restarts.max(1) {
        let mut set: Vec<usize> = if r == 0 {
            // Lowest-degree start.
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by_key(|&u| (g.degree(u), u));
            idx.truncate(a);
            idx
        } else {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            idx.truncate(a);
            idx
        };
        let (mut val, mut counts) = eval(&set, &mut hist);
        let mut improved = true;
        while improved {
            improved = false;
            let inside: std::collections::HashSet<usize> = set.iter().copied().collect();
            let outside: Vec<usize> = (0..n).filter(|u| !inside.contains(u)).collect();
            if outside.is_empty() {
                break;
            }
            let tries = (a * outside.len()).min(4 * n + 16);
            for _ in 0..tries {
                let i = rng.random_range(0..set.len());
                let w = outside[rng.random_range(0..outside.len())];
                let mut cand = set.clone();
                cand[i] = w;
                let (v2, c2) = eval(&cand, &mut hist);
                if v2 < val {
                    set = cand;
                    val = v2;
                    counts = c2;
                    improved = true;
                    break;
                }
            }
        }
        if best.as_ref().is_none_or(|x| val < x.0) {
            set.sort_unstable();
            best = Some((val, set, counts));
        }
    }
    let (val, set, counts) = best.unwrap();
    let bset = pick(&counts, b, false);
    (val, (set, bset))
}

/// Worst subset pair found by the ε-check.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub density: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EpsVerdict {
    Regular,
    Irregular(EpsWitness),
    NoWitnessFound,
}

impl EpsVerdict {
    pub fn is_regular(&self) -> bool {
        matches!(self, EpsVerdict::Regular)
    }
}

/// `|d(S,T) - p| <= ε·p` for all `|S| >= ε|A|`, `|T| >= ε|B|`, with
/// `p = d(G)`. Both extremes are attained at the threshold sizes.
pub fn is_eps_regular_graph(g: &BipartiteGraph, eps: &Real, opts: &CheckOptions) -> Result<EpsVerdict> {
    let e = g.edge_count();
    let space = minimal_subset_reduction(g, eps);
    if e == 0 || space.empty {
        return Ok(EpsVerdict::Regular);
    }
    let (n, m) = (g.left(), g.right());
    let (a, b) = (space.a_size, space.b_size);
    let deviation_ok = |sub: u64| -> bool {
        // |sub·n·m − e·a·b| / (e·a·b) <= ε
        let lhs = BigInt::from(sub) * BigInt::from(n * m);
        let base = BigInt::from(e) * BigInt::from(a * b);
        let dev = Rational::new((lhs - &base).magnitude().clone().into(), base);
        eps.cmp_rational(&dev) != Ordering::Less
    };
    let witness = |sub: u64, sets: (Vec<usize>, Vec<usize>)| EpsWitness {
        density: crate::graphs::density_of(sub, (a * b) as u64),
        a: sets.0,
        b: sets.1,
    };
    match opts.mode {
        Mode::Exact => {
            let x = exact_extremes(g, &space, opts.cap)?;
            if !deviation_ok(x.min) {
                return Ok(EpsVerdict::Irregular(witness(x.min, x.min_sets)));
            }
            if !deviation_ok(x.max) {
                return Ok(EpsVerdict::Irregular(witness(x.max, x.max_sets)));
            }
            Ok(EpsVerdict::Regular)
        }
        Mode::Sampled { seed, restarts } => {
            let (lo, sets) = descend(g, a, b, seed, restarts);
            if !deviation_ok(lo) {
                return Ok(EpsVerdict::Irregular(witness(lo, sets)));
            }
            let gc = g.complement();
            let (lo_c, sets) = descend(&gc, a, b, seed::derive(seed, &["max"]), restarts);
            let hi = (a * b) as u64 - lo_c;
            if !deviation_ok(hi) {
                return Ok(EpsVerdict::Irregular(witness(hi, sets)));
            }
            Ok(EpsVerdict::NoWitnessFound)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn complete_is_regular() {
        let g = BipartiteGraph::complete(6, 7);
        for d in [ratio(1, 4), ratio(1, 2), int(1)] {
            assert!(is_delta_regular_pair(&g, &d, &CheckOptions::default()).unwrap().is_regular());
        }
        assert!(is_eps_regular_graph(&g, &Real::rational(ratio(1, 10)), &CheckOptions::default()).unwrap().is_regular());
    }

    #[test]
    fn zero_block_witness() {
        // 8x8 complete except the 2x2 block on {0,1}x{0,1}.
        let mut g = BipartiteGraph::complete(8, 8);
        for u in 0..2 {
            for v in 0..2 {
                g.remove_edge(u, v);
            }
        }
        let delta = ratio(1, 4);
        match is_delta_regular_pair(&g, &delta, &CheckOptions::default()).unwrap() {
            PairVerdict::Irregular(w) => {
                assert_eq!(w.ratio, int(0));
                assert_eq!(w.a, vec![0, 1]);
                assert_eq!(w.b, vec![0, 1]);
                assert!(w.verify(&g, &delta));
            }
            v => panic!("expected a witness, got {v:?}"),
        }
        let s = is_delta_regular_pair(&g, &delta, &CheckOptions::sampled(3, 4)).unwrap();
        assert!(s.witness().unwrap().verify(&g, &delta));
    }

    #[test]
    fn empty_graph_vacuous() {
        let g = BipartiteGraph::empty(5, 5);
        assert!(is_delta_regular_pair(&g, &ratio(1, 3), &CheckOptions::default()).unwrap().is_regular());
    }

    #[test]
    fn cap_is_enforced() {
        let g = BipartiteGraph::complete(40, 40);
        let opts = CheckOptions::exact(1000);
        assert!(matches!(
            is_delta_regular_pair(&g, &ratio(1, 2), &opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn half_split_is_eps_irregular() {
        // Left half complete to the right side, other half empty.
        let mut g = BipartiteGraph::empty(8, 8);
        for u in 0..4 {
            for v in 0..8 {
                g.add_edge(u, v);
            }
        }
        let v = is_eps_regular_graph(&g, &Real::rational(ratio(1, 4)), &CheckOptions::default()).unwrap();
        assert!(!v.is_regular());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(64, 32), 1832624140942590534);
    }
}
