use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{invalid, Result};
use crate::exact::{int, Rational};
use crate::graphs::{density_of, VertexClassSet};
use crate::partitions::{combinations, Polyad};
use crate::regularity::{binomial, CheckOptions};
use crate::rs_regularity::density::eps_d_on;
use crate::rs_regularity::lattice::{Lattice, SubPolyad};
use crate::rs_regularity::ToleranceFn;
use crate::seed;

/// A k-partite hypergraph of rank `k-1` whose rank-`r` edges all span cliques
/// of rank `r-1`. Edges are sorted global vertex sets; rank 1 is every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedHypergraph {
    k: usize,
    classes: VertexClassSet,
    /// `layers[r-2]` holds the rank-`r` edges.
    layers: Vec<BTreeSet<Vec<usize>>>,
}

fn faces(e: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..e.len()).map(move |i| e.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x).collect())
}

/// Every crossing r-set over `classes`, class-sorted.
fn crossing(classes: &VertexClassSet, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for combo in combinations(classes.len(), r) {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for &c in &combo {
            acc = acc.into_iter().flat_map(|e| classes.range(c).map(move |v| [e.clone(), vec![v]].concat())).collect();
        }
        out.extend(acc);
    }
    out
}

impl RankedHypergraph {
    /// `layers[r-2]` lists rank-`r` edges for `r = 2..k-1`, as global vertices.
    pub fn new(sizes: &[usize], layers: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let classes = VertexClassSet::from_sizes(sizes)?;
        let k = sizes.len();
        if k < 2 || layers.len() + 2 != k {
            return invalid(format!("a {k}-complex needs ranks 2..{} (got {} layers)", k.saturating_sub(1), layers.len()));
        }
        let mut out: Vec<BTreeSet<Vec<usize>>> = Vec::with_capacity(layers.len());
        for (j, edges) in layers.into_iter().enumerate() {
            let r = j + 2;
            let mut set = BTreeSet::new();
            for mut e in edges {
                e.sort_unstable();
                if e.len() != r {
                    return invalid(format!("rank-{r} edge {e:?} has the wrong size"));
                }
                let cls: Vec<usize> = e.iter().map(|&v| classes.locate(v).map(|x| x.0)).collect::<Option<_>>().ok_or_else(
                    || crate::Error::Invalid(format!("edge {e:?} leaves the vertex set")),
                )?;
                if cls.windows(2).any(|w| w[0] == w[1]) {
                    return invalid(format!("edge {e:?} is not crossing"));
                }
                if r > 2 {
                    if let Some(f) = faces(&e).find(|f| !out[j - 1].contains(f)) {
                        return invalid(format!("rank-{r} edge {e:?} has face {f:?} outside rank {}", r - 1));
                    }
                }
                set.insert(e);
            }
            out.push(set);
        }
        Ok(RankedHypergraph { k, classes, layers: out })
    }

    /// Every rank holds every crossing set.
    pub fn complete(sizes: &[usize]) -> Result<Self> {
        let classes = VertexClassSet::from_sizes(sizes)?;
        let layers = (2..sizes.len()).map(|r| crossing(&classes, r)).collect();
        Self::new(sizes, layers)
    }

    /// Rank `r` keeps each crossing r-set whose faces are present with
    /// probability `d[r-2]`, independently.
    pub fn random(sizes: &[usize], d: &[Rational], master: u64) -> Result<Self> {
        use rand::Rng as _;
        let classes = VertexClassSet::from_sizes(sizes)?;
        if d.len() + 2 != sizes.len() {
            return invalid("need one density per rank 2..k-1");
        }
        let mut layers: Vec<Vec<Vec<usize>>> = Vec::new();
        for (j, dj) in d.iter().enumerate() {
            let r = j + 2;
            let (num, den) = (dj.numer(), dj.denom());
            let (num, den): (u32, u32) = match (u32::try_from(num), u32::try_from(den)) {
                (Ok(n), Ok(m)) if n <= m => (n, m),
                _ => return invalid(format!("density {dj} must be in [0,1] with a 32-bit denominator")),
            };
            let mut rng = seed::rng_for(master, &["complex", &r.to_string()]);
            let below: BTreeSet<&Vec<usize>> = if r > 2 { layers[j - 1].iter().collect() } else { BTreeSet::new() };
            let mut keep = Vec::new();
            for e in crossing(&classes, r) {
                if r > 2 && faces(&e).any(|f| !below.contains(&f)) {
                    continue;
                }
                if rng.random_ratio(num, den) {
                    keep.push(e);
                }
            }
            layers.push(keep);
        }
        Self::new(sizes, layers)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn classes(&self) -> &VertexClassSet {
        &self.classes
    }

    pub fn rank(&self, r: usize) -> Vec<Vec<usize>> {
        if r == 1 {
            (0..self.classes.total()).map(|v| vec![v]).collect()
        } else {
            self.layers[r - 2].iter().cloned().collect()
        }
    }

    fn has(&self, e: &[usize]) -> bool {
        match e.len() {
            1 => true,
            r => self.layers[r - 2].contains(e),
        }
    }

    fn class_of(&self, v: usize) -> usize {
        self.classes.locate(v).unwrap().0
    }

    /// Rank-`r` edges over exactly the classes `cls`.
    fn on_classes(&self, r: usize, cls: &[usize]) -> Vec<Vec<usize>> {
        if r == 1 {
            return cls.iter().flat_map(|&c| self.classes.range(c)).map(|v| vec![v]).collect();
        }
        self.layers[r - 2].iter().filter(|e| e.iter().map(|&v| self.class_of(v)).eq(cls.iter().copied())).cloned().collect()
    }

    /// `𝒦(P) = 𝒦(P^(k-1))` as class-ordered k-tuples.
    pub fn cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut t = Vec::with_capacity(self.k);
        self.extend(&mut t, &mut out);
        out
    }

    fn extend(&self, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = t.len();
        if j == self.k {
            out.push(t.clone());
            return;
        }
        for v in self.classes.range(j) {
            t.push(v);
            // Every new subset of size <= k-1 through v must be present.
            let ok = (1..=j.min(self.k - 2)).all(|m| {
                combinations(j, m).all(|c| {
                    let mut e: Vec<usize> = c.iter().map(|&i| t[i]).collect();
                    e.push(v);
                    self.has(&e)
                })
            });
            if ok {
                self.extend(t, out);
            }
            t.pop();
        }
    }

    /// `P[V_1, …, V_(k-1), V_k']` for local indices `keep` of the last class,
    /// renumbered by rank.
    pub fn slice_last(&self, keep: &[usize]) -> Result<Self> {
        let last = self.k - 1;
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.iter().any(|&v| v >= self.classes.size(last)) {
            return invalid("slice leaves the last class");
        }
        let off = self.classes.offset(last);
        let map = |v: usize| -> Option<usize> {
            if v < off {
                Some(v)
            } else {
                keep.binary_search(&(v - off)).ok().map(|i| off + i)
            }
        };
        let mut sizes = self.classes.sizes();
        sizes[last] = keep.len();
        let layers = self
            .layers
            .iter()
            .map(|l| l.iter().filter_map(|e| e.iter().map(|&v| map(v)).collect::<Option<Vec<_>>>()).collect())
            .collect();
        Self::new(&sizes, layers)
    }

    /// The polyad `P^(r-1)[V_I]` and the target `P^(r)[V_I]`.
    fn layer_polyad(&self, r: usize, cls: &[usize]) -> Result<(Polyad, BTreeSet<Vec<usize>>)> {
        let vs: Vec<Vec<usize>> = cls.iter().map(|&c| self.classes.range(c).collect()).collect();
        let parts = (0..r)
            .map(|i| {
                let rest: Vec<usize> = cls.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &c)| c).collect();
                self.on_classes(r - 1, &rest)
            })
            .collect();
        Ok((Polyad::new(vs, parts)?, self.on_classes(r, cls).into_iter().collect()))
    }
}

/// `F_{k,γ}(x) = (γ³/12)(x/2)^(2^(k+1))`.
pub fn counting_tolerance(k: u32, gamma: &Rational, x: &Rational) -> Result<Rational> {
    if k > 12 {
        return invalid(format!("F_(k,γ) exponent 2^{} is out of range", k + 1));
    }
    Ok(gamma * gamma * gamma / int(12) * num_traits::pow(x / int(2), 1usize << (k + 1)))
}

/// `∏_{i=2}^{k-1} d_i^{binom(m, i - s)}`, with `d[i-2] = d_i`.
fn density_product(d: &[Rational], m: usize, s: usize) -> Rational {
    d.iter().enumerate().fold(Rational::one(), |acc, (j, di)| {
        let i = j + 2;
        let e = if i < s { 0 } else { binomial(m, i - s) };
        acc * num_traits::pow(di.clone(), e as usize)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    /// `|P_k|`: rank-`(k-1)` edges omitting the last class.
    pub edges: u64,
    /// `∏ d_i^binom(k-1,i-1) · n_k`.
    pub predicted: Rational,
    /// Edges whose `|𝒦(P,e)|` leaves the `(1 ± γ)` band.
    pub exceptional: u64,
    pub fraction: Rational,
    /// `exceptional <= γ|P_k|`.
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingReport {
    pub count: u64,
    /// `∏ d_i^binom(k,i) · ∏ n_i`.
    pub predicted: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub within: bool,
    /// `count - predicted`.
    pub slack: Rational,
    pub extension: ExtensionReport,
}

/// Exact `|𝒦(P)|` and per-edge extension counts against the dense counting
/// prediction. No size threshold is assumed; the slack is reported.
pub fn dense_counting_check(p: &RankedHypergraph, gamma: &Rational, d: &[Rational]) -> Result<CountingReport> {
    let k = p.k();
    if d.len() + 2 != k {
        return invalid(format!("need {} densities d_2..d_(k-1)", k - 2));
    }
    let cliques = p.cliques();
    let count = cliques.len() as u64;
    let nprod: u128 = p.classes.sizes().iter().map(|&n| n as u128).product();
    let predicted = density_product(d, k, 0) * Rational::from_integer(BigInt::from(nprod));
    let lower = (int(1) - gamma) * &predicted;
    let upper = (int(1) + gamma) * &predicted;
    let c = int(count);
    let within = c >= lower && c <= upper;
    let slack = &c - &predicted;

    let last = k - 1;
    let front: Vec<usize> = (0..last).collect();
    let pk = p.on_classes(k - 1, &front);
    let mut per: std::collections::HashMap<&[usize], u64> = pk.iter().map(|e| (e.as_slice(), 0)).collect();
    for t in &cliques {
        *per.get_mut(&t[..last]).expect("clique face in P_k") += 1;
    }
    let nk = p.classes.size(last) as u64;
    let ext_pred = density_product(d, k - 1, 1) * int(nk);
    let (lo, hi) = ((int(1) - gamma) * &ext_pred, (int(1) + gamma) * &ext_pred);
    let exceptional = per.values().filter(|&&x| int(x) < lo || int(x) > hi).count() as u64;
    let edges = pk.len() as u64;
    let extension = ExtensionReport {
        edges,
        predicted: ext_pred,
        exceptional,
        fraction: density_of(exceptional, edges),
        within: int(exceptional) <= gamma * int(edges),
    };
    Ok(CountingReport { count, predicted, lower, upper, within, slack, extension })
}

/// Regularity of `P^(r)[V_I]` in `P^(r-1)[V_I]` against `d_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerMeasure {
    pub rank: usize,
    pub classes: Vec<usize>,
    pub density: Rational,
    /// `max_S min(|𝒦(S)|/|𝒦(P)|, |d(S) - d_r|)` over the sub-polyads seen;
    /// the layer is `(ε, d_r)`-regular for every `ε` above it.
    pub measured: Rational,
    pub exhaustive: bool,
    /// `(ε, d_r)`-regular at the tolerance asked for.
    pub regular: Option<bool>,
    pub witness: Option<SubPolyad>,
}

/// Every layer of `P` against `d`, at tolerance `eps`.
pub fn measure_complex(p: &RankedHypergraph, d: &[Rational], eps: &Rational, opts: &CheckOptions) -> Result<Vec<LayerMeasure>> {
    let k = p.k();
    if d.len() + 2 != k {
        return invalid(format!("need {} densities d_2..d_(k-1)", k - 2));
    }
    let mut out = Vec::new();
    for r in 2..k {
        let dr = &d[r - 2];
        for cls in combinations(k, r) {
            let (poly, target) = p.layer_polyad(r, &cls)?;
            let lat = Lattice::new(&poly, |t| target.contains(t));
            let total = lat.cliques();
            let mut measured = int(0);
            let exhaustive = lat.walk(
                opts,
                |c, h| {
                    let x = density_of(c, total);
                    let dev = density_of(h, c) - dr;
                    let dev = if dev < int(0) { -dev } else { dev };
                    let m = if x < dev { x } else { dev };
                    if m > measured {
                        measured = m;
                    }
                    false
                },
                |_| {},
            )?;
            let verdict = eps_d_on(&lat, eps, dr, opts)?;
            let regular = match &verdict {
                v if v.is_regular() => Some(true),
                v if v.witness().is_some() => Some(false),
                _ => None,
            };
            out.push(LayerMeasure {
                rank: r,
                classes: cls,
                density: density_of(lat.hits(), total),
                measured,
                exhaustive,
                regular,
                witness: verdict.witness().cloned(),
            });
        }
    }
    Ok(out)
}

/// `(f, d_2, …, d_(k-1))`-regularity: every layer regular at `f(d_0)`.
pub fn is_f_regular_complex(
    p: &RankedHypergraph,
    f: &ToleranceFn,
    d: &[Rational],
    opts: &CheckOptions,
) -> Result<(Option<bool>, Vec<LayerMeasure>)> {
    let d0 = d.iter().min().cloned().unwrap_or_else(Rational::one);
    let eps = f.eval(&d0)?;
    let layers = measure_complex(p, d, &eps, opts)?;
    Ok((fold(layers.iter().map(|l| l.regular)), layers))
}

fn fold(it: impl Iterator<Item = Option<bool>>) -> Option<bool> {
    let mut acc = Some(true);
    for x in it {
        match x {
            Some(false) => return Some(false),
            None => acc = None,
            Some(true) => {}
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicingReport {
    /// `|V_k'| >= δ|V_k|`.
    pub large_slice: bool,
    pub f_value: Rational,
    /// `(2/δ)·f(d_0)`.
    pub f_star: Rational,
    /// `f(d_0) <= (δ/2)·F_(k-1,1/4)(d_0)`.
    pub f_small: bool,
    pub before: Vec<LayerMeasure>,
    pub after: Vec<LayerMeasure>,
    /// `P` is `f`-regular.
    pub hypothesis: Option<bool>,
    /// The slice is `f*`-regular.
    pub conclusion: Option<bool>,
}

/// Measures `P` and `P[V_1, …, V_(k-1), V_k']` against `f` and `f* = (2/δ)f`.
pub fn slicing_check(
    p: &RankedHypergraph,
    keep: &[usize],
    f: &ToleranceFn,
    delta: &Rational,
    d: &[Rational],
    opts: &CheckOptions,
) -> Result<SlicingReport> {
    if *delta <= int(0) || *delta > int(1) {
        return invalid("delta must lie in (0, 1]");
    }
    if p.k() < 3 {
        return invalid("slicing needs k >= 3");
    }
    let q = p.slice_last(keep)?;
    let nk = p.classes.size(p.k() - 1);
    let large_slice = int(q.classes.size(q.k() - 1) as u64) >= delta * int(nk as u64);
    let d0 = d.iter().min().cloned().unwrap_or_else(Rational::one);
    let f_value = f.eval(&d0)?;
    let f_star = int(2) / delta * &f_value;
    let f_small = f_value <= delta / int(2) * counting_tolerance(p.k() as u32 - 1, &Rational::new(1.into(), 4.into()), &d0)?;
    let before = measure_complex(p, d, &f_value, opts)?;
    let after = measure_complex(&q, d, &f_star, opts)?;
    Ok(SlicingReport {
        large_slice,
        hypothesis: fold(before.iter().map(|l| l.regular)),
        conclusion: fold(after.iter().map(|l| l.regular)),
        f_value,
        f_star,
        f_small,
        before,
        after,
    })
}
