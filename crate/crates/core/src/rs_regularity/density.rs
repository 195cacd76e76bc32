use std::collections::BTreeMap;

use crate::error::{invalid, precondition, Result};
use crate::exact::{int, Rational};
use crate::graphs::{density_of, KPartiteKGraph, MixedRadix, VertexClassSet};
use crate::partitions::{KPartition, Polyad};
use crate::regularity::{CheckOptions, Verdict};
use crate::rs_regularity::lattice::{Lattice, SubPolyad};

/// Membership in `H` of a clique written with global vertices in class order.
pub(crate) fn hits_in(h: &KPartiteKGraph) -> impl Fn(&[usize]) -> bool + '_ {
    let classes = h.classes();
    move |t: &[usize]| {
        let local: Vec<usize> = t.iter().enumerate().map(|(i, &v)| v - classes.offset(i)).collect();
        h.contains(&local)
    }
}

pub(crate) fn check_on_classes(h: &KPartiteKGraph, s: &Polyad) -> Result<()> {
    if s.k() != h.k() {
        return invalid(format!("a {}-polyad cannot carry a {}-graph", s.k(), h.k()));
    }
    let classes = h.classes();
    for (i, c) in s.classes().iter().enumerate() {
        if c.iter().any(|&v| !classes.range(i).contains(&v)) {
            return invalid(format!("polyad class {i} is not inside class {i} of H"));
        }
    }
    Ok(())
}

/// `d_H(S) = |H ∩ 𝒦(S)| / |𝒦(S)|`, and 0 when `𝒦(S)` is empty. The classes
/// of `S` are global vertices of `H`, class `i` of `S` inside class `i` of `H`.
pub fn relative_density(h: &KPartiteKGraph, s: &Polyad) -> Result<Rational> {
    check_on_classes(h, s)?;
    let hit = hits_in(h);
    let cliques = s.clique_tuples();
    let hits = cliques.iter().filter(|t| hit(t)).count();
    Ok(density_of(hits as u64, cliques.len() as u64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RsVerdict {
    Regular,
    /// A sub-polyad `S` with `|𝒦(S)| >= ε|𝒦(P)|` and `d_H(S)` off target.
    Irregular(SubPolyad),
    /// Sampled mode found nothing.
    NoWitnessFound,
}

impl RsVerdict {
    pub fn is_regular(&self) -> bool {
        matches!(self, RsVerdict::Regular)
    }

    pub fn witness(&self) -> Option<&SubPolyad> {
        match self {
            RsVerdict::Irregular(s) => Some(s),
            _ => None,
        }
    }
}

/// `|𝒦(S)| >= x·|𝒦(P)|`.
pub(crate) fn large(cliques: u64, total: u64, x: &Rational) -> bool {
    int(cliques) >= x * int(total)
}

fn off_by_more(hits: u64, cliques: u64, d: &Rational, eps: &Rational) -> bool {
    let dev = density_of(hits, cliques) - d;
    dev > *eps || -dev > *eps
}

/// `(ε, d)`-regularity of `H ∩ 𝒦(P)` in `P`. Exact mode walks every
/// sub-polyad of `P` built from faces that lie in some clique.
pub fn is_eps_d_regular(
    h: &KPartiteKGraph,
    p: &Polyad,
    eps: &Rational,
    d: &Rational,
    opts: &CheckOptions,
) -> Result<RsVerdict> {
    check_on_classes(h, p)?;
    eps_d_on(&Lattice::new(p, hits_in(h)), eps, d, opts)
}

pub(crate) fn eps_d_on(lat: &Lattice, eps: &Rational, d: &Rational, opts: &CheckOptions) -> Result<RsVerdict> {
    let total = lat.cliques();
    if total == 0 {
        return Ok(RsVerdict::Regular);
    }
    let mut found: Option<SubPolyad> = None;
    let exhaustive = lat.walk(
        opts,
        |c, hh| large(c, total, eps) && off_by_more(hh, c, d, eps),
        |s| {
            if found.is_none() {
                found = Some(s)
            }
        },
    )?;
    Ok(match found {
        Some(s) => RsVerdict::Irregular(s),
        None if exhaustive => RsVerdict::Regular,
        None => RsVerdict::NoWitnessFound,
    })
}

/// Extremes of `d_H(S)` over the `ε`-large sub-polyads seen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spread {
    pub low: SubPolyad,
    pub high: SubPolyad,
    pub exhaustive: bool,
}

impl Spread {
    pub fn width(&self) -> Rational {
        self.high.density() - self.low.density()
    }

    /// Some `d` has `d_H(S) = d ± ε` on every large `S`: `Some(true)` when
    /// that is decided, `Some(false)` when refuted, `None` otherwise.
    pub fn regular(&self, eps: &Rational) -> Option<bool> {
        if self.width() > int(2) * eps {
            Some(false)
        } else if self.exhaustive {
            Some(true)
        } else {
            None
        }
    }
}

/// `P` itself is always large, so both extremes exist whenever `𝒦(P)` does.
pub(crate) fn spread_on(lat: &Lattice, eps: &Rational, opts: &CheckOptions) -> Result<Spread> {
    let total = lat.cliques();
    let whole = lat.whole();
    let mut lo = (whole.hits, whole.cliques);
    let mut hi = lo;
    let mut low = whole.clone();
    let mut high = whole;
    let less = |a: (u64, u64), b: (u64, u64)| (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128);
    let pending = std::cell::Cell::new(false);
    let exhaustive = lat.walk(
        opts,
        |c, hh| {
            if !large(c, total, eps) {
                return false;
            }
            let x = if c == 0 { (0, 1) } else { (hh, c) };
            let (down, up) = (less(x, lo), less(hi, x));
            if down {
                lo = x;
            }
            if up {
                hi = x;
            }
            pending.set(down);
            down || up
        },
        |s| {
            if pending.get() {
                low = s;
            } else {
                high = s;
            }
        },
    )?;
    Ok(Spread { low, high, exhaustive })
}

/// A k-polyad of a `(k-1)`-partition, transversal to the classes of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPolyad {
    /// One cluster per class.
    pub clusters: Vec<usize>,
    /// Top-layer cell holding the faces that omit class `i`.
    pub cells: Vec<usize>,
    pub polyad: Polyad,
}

/// The k-polyads of `P` meeting every class of `H` once, in key order. Polyads
/// on other cluster sets carry no edge of `H`.
pub fn transversal_polyads(classes: &VertexClassSet, p: &KPartition) -> Result<Vec<PartitionPolyad>> {
    let k = classes.len();
    p.check_refines_classes(classes)?;
    if p.arity() + 1 != k {
        return precondition(format!("expected a {}-partition, got a {}-partition", k - 1, p.arity()));
    }
    let radix = MixedRadix::new(&classes.sizes())?;
    let mut keys: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut face = Vec::with_capacity(k - 1);
    for code in 0..radix.len() {
        let t: Vec<usize> = radix.decode(code).iter().enumerate().map(|(i, &l)| classes.global(i, l)).collect();
        let mut key = Vec::with_capacity(k);
        for i in 0..k {
            face.clear();
            face.extend(t.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x));
            key.push(p.cell_of_edge(&face).expect("layers cover the crossing sets"));
        }
        keys.entry(key).or_insert_with(|| t.iter().map(|&v| p.vertex().cell_of(v)).collect());
    }
    let top = p.arity();
    keys.into_iter()
        .map(|(cells, clusters)| {
            let vs = clusters.iter().map(|&c| p.vertex().cell(c).to_vec()).collect();
            let parts = cells.iter().map(|&c| p.cell_edges(top, c)).collect();
            Ok(PartitionPolyad { clusters, cells, polyad: Polyad::new(vs, parts)? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularPolyad {
    pub index: usize,
    pub cliques: u64,
    pub spread: Spread,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RsPartitionReport {
    pub verdict: Verdict,
    /// `Σ |𝒦(P)|` over polyads shown irregular.
    pub mass: u128,
    /// `Σ |𝒦(P)|` over polyads sampled mode could not settle.
    pub unsettled_mass: u128,
    /// `ε|V(H)|^k`.
    pub bound: Rational,
    pub polyads: Vec<PartitionPolyad>,
    pub irregular: Vec<IrregularPolyad>,
    pub unsettled: Vec<usize>,
}

/// `ε`-regularity of `P` as a partition of `H`: the irregular polyads carry
/// at most `ε|V(H)|^k` cliques. A polyad is regular when a single `d` works.
pub fn is_eps_regular_partition(
    h: &KPartiteKGraph,
    p: &KPartition,
    eps: &Rational,
    opts: &CheckOptions,
) -> Result<RsPartitionReport> {
    let polyads = transversal_polyads(h.classes(), p)?;
    let hit = hits_in(h);
    let mut irregular = Vec::new();
    let mut unsettled = Vec::new();
    let (mut mass, mut unsettled_mass) = (0u128, 0u128);
    for (index, pp) in polyads.iter().enumerate() {
        let lat = Lattice::new(&pp.polyad, &hit);
        let spread = spread_on(&lat, eps, opts)?;
        match spread.regular(eps) {
            Some(true) => {}
            Some(false) => {
                mass += lat.cliques() as u128;
                irregular.push(IrregularPolyad { index, cliques: lat.cliques(), spread });
            }
            None => {
                unsettled_mass += lat.cliques() as u128;
                unsettled.push(index);
            }
        }
    }
    let n = h.classes().total() as u64;
    let bound = eps * num_traits::pow(int(n), h.k());
    let verdict = if wide(mass) > bound {
        Verdict::NotRegular
    } else if wide(mass + unsettled_mass) > bound {
        Verdict::Undecided
    } else {
        Verdict::Regular
    };
    Ok(RsPartitionReport { verdict, mass, unsettled_mass, bound, polyads, irregular, unsettled })
}

fn wide(x: u128) -> Rational {
    Rational::from_integer(x.into())
}
