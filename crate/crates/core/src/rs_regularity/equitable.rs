use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{invalid, Result};
use crate::exact::{fmt_rational, int, parse_rational, Rational};
use crate::partitions::{KPartition, Polyad};
use crate::regularity::{CheckOptions, Verdict};
use crate::rs_regularity::density::{eps_d_on, RsVerdict};
use crate::rs_regularity::lattice::{Lattice, SubPolyad};
use crate::rs_regularity::counting_tolerance;

/// A tolerance function `[0,1] → [0,1]`, evaluated exactly and capped at 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ToleranceFn {
    Constant(Rational),
    /// `F_{k,γ}(x) = (γ³/12)(x/2)^(2^(k+1))`.
    Counting { k: u32, gamma: Rational },
    /// `δ⁴(x/2)^(2^(k+3))`.
    Reduction { k: u32, delta: Rational },
    Scaled { factor: Rational, inner: Box<ToleranceFn> },
}

impl ToleranceFn {
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if *x < int(0) || *x > int(1) {
            return invalid(format!("tolerance functions take arguments in [0,1], got {x}"));
        }
        let v = match self {
            ToleranceFn::Constant(c) => c.clone(),
            ToleranceFn::Counting { k, gamma } => counting_tolerance(*k, gamma, x)?,
            ToleranceFn::Reduction { k, delta } => {
                if *k > 10 {
                    return invalid(format!("exponent 2^{} is out of range", k + 3));
                }
                num_traits::pow(delta.clone(), 4) * num_traits::pow(x / int(2), 1usize << (k + 3))
            }
            ToleranceFn::Scaled { factor, inner } => factor * inner.eval(x)?,
        };
        if v < int(0) {
            return invalid("tolerance came out negative");
        }
        Ok(v.min(Rational::one()))
    }

    /// `const 1/8`, `counting 3 1/2`, `reduction 3 1/64`, `scaled 2 <inner>`.
    pub fn to_text(&self) -> String {
        match self {
            ToleranceFn::Constant(c) => format!("const {}", fmt_rational(c)),
            ToleranceFn::Counting { k, gamma } => format!("counting {k} {}", fmt_rational(gamma)),
            ToleranceFn::Reduction { k, delta } => format!("reduction {k} {}", fmt_rational(delta)),
            ToleranceFn::Scaled { factor, inner } => format!("scaled {} {}", fmt_rational(factor), inner.to_text()),
        }
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let bad = || crate::Error::Parse(format!("bad tolerance function {s:?}"));
        let mut it = s.split_whitespace();
        let f = match it.next().ok_or_else(bad)? {
            "const" => ToleranceFn::Constant(parse_rational(it.next().ok_or_else(bad)?)?),
            "counting" => ToleranceFn::Counting {
                k: it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?,
                gamma: parse_rational(it.next().ok_or_else(bad)?)?,
            },
            "reduction" => ToleranceFn::Reduction {
                k: it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?,
                delta: parse_rational(it.next().ok_or_else(bad)?)?,
            },
            "scaled" => {
                let factor = parse_rational(it.next().ok_or_else(bad)?)?;
                let rest: Vec<&str> = it.collect();
                return Ok(ToleranceFn::Scaled { factor, inner: Box::new(ToleranceFn::from_text(&rest.join(" "))?) });
            }
            _ => return Err(bad()),
        };
        if it.next().is_some() {
            return Err(bad());
        }
        if let ToleranceFn::Constant(c) = &f {
            if *c < int(0) || *c > int(1) {
                return Err(bad());
            }
        }
        Ok(f)
    }
}

/// Shape of an `(r, a_1, …, a_r)`-partition with its tolerance function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsParams {
    /// `a[i-1] = a_i`.
    pub a: Vec<u64>,
    pub f: ToleranceFn,
    /// Partition-level `ε`.
    pub eps: Rational,
}

impl RsParams {
    pub fn new(a: Vec<u64>, f: ToleranceFn, eps: Rational) -> Result<Self> {
        if a.is_empty() || a.contains(&0) {
            return invalid("need a_1, …, a_r >= 1");
        }
        Ok(RsParams { a, f, eps })
    }

    /// `d_0 = min{1/a_2, …, 1/a_r}`, or 1 when `r = 1`.
    pub fn d0(&self) -> Rational {
        self.a[1..].iter().map(|&x| Rational::new(1.into(), x.into())).min().unwrap_or_else(Rational::one)
    }

    /// `f(d_0)`.
    pub fn tolerance(&self) -> Result<Rational> {
        self.f.eval(&self.d0())
    }
}

/// `under(F)` for cell `c` of layer `r`, with `F` as class-ordered tuples.
/// Classes are the cell's clusters in ascending order.
pub fn under_polyad(p: &KPartition, r: usize, c: usize) -> Result<(Polyad, Vec<Vec<usize>>)> {
    let cell = &p.layer(r)[c];
    let order = |e: &Vec<usize>| {
        let mut t = e.clone();
        t.sort_by_key(|&v| p.vertex().cell_of(v));
        t
    };
    let classes = cell.clusters.iter().map(|&cl| p.vertex().cell(cl).to_vec()).collect();
    let parts = cell.under.iter().map(|&u| p.cell_edges(r - 1, u).iter().map(order).collect()).collect();
    Ok((Polyad::new(classes, parts)?, cell.edges.iter().map(order).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFailure {
    pub layer: usize,
    pub cell: usize,
    pub witness: Option<SubPolyad>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquitableReport {
    pub verdict: Verdict,
    pub vertex_equitable: bool,
    /// `|P^(1)| = a_1`.
    pub vertex_count: bool,
    /// `(layer, cells found, a_r)` for polyads not split into `a_r` cells.
    pub split_failures: Vec<(usize, usize, u64)>,
    pub tolerance: Rational,
    pub failures: Vec<CellFailure>,
    pub unsettled: Vec<CellFailure>,
    pub cells_checked: usize,
}

/// `P^(1)` equitable with `a_1` clusters, each polyad of layer `r-1` split
/// into `a_r` cells, and each cell `(f(d_0), 1/a_r)`-regular in its polyad.
pub fn is_f_equitable(p: &KPartition, params: &RsParams, opts: &CheckOptions) -> Result<EquitableReport> {
    if params.a.len() != p.arity() {
        return invalid(format!("params describe a {}-partition, got arity {}", params.a.len(), p.arity()));
    }
    let tolerance = params.tolerance()?;
    let vertex_equitable = p.vertex().is_equitable();
    let vertex_count = p.vertex().len() as u64 == params.a[0];
    let mut report = EquitableReport {
        verdict: Verdict::NotRegular,
        vertex_equitable,
        vertex_count,
        split_failures: Vec::new(),
        tolerance: tolerance.clone(),
        failures: Vec::new(),
        unsettled: Vec::new(),
        cells_checked: 0,
    };
    if !vertex_equitable || !vertex_count {
        return Ok(report);
    }
    for r in 2..=p.arity() {
        let ar = params.a[r - 1];
        let mut groups: BTreeMap<&[usize], usize> = BTreeMap::new();
        for cell in p.layer(r) {
            *groups.entry(&cell.under).or_default() += 1;
        }
        for &n in groups.values() {
            if n as u64 != ar {
                report.split_failures.push((r, n, ar));
            }
        }
        let d = Rational::new(1.into(), ar.into());
        for c in 0..p.layer(r).len() {
            let (poly, f) = under_polyad(p, r, c)?;
            let f: std::collections::HashSet<Vec<usize>> = f.into_iter().collect();
            let lat = Lattice::new(&poly, |t| f.contains(t));
            report.cells_checked += 1;
            match eps_d_on(&lat, &tolerance, &d, opts)? {
                RsVerdict::Regular => {}
                RsVerdict::Irregular(w) => report.failures.push(CellFailure { layer: r, cell: c, witness: Some(w) }),
                RsVerdict::NoWitnessFound => report.unsettled.push(CellFailure { layer: r, cell: c, witness: None }),
            }
        }
    }
    report.verdict = if !report.split_failures.is_empty() || !report.failures.is_empty() {
        Verdict::NotRegular
    } else if report.unsettled.is_empty() {
        Verdict::Regular
    } else {
        Verdict::Undecided
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::partitions::VertexPartition;

    #[test]
    fn complete_partition_is_equitable_for_any_f() {
        let vp = VertexPartition::blocks(12, 4).unwrap();
        let p = KPartition::complete(vp, 2).unwrap();
        for f in [ToleranceFn::Constant(int(1)), ToleranceFn::Counting { k: 3, gamma: ratio(1, 2) }] {
            let params = RsParams::new(vec![4, 1], f, ratio(1, 10)).unwrap();
            let r = is_f_equitable(&p, &params, &CheckOptions::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Regular, "{r:?}");
        }
    }

    #[test]
    fn unequal_clusters_fail_fast() {
        let vp = VertexPartition::new(5, vec![vec![0], vec![1, 2, 3, 4]]).unwrap();
        let p = KPartition::complete(vp, 2).unwrap();
        let params = RsParams::new(vec![2, 1], ToleranceFn::Constant(int(1)), int(1)).unwrap();
        let r = is_f_equitable(&p, &params, &CheckOptions::default()).unwrap();
        assert!(!r.vertex_equitable && r.cells_checked == 0 && r.verdict == Verdict::NotRegular);
    }

    #[test]
    fn split_count_is_checked() {
        let vp = VertexPartition::blocks(4, 2).unwrap();
        let p = KPartition::from_labels(vp, 2, |_, e| (e[0] + e[1]) as u64 % 2).unwrap();
        let params = RsParams::new(vec![2, 3], ToleranceFn::Constant(int(1)), int(1)).unwrap();
        let r = is_f_equitable(&p, &params, &CheckOptions::default()).unwrap();
        assert_eq!(r.split_failures, vec![(2, 2, 3)]);
    }

    #[test]
    fn tolerance_text_round_trip() {
        for f in [
            ToleranceFn::Constant(ratio(1, 8)),
            ToleranceFn::Counting { k: 3, gamma: ratio(1, 2) },
            ToleranceFn::Scaled { factor: int(4), inner: Box::new(ToleranceFn::Reduction { k: 2, delta: ratio(1, 64) }) },
        ] {
            assert_eq!(ToleranceFn::from_text(&f.to_text()).unwrap(), f);
        }
    }
}
