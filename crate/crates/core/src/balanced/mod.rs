//! `(𝒳, 𝒴, 𝓕, α, β)`-balanced bipartite graphs: verification, a seeded
//! sampler, and the weighted-cut checks built on them.

mod lemmas;
mod sampler;

pub use lemmas::{check_one_six, check_one_twelve, OneSixReport, OneTwelveContext, OneTwelveReport, Weights};
pub use sampler::{sample_balanced, sample_once, BalancedGraph, OnExhaustion, SampleOptions, SamplerTelemetry};

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::bits::BitSet;
use crate::error::{invalid, Result};
use crate::exact::{int, ratio, Rational, Real};
use crate::graphs::BipartiteGraph;
use crate::partitions::VertexPartition;

/// Parameters of a balanced graph on `(𝐗, 𝐘)`, with `𝐗 = 0..|𝐗|` the left
/// side and `𝐘 = 0..|𝐘|` the right side.
#[derive(Clone, Debug)]
pub struct BalanceSpec {
    pub x: VertexPartition,
    pub y: VertexPartition,
    /// Members of `𝓕`, each a sorted union of `𝒴`-cells.
    pub f: Vec<Vec<usize>>,
    pub alpha: Real,
    pub beta: Rational,
}

impl BalanceSpec {
    pub fn new(x: VertexPartition, y: VertexPartition, f: Vec<Vec<usize>>, alpha: Real, beta: Rational) -> Result<Self> {
        let mut f = f;
        for member in f.iter_mut() {
            member.sort_unstable();
            member.dedup();
            if member.iter().any(|&v| v >= y.ground_size()) {
                return invalid("F member outside Y");
            }
            let inside: std::collections::HashSet<usize> = member.iter().copied().collect();
            for &v in member.iter() {
                if !y.cell(y.cell_of(v)).iter().all(|u| inside.contains(u)) {
                    return invalid("F member is not a union of Y-cells");
                }
            }
        }
        if x.cells().iter().any(|c| c.len() % 2 != 0) {
            return invalid("X-cells must have even size");
        }
        if y.cells().iter().any(|c| c.len() % 2 != 0) {
            return invalid("Y-cells must have even size");
        }
        if f.windows(2).any(|w| w[0].len() != w[1].len()) {
            return invalid("F members must have equal size");
        }
        if beta < int(0) {
            return invalid("beta must be nonnegative");
        }
        Ok(BalanceSpec { x, y, f, alpha, beta })
    }

    pub fn x_size(&self) -> usize {
        self.x.ground_size()
    }

    pub fn y_size(&self) -> usize {
        self.y.ground_size()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Equitable,
    Balanced,
    Pseudorandom,
    ComplementClosed,
}

impl Condition {
    pub const ALL: [Condition; 4] =
        [Condition::Equitable, Condition::Balanced, Condition::Pseudorandom, Condition::ComplementClosed];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Equitable => "i",
            Condition::Balanced => "ii",
            Condition::Pseudorandom => "iii",
            Condition::ComplementClosed => "iv",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    /// First violated condition in the order (i), (ii), (iii), (iv).
    pub violation: Option<Violation>,
    /// The involution found for (iv), when the check got that far.
    pub phi: Option<Vec<usize>>,
}

impl BalanceReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

fn check_shape(g: &BipartiteGraph, spec: &BalanceSpec) -> Result<()> {
    if g.left() != spec.x_size() || g.right() != spec.y_size() {
        return invalid(format!(
            "graph is {}x{}, spec expects {}x{}",
            g.left(),
            g.right(),
            spec.x_size(),
            spec.y_size()
        ));
    }
    Ok(())
}

/// Checks (i) to (iv), stopping at the first violation.
pub fn verify_balanced(g: &BipartiteGraph, spec: &BalanceSpec) -> Result<BalanceReport> {
    check_shape(g, spec)?;
    for c in [Condition::Equitable, Condition::Balanced, Condition::Pseudorandom] {
        if let Some(v) = check_condition(g, spec, c)? {
            return Ok(BalanceReport { violation: Some(v), phi: None });
        }
    }
    match find_involution(g, &spec.y) {
        Ok(phi) => Ok(BalanceReport { violation: None, phi: Some(phi) }),
        Err(v) => Ok(BalanceReport { violation: Some(v), phi: None }),
    }
}

/// Checks a single condition.
pub fn check_condition(g: &BipartiteGraph, spec: &BalanceSpec, c: Condition) -> Result<Option<Violation>> {
    check_shape(g, spec)?;
    Ok(match c {
        Condition::Equitable => check_equitable(g, spec),
        Condition::Balanced => check_beta_balanced(g, spec),
        Condition::Pseudorandom => check_pseudorandom(g, spec),
        Condition::ComplementClosed => find_involution(g, &spec.y).err(),
    })
}

fn cell_mask(n: usize, cell: &[usize]) -> BitSet {
    BitSet::from_indices(n, cell.iter().copied())
}

fn check_equitable(g: &BipartiteGraph, spec: &BalanceSpec) -> Option<Violation> {
    let mut counts = vec![0u64; spec.y_size()];
    for (xi, xc) in spec.x.cells().iter().enumerate() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &x in xc {
            for y in g.neighbors_iter(x) {
                counts[y] += 1;
            }
        }
        if let Some((y, &d)) = counts.iter().enumerate().find(|(_, &d)| 2 * d != xc.len() as u64) {
            return Some(Violation {
                condition: Condition::Equitable,
                detail: format!("y={y} has {d} neighbours in X-cell {xi} of size {}", xc.len()),
            });
        }
    }
    None
}

/// `β`-balanced on `(𝐗, F)` for every `F`: at most `(1/2 + β)|F|` vertices
/// of `F` agree on any pair `x ≠ x'`.
pub fn check_beta_balanced(g: &BipartiteGraph, spec: &BalanceSpec) -> Option<Violation> {
    for (fi, f) in spec.f.iter().enumerate() {
        if let Some((x, x2, agree)) = beta_balanced_on(g, f, &spec.beta) {
            return Some(Violation {
                condition: Condition::Balanced,
                detail: format!("F member {fi}: x={x}, x'={x2} agree on {agree} of {}", f.len()),
            });
        }
    }
    None
}

/// First pair `x < x'` agreeing on more than `(1/2 + β)|F|` of `F`.
pub(crate) fn beta_balanced_on(g: &BipartiteGraph, f: &[usize], beta: &Rational) -> Option<(usize, usize, u64)> {
    let limit = (ratio(1, 2) + beta) * int(f.len() as u64);
    // Largest allowed agreement count.
    let max_agree = limit.floor().to_integer();
    let max_agree: u64 = max_agree.try_into().unwrap_or(u64::MAX);
    let size = f.len() as u64;
    if max_agree >= size {
        return None;
    }
    let mask = cell_mask(g.right(), f);
    for x in 0..g.left() {
        for x2 in x + 1..g.left() {
            let differ: u64 = g
                .row(x)
                .iter()
                .zip(g.row(x2))
                .zip(mask.words())
                .map(|((a, b), m)| ((a ^ b) & m).count_ones() as u64)
                .sum();
            let agree = size - differ;
            if agree > max_agree {
                return Some((x, x2, agree));
            }
        }
    }
    None
}

/// Largest `c` with `4c <= (1 + α)n`.
pub(crate) fn max_codegree(alpha: &Real, n: u64) -> u64 {
    let mut c = n / 4;
    while c < n && !(4 * (c + 1) > n && alpha.cmp_rational(&Rational::new((4 * (c + 1) - n).into(), n.into())) == Ordering::Less) {
        c += 1;
    }
    c
}

fn check_pseudorandom(g: &BipartiteGraph, spec: &BalanceSpec) -> Option<Violation> {
    // Each unordered pair y < y' sharing some F member is checked once.
    let ny = spec.y_size();
    let mut partners = vec![BitSet::new(ny); ny];
    for f in &spec.f {
        for (a, &y) in f.iter().enumerate() {
            for &y2 in &f[a + 1..] {
                partners[y].insert(y2);
            }
        }
    }
    let mut bound: HashMap<u64, u64> = HashMap::new();
    for (xi, xc) in spec.x.cells().iter().enumerate() {
        let n = xc.len() as u64;
        let cmax = *bound.entry(n).or_insert_with(|| max_codegree(&spec.alpha, n));
        if cmax >= n {
            continue;
        }
        let mut local = vec![BitSet::new(xc.len()); ny];
        for (pos, &x) in xc.iter().enumerate() {
            for y in g.neighbors_iter(x) {
                local[y].insert(pos);
            }
        }
        for y in 0..ny {
            for y2 in partners[y].iter() {
                let c = crate::bits::and_count(local[y].words(), local[y2].words());
                if c > cmax {
                    let fi = spec.f.iter().position(|f| f.binary_search(&y).is_ok() && f.binary_search(&y2).is_ok());
                    return Some(Violation {
                        condition: Condition::Pseudorandom,
                        detail: format!(
                            "X-cell {xi}, F member {}: y={y}, y'={y2} have {c} common neighbours, |X|={n}, alpha={}",
                            fi.unwrap_or(0),
                            spec.alpha
                        ),
                    });
                }
            }
        }
    }
    None
}

/// An involution `φ` with `N(φ(y)) = 𝐗 \ N(y)` inside every `𝒴`-cell.
pub fn find_involution(g: &BipartiteGraph, y: &VertexPartition) -> std::result::Result<Vec<usize>, Violation> {
    let t = g.transpose();
    let full = BitSet::full(g.left());
    let mut phi = vec![usize::MAX; y.ground_size()];
    for (yi, cell) in y.cells().iter().enumerate() {
        let mut open: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        for &v in cell {
            let row = t.row(v).to_vec();
            let comp: Vec<u64> = row.iter().zip(full.words()).map(|(w, f)| !w & f).collect();
            if let Some(stack) = open.get_mut(&comp) {
                if let Some(u) = stack.pop() {
                    phi[u] = v;
                    phi[v] = u;
                    continue;
                }
            }
            open.entry(row).or_default().push(v);
        }
        if let Some(v) = open.values().flatten().next() {
            return Err(Violation {
                condition: Condition::ComplementClosed,
                detail: format!("Y-cell {yi}: y={v} has no complementary partner"),
            });
        }
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> BalanceSpec {
        let x = VertexPartition::blocks(4, 1).unwrap();
        let y = VertexPartition::blocks(4, 1).unwrap();
        BalanceSpec::new(x, y, vec![], Real::rational(ratio(1, 4)), ratio(1, 16)).unwrap()
    }

    #[test]
    fn complement_closed_half_degrees() {
        // y0: {0,1}, y1: {2,3} = complement, y2: {0,2}, y3: {1,3}.
        let g = BipartiteGraph::from_edges(4, 4, [(0, 0), (1, 0), (2, 1), (3, 1), (0, 2), (2, 2), (1, 3), (3, 3)]).unwrap();
        let r = verify_balanced(&g, &small_spec()).unwrap();
        assert!(r.holds());
        let phi = r.phi.unwrap();
        assert_eq!(phi, vec![1, 0, 3, 2]);
    }

    #[test]
    fn planted_degree_violation() {
        let g = BipartiteGraph::from_edges(4, 4, [(0, 0), (1, 0), (2, 0), (2, 1), (3, 1), (0, 2), (2, 2), (1, 3), (3, 3)]).unwrap();
        let r = verify_balanced(&g, &small_spec()).unwrap();
        assert_eq!(r.violation.unwrap().condition, Condition::Equitable);
    }

    #[test]
    fn spec_validation() {
        let x = VertexPartition::blocks(4, 1).unwrap();
        let y = VertexPartition::blocks(4, 2).unwrap();
        let a = Real::rational(ratio(1, 4));
        assert!(BalanceSpec::new(x.clone(), y.clone(), vec![vec![0, 1, 2]], a.clone(), ratio(1, 16)).is_err());
        assert!(BalanceSpec::new(x.clone(), y.clone(), vec![vec![0, 1]], a.clone(), ratio(1, 16)).is_ok());
        let odd = VertexPartition::blocks(3, 1).unwrap();
        assert!(BalanceSpec::new(odd, y, vec![], a, ratio(1, 16)).is_err());
    }
}
