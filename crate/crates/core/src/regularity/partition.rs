use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;

use crate::error::{invalid, Error, Result};
use crate::exact::{int, Rational};
use crate::graphs::BipartiteGraph;
use crate::partitions::VertexPartition;
use crate::regularity::pair::{is_delta_regular_pair, CheckOptions, DeltaWitness, Mode, PairVerdict};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    NotRegular,
    Undecided,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (NotRegular, _) | (_, NotRegular) => NotRegular,
            (Regular, Regular) => Regular,
            _ => Undecided,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairStatus {
    Regular,
    /// Density zero: regular by convention.
    Vacuous,
    Irregular,
    /// Enumeration exceeded the cap and no witness was found.
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairLine {
    pub p: usize,
    pub q: usize,
    pub status: PairStatus,
    pub witness: Option<DeltaWitness>,
    /// Edges of the pair.
    pub edges: u64,
    /// Edits any repair of this pair needs.
    pub lower: u64,
    /// Edits of the cheapest verified repair.
    pub upper: u64,
    pub repair: Repair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Repair {
    None,
    Empty,
    Complete,
    Circulant,
    Random,
}

/// A sound interval for the number of edits needed to make every pair
/// `⟨δ⟩`-regular.
#[derive(Clone, Debug, PartialEq)]
pub struct EditInterval {
    pub lower: u64,
    pub upper: u64,
    /// `δ · e(G)`.
    pub budget: Rational,
    pub verdict: Verdict,
    pub pairs: Vec<PairLine>,
    /// Pairs of density zero declared regular by convention.
    pub vacuous_pairs: usize,
}

/// Edits forced by a witness `(S, T)` inside a pair `(P, Q)`.
///
/// Any repaired pair needs `e'(S,T) >= ρ·e'(P,Q)` with
/// `ρ = |S||T| / (2|P||Q|) <= 1/2`. An edit moves the slack by at most
/// `1 - ρ`, so at least `⌈(ρ·R − (1−ρ)·s) / (1−ρ)⌉` edits are needed, where
/// `s = e(S,T)` and `R = e(P,Q) − s`.
pub fn witness_lower_bound(s_size: usize, t_size: usize, s: u64, p_size: usize, q_size: usize, total: u64) -> u64 {
    let rho = Rational::new(BigInt::from(s_size * t_size), BigInt::from(2 * p_size * q_size));
    let one = int(1);
    let r = int(total - s);
    let need = (&rho * r) / (&one - &rho) - int(s);
    if need <= Rational::zero() {
        0
    } else {
        crate::exact::ceil_u64(&need)
    }
}

fn circulant(n: usize, m: usize, edges: u64) -> BipartiteGraph {
    // Left vertex u gets `edges/n` (or one more) consecutive columns,
    // starting at a rotating offset.
    let mut g = BipartiteGraph::empty(n, m);
    let base = (edges / n as u64) as usize;
    let extra = (edges % n as u64) as usize;
    for u in 0..n {
        let deg = base + usize::from(u < extra);
        let start = (u * m) / n.max(1);
        for j in 0..deg.min(m) {
            g.add_edge(u, (start + j) % m);
        }
    }
    g
}

fn random_block(n: usize, m: usize, edges: u64, seed: u64) -> BipartiteGraph {
    let mut cells: Vec<usize> = (0..n * m).collect();
    cells.shuffle(&mut seed::rng(seed));
    BipartiteGraph::from_edges(n, m, cells[..edges as usize].iter().map(|&c| (c / m, c % m))).unwrap()
}

/// Classifies one pair and prices its repairs.
fn pair_line(
    g: &BipartiteGraph,
    pc: &[usize],
    qc: &[usize],
    p: usize,
    q: usize,
    delta: &Rational,
    opts: &CheckOptions,
    seed: u64,
) -> Result<PairLine> {
    let h = g.induced(pc, qc);
    let e = h.edge_count();
    let (n, m) = (pc.len(), qc.len());
    let verdict = match is_delta_regular_pair(&h, delta, opts) {
        Ok(v) => v,
        Err(Error::CapExceeded { .. }) => is_delta_regular_pair(&h, delta, &CheckOptions::sampled(seed, 8))?,
        Err(e) => return Err(e),
    };
    let exact = matches!(opts.mode, Mode::Exact);
    let (status, witness) = match verdict {
        PairVerdict::Regular if e == 0 => (PairStatus::Vacuous, None),
        PairVerdict::Regular => (PairStatus::Regular, None),
        PairVerdict::Irregular(w) => (PairStatus::Irregular, Some(w)),
        PairVerdict::NoWitnessFound => (PairStatus::Unknown, None),
    };
    if matches!(status, PairStatus::Regular | PairStatus::Vacuous) {
        return Ok(PairLine { p, q, status, witness, edges: e, lower: 0, upper: 0, repair: Repair::None });
    }
    let lower = witness.as_ref().map_or(0, |w| {
        let s = h.edges_between(&w.a, &w.b).unwrap();
        witness_lower_bound(w.a.len(), w.b.len(), s, n, m, e)
    });
    // Empty and complete pairs are regular without enumeration.
    let mut best = (e, Repair::Empty);
    let full = (n * m) as u64 - e;
    if full < best.0 {
        best = (full, Repair::Complete);
    }
    let candidates = [(Repair::Circulant, circulant(n, m, e)), (Repair::Random, random_block(n, m, e, seed))];
    for (kind, cand) in candidates {
        let cost = h.symmetric_difference_count(&cand)?;
        if cost >= best.0 {
            continue;
        }
        let opts = CheckOptions { mode: Mode::Exact, cap: if exact { opts.cap } else { super::pair::DEFAULT_CAP } };
        if let Ok(PairVerdict::Regular) = is_delta_regular_pair(&cand, delta, &opts) {
            best = (cost, kind);
        }
    }
    Ok(PairLine { p, q, status, witness, edges: e, lower, upper: best.0, repair: best.1 })
}

/// Sound interval for the edit distance of `(g, P, Q)` to a partition whose
/// every pair is `⟨δ⟩`-regular.
///
/// Pairs whose enumeration exceeds the cap fall back to a seeded witness
/// search and are otherwise left undetermined.
pub fn partition_edit_interval(
    g: &BipartiteGraph,
    p: &VertexPartition,
    q: &VertexPartition,
    delta: &Rational,
    opts: &CheckOptions,
) -> Result<EditInterval> {
    if p.ground_size() != g.left() || q.ground_size() != g.right() {
        return invalid("partitions do not match the graph's sides");
    }
    let base_seed = match opts.mode {
        Mode::Sampled { seed, .. } => seed,
        Mode::Exact => 0,
    };
    let mut pairs = Vec::with_capacity(p.len() * q.len());
    for (pi, pc) in p.cells().iter().enumerate() {
        for (qi, qc) in q.cells().iter().enumerate() {
            let s = seed::derive(base_seed, &["pair", &pi.to_string(), &qi.to_string()]);
            pairs.push(pair_line(g, pc, qc, pi, qi, delta, opts, s)?);
        }
    }
    let lower: u64 = pairs.iter().map(|l| l.lower).sum();
    let upper: u64 = pairs.iter().map(|l| l.upper).sum();
    let budget = delta * int(g.edge_count());
    let verdict = if int(lower) > budget {
        Verdict::NotRegular
    } else if int(upper) <= budget {
        Verdict::Regular
    } else {
        Verdict::Undecided
    };
    let vacuous_pairs = pairs.iter().filter(|l| l.status == PairStatus::Vacuous).count();
    Ok(EditInterval { lower, upper, budget, verdict, pairs, vacuous_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn complete_pairs_give_zero_interval() {
        let g = BipartiteGraph::complete(8, 8);
        let p = VertexPartition::blocks(8, 2).unwrap();
        let r = partition_edit_interval(&g, &p, &p, &ratio(1, 4), &CheckOptions::default()).unwrap();
        assert_eq!((r.lower, r.upper), (0, 0));
        assert_eq!(r.verdict, Verdict::Regular);
    }

    #[test]
    fn empty_block_forces_edits() {
        // One 8x8 pair, complete except a 2x2 hole; δ = 1/4.
        let mut g = BipartiteGraph::complete(8, 8);
        for u in 0..2 {
            for v in 0..2 {
                g.remove_edge(u, v);
            }
        }
        let p = VertexPartition::trivial(8).unwrap();
        let r = partition_edit_interval(&g, &p, &p, &ratio(1, 4), &CheckOptions::default()).unwrap();
        // ρ = 4/128, R = 60, s = 0: ⌈(1/32·60)/(31/32)⌉ = ⌈60/31⌉ = 2.
        assert_eq!(r.lower, 2);
        assert!(r.lower <= r.upper);
        // Filling the hole (4 edits) is a verified repair.
        assert!(r.upper <= 4);
    }

    #[test]
    fn unit_budget_is_regular() {
        let mut g = BipartiteGraph::complete(6, 6);
        g.remove_edge(0, 0);
        g.remove_edge(0, 1);
        g.remove_edge(1, 0);
        g.remove_edge(1, 1);
        let p = VertexPartition::trivial(6).unwrap();
        let r = partition_edit_interval(&g, &p, &p, &int(1), &CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Regular);
    }

    #[test]
    fn witness_bound_zero_when_dense_enough() {
        assert_eq!(witness_lower_bound(2, 2, 4, 8, 8, 64), 0);
    }
}
