use crate::balanced::{check_one_twelve, OneTwelveContext, OneTwelveReport, Weights};
use crate::bits::{self, BitSet};
use crate::core_construction::CoreSequence;
use crate::error::{invalid, precondition, Result};
use crate::exact::{int, pow2, ratio, Rational};
use crate::graphs::BipartiteGraph;
use crate::partitions::in_beta;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Cluster of `ℛ_i`.
    pub cluster: usize,
    /// Vertices of `P` with no neighbour in the cluster.
    pub p1: Vec<usize>,
    pub e_pr: u64,
    /// `d(P₁, R) = 0`, recounted.
    pub p1_isolated: bool,
    /// `8|P₁| >= γ|P|`.
    pub p1_large: bool,
    /// `d(P, R) >= (1/4)2^i p`.
    pub dense: bool,
}

impl Witness {
    pub fn holds(&self) -> bool {
        self.p1_isolated && self.p1_large && self.dense
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub level: usize,
    pub member: usize,
    pub i: usize,
    /// The `ℒ_{i-1}` cluster with `P ⊂_{1/4} L`.
    pub host: usize,
    pub family_size: usize,
    pub witnesses: Vec<Witness>,
    /// `(1/6)2^-i|ℛ_i|`.
    pub required: Rational,
    pub count_holds: bool,
}

impl WitnessReport {
    pub fn all_hold(&self) -> bool {
        self.witnesses.iter().all(Witness::holds)
    }
}

pub(crate) fn normalize_set(p: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut p = p.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.is_empty() {
        return invalid("P is empty");
    }
    if p.last().is_some_and(|&v| v >= n) {
        return invalid("P leaves the left side");
    }
    Ok(p)
}

/// Host cluster of `P` in `ℒ_{i-1}`, after checking `P ∈_{1/4} ℒ_{i-1}` and
/// `P ∉_γ ℒ_i`.
pub(crate) fn host_for(seq: &CoreSequence, i: usize, p: &[usize], gamma: &Rational) -> Result<usize> {
    let host = match in_beta(p, seq.l_part(i - 1), &ratio(1, 4))? {
        Some(h) => h,
        None => return precondition(format!("P is not in L_{} up to 1/4", i - 1)),
    };
    if in_beta(p, seq.l_part(i), gamma)?.is_some() {
        return precondition(format!("P lies in L_{i} up to gamma = {gamma}"));
    }
    Ok(host)
}

/// Clusters `R' ∈ 𝔑_i(L)` meeting both weighted inequalities, evaluated on
/// member `m` of `𝒢_ℓ` directly.
pub fn find_irregularity_witnesses(
    seq: &CoreSequence,
    ell: usize,
    m: usize,
    i: usize,
    p: &[usize],
    gamma: &Rational,
) -> Result<WitnessReport> {
    check_levels(seq, ell, m, i)?;
    let g = seq.member_graph(ell, m);
    let p = normalize_set(p, seq.left_size())?;
    let host = host_for(seq, i, &p, gamma)?;
    witnesses_on(seq, &g, ell, m, i, &p, host, gamma)
}

fn check_levels(seq: &CoreSequence, ell: usize, m: usize, i: usize) -> Result<()> {
    if ell > seq.s() || m >= seq.members(ell) {
        return invalid(format!("no member {m} at level {ell}"));
    }
    if i == 0 || i > ell {
        return invalid(format!("level {i} outside 1..={ell}"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn witnesses_on(
    seq: &CoreSequence,
    g: &BipartiteGraph,
    ell: usize,
    m: usize,
    i: usize,
    p: &[usize],
    host: usize,
    gamma: &Rational,
) -> Result<WitnessReport> {
    let parent = seq.ancestor(ell, m, i - 1);
    let family = seq.neighbor_family(i, parent, host)?.members;
    let (li, lprev) = (seq.l_part(i), seq.l_part(i - 1));
    let mut overlap = vec![0usize; li.len()];
    for &u in p {
        overlap[li.cell_of(u)] += 1;
    }
    let max = overlap.iter().copied().max().unwrap_or(0);
    let outside = p.iter().filter(|&&u| lprev.cell_of(u) != host).count();
    let size = p.len();
    let mut witnesses = Vec::new();
    for &r in &family {
        let r_set = seq.r_part(i).cell(r);
        let mask = BitSet::from_indices(g.right(), r_set.iter().copied());
        let mut p1 = Vec::new();
        let mut p2 = 0usize;
        let mut e_pr = 0u64;
        for &u in p {
            let d = bits::and_count(g.row(u), mask.words());
            e_pr += d;
            if d == 0 {
                p1.push(u);
            } else if lprev.cell_of(u) == host {
                p2 += 1;
            }
        }
        let first = 8 * p1.len() >= size - max;
        let second = 2 * (p2 + outside) >= size;
        if !(first && second) {
            continue;
        }
        let p1_isolated = g.edges_between(&p1, r_set)? == 0;
        let p1_large = int(8 * p1.len() as u64) >= gamma * int(size as u64);
        // e(P, R)/(|P||R|) >= 2^(i-ℓ)/4
        let dense = (e_pr as u128) << (ell - i + 2) >= (size * r_set.len()) as u128;
        witnesses.push(Witness { cluster: r, p1, e_pr, p1_isolated, p1_large, dense });
    }
    let required = ratio(1, 6) * pow2(-(i as i64)) * int(seq.r_part(i).len() as u64);
    let count_holds = int(witnesses.len() as u64) >= required;
    Ok(WitnessReport { level: ell, member: m, i, host, family_size: family.len(), witnesses, required, count_holds })
}

/// The same count through `check_one_twelve` on the quotient `G̃_i`, with
/// `λ_{L'} = |P ∩ L'|/|P|`.
pub fn one_twelve_for(seq: &CoreSequence, ell: usize, m: usize, i: usize, p: &[usize]) -> Result<OneTwelveReport> {
    check_levels(seq, ell, m, i)?;
    let p = normalize_set(p, seq.left_size())?;
    let host = match in_beta(&p, seq.l_part(i - 1), &ratio(1, 4))? {
        Some(h) => h,
        None => return precondition(format!("P is not in L_{} up to 1/4", i - 1)),
    };
    let anc = seq.ancestor(ell, m, i);
    let li = seq.l_part(i);
    let mut w = vec![0u64; li.len()];
    for &u in &p {
        w[li.cell_of(u)] += 1;
    }
    let gamma = seq.effective_gamma(i, anc);
    let n_l = seq.neighbor_family(i, anc / 2, host)?.members;
    let l_members = seq.l_children(i)[host].clone();
    let ctx = OneTwelveContext { level: i as u32, quotient: seq.quotient(i, anc), gamma: &gamma, l_members: &l_members, n_l: &n_l };
    check_one_twelve(&ctx, &Weights::new(w)?)
}
