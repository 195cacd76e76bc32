use crate::error::{invalid, precondition, Result};
use crate::exact::{pow2, Rational};
use crate::graphs::KPartiteKGraph;
use crate::hypergraph_construction::{block_chain, build_inductive_family, pasted_density, InductiveFamily, ParamSchedule};
use crate::partitions::{refines_beta, VertexPartition};
use crate::seed;

/// Edges `{x, x+1, …, x+k-1}` mod `2k`, in that order, for `x = 0..2k`.
pub fn tight_cycle(k: usize) -> Vec<Vec<usize>> {
    (0..2 * k).map(|x| (0..k).map(|j| (x + j) % (2 * k)).collect()).collect()
}

/// `H` on classes `(𝐕⁰ ∪ 𝐕ᵏ, 𝐕¹ ∪ 𝐕^(k+1), …)`. Vertex `v` of `𝐕^h` is
/// local index `(h / k)·n + v` of class `h mod k`, and pasted vertex `h·n + v`.
#[derive(Clone, Debug)]
pub struct PastedInstance {
    pub k: usize,
    pub s: usize,
    pub n: usize,
    pub families: Vec<InductiveFamily>,
    /// Member of `ℋ_s` taken from each family.
    pub selected: Vec<usize>,
    /// `H_e` on `(𝐕^x, …, 𝐕^(x+k-1))`.
    pub pieces: Vec<KPartiteKGraph>,
    pub h: KPartiteKGraph,
    /// `chain[i][h] = 𝒱^(i+1)_h`.
    pub chain: Vec<Vec<VertexPartition>>,
    /// `𝒱₀ = 𝒱¹` on the pasted vertices.
    pub v0: VertexPartition,
}

/// Pastes with the first member of every `ℋ_s`.
pub fn build_pasted_instance(k: usize, s: usize, sched: &ParamSchedule, master: u64) -> Result<PastedInstance> {
    build_pasted_instance_with(k, s, sched, master, &vec![0; 2 * k])
}

pub fn build_pasted_instance_with(
    k: usize,
    s: usize,
    sched: &ParamSchedule,
    master: u64,
    pick: &[usize],
) -> Result<PastedInstance> {
    if k < 2 {
        return invalid("pasting needs k >= 2");
    }
    if pick.len() != 2 * k {
        return invalid(format!("need one member choice per cycle edge, got {}", pick.len()));
    }
    let m = sched.levels_used(k, s)?;
    let n = sched.t_usize(m)?;
    let chain = block_chain(sched, 2 * k, n, m)?;
    let mut families = Vec::with_capacity(2 * k);
    let mut pieces = Vec::with_capacity(2 * k);
    let mut codes = Vec::new();
    let big = vec![2 * n; k];
    let radix = crate::graphs::MixedRadix::new(&big)?;
    for (x, edge) in tight_cycle(k).into_iter().enumerate() {
        let sub: Vec<Vec<VertexPartition>> =
            chain.iter().map(|lvl| edge.iter().map(|&h| lvl[h].clone()).collect()).collect();
        let fam = build_inductive_family(k, s, n, &sub, sched, seed::derive(master, &["paste", &x.to_string()]))?;
        if pick[x] >= fam.members(s) {
            return invalid(format!("edge {x}: member {} outside H_{s}", pick[x]));
        }
        let piece = fam.member(s, pick[x])?;
        let mut tuple = vec![0; k];
        for t in piece.tuples() {
            for (j, &h) in edge.iter().enumerate() {
                tuple[h % k] = (h / k) * n + t[j];
            }
            codes.push(radix.encode(&tuple)?);
        }
        families.push(fam);
        pieces.push(piece);
    }
    let h = KPartiteKGraph::from_codes(&big, codes)?;
    let labels: Vec<usize> = (0..2 * k).flat_map(|c| chain[0][c].labels().iter().map(move |&l| c * n + l).collect::<Vec<_>>()).collect();
    let v0 = VertexPartition::from_labels(&labels)?;
    Ok(PastedInstance { k, s, n, families, selected: pick.to_vec(), pieces, h, chain, v0 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PastedReport {
    pub density: Rational,
    pub expected: Rational,
    /// `e(H) = Σ e(H_e)`, so the pieces are edge-disjoint.
    pub disjoint: bool,
    pub piece_densities: Vec<Rational>,
    pub equal_classes: bool,
    pub v0_cells: usize,
    /// `2k·t(1)`.
    pub v0_bound: usize,
}

impl PastedReport {
    pub fn holds(&self, s: usize) -> bool {
        self.density == self.expected
            && self.disjoint
            && self.piece_densities.iter().all(|d| *d == pow2(-(s as i64)))
            && self.equal_classes
            && self.v0_cells <= self.v0_bound
    }
}

pub fn verify_pasted(inst: &PastedInstance, sched: &ParamSchedule) -> Result<PastedReport> {
    let total: u64 = inst.pieces.iter().map(KPartiteKGraph::edge_count).sum();
    let sizes = inst.h.sizes();
    Ok(PastedReport {
        density: inst.h.density(),
        expected: pasted_density(inst.k, inst.s),
        disjoint: total == inst.h.edge_count(),
        piece_densities: inst.pieces.iter().map(KPartiteKGraph::density).collect(),
        equal_classes: sizes.iter().all(|&x| x == sizes[0]),
        v0_cells: inst.v0.len(),
        v0_bound: 2 * inst.k * sched.t_usize(1)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaStar {
    /// `β(h)` for `h = 0..2k`; 0 when `P_h` is not even `c`-inside `𝒱¹_h`.
    pub beta: Vec<usize>,
    pub beta_star: usize,
    /// First `x` with `β(x) = β*`.
    pub x: usize,
    /// The cycle edge starting at `x`.
    pub edge: Vec<usize>,
    /// `K = A_k(s) + 1`, capped at the chain length.
    pub cap: usize,
}

/// `β(h)`: the largest `i <= K` with `P_h ≺_c 𝒱^i_h`, `c = 2^-9`. `p1` lives
/// on the pasted vertices.
pub fn beta_star_analysis(inst: &PastedInstance, sched: &ParamSchedule, p1: &VertexPartition) -> Result<BetaStar> {
    let (k, n) = (inst.k, inst.n);
    if p1.ground_size() != 2 * k * n {
        return invalid("partition is not on the pasted vertices");
    }
    let c = pow2(-9);
    let cap = (sched.a_k_usize(k, inst.s)? + 1).min(inst.chain.len());
    let mut beta = Vec::with_capacity(2 * k);
    for h in 0..2 * k {
        let range: Vec<usize> = (h * n..(h + 1) * n).collect();
        let ph = match p1.restrict(&range) {
            Ok(p) => p,
            Err(_) => return precondition(format!("P does not refine the class split at V^{h}")),
        };
        let mut b = 0;
        for i in 1..=cap {
            if refines_beta(&ph, &inst.chain[i - 1][h], &c)?.holds {
                b = i;
            }
        }
        beta.push(b);
    }
    let beta_star = *beta.iter().min().unwrap();
    let x = beta.iter().position(|&b| b == beta_star).unwrap();
    Ok(BetaStar { beta, beta_star, x, edge: tight_cycle(k)[x].clone(), cap })
}
