use crate::balanced::{sample_balanced, BalanceSpec, BalancedGraph, OnExhaustion, SampleOptions};
use crate::bits::BitSet;
use crate::core_construction::GrowthProfile;
use crate::error::{invalid, precondition, Result};
use crate::exact::{Rational, Real};
use crate::graphs::BipartiteGraph;
use crate::partitions::VertexPartition;
use crate::seed;

/// The balanced graph `Γ_i` that splits one member of `𝒢_{i-1}`.
#[derive(Clone, Debug)]
pub struct GammaRecord {
    pub level: usize,
    /// Index of the split member in `𝒢_{i-1}`.
    pub parent: usize,
    pub seed: u64,
    pub alpha: Real,
    pub beta: Rational,
    pub balanced: BalancedGraph,
}

/// `𝒢₀ ≻ 𝒢₁ ≻ … ≻ 𝒢_s` with all quotients.
///
/// Member `m` of `𝒢_j` has children `2m` (its intersection with `Γ_{j+1}`)
/// and `2m + 1` (the remainder) in `𝒢_{j+1}`.
#[derive(Clone, Debug)]
pub struct CoreSequence {
    pub(crate) profile: GrowthProfile,
    pub(crate) seed: u64,
    /// `ℒ_0 … ℒ_s`, with `ℒ_0` trivial.
    pub(crate) l_parts: Vec<VertexPartition>,
    pub(crate) r_parts: Vec<VertexPartition>,
    /// `parent[i][c]`: the `ℒ_{i-1}` cluster holding cluster `c` of `ℒ_i`.
    pub(crate) l_parent: Vec<Vec<usize>>,
    pub(crate) r_parent: Vec<Vec<usize>>,
    /// `quotients[j][m]`: `G̃` on `(ℒ_j, ℛ_j)` for member `m` of `𝒢_j`.
    pub(crate) quotients: Vec<Vec<BipartiteGraph>>,
    /// `gammas[i - 1][m]` splits member `m` of `𝒢_{i-1}`.
    pub(crate) gammas: Vec<Vec<GammaRecord>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborFamily {
    pub level: usize,
    /// Member of `𝒢_{i-1}` whose quotient defines adjacency.
    pub parent: usize,
    /// Cluster of `ℒ_{i-1}`.
    pub l: usize,
    /// Sorted `ℛ_i` clusters.
    pub members: Vec<usize>,
}

/// Contiguous equal blocks for every level of `profile`.
pub fn default_parts(profile: &GrowthProfile) -> Result<(Vec<VertexPartition>, Vec<VertexPartition>)> {
    profile.validate()?;
    let n = profile.left_size()?;
    let m = profile.right_size();
    let l = profile.l_sizes()?.iter().map(|&c| VertexPartition::blocks(n, c)).collect::<Result<Vec<_>>>()?;
    let r = profile.r_sizes.iter().map(|&c| VertexPartition::blocks(m, c)).collect::<Result<Vec<_>>>()?;
    Ok((l, r))
}

pub(crate) fn parents(fine: &VertexPartition, coarse: &VertexPartition) -> Vec<usize> {
    fine.cells().iter().map(|c| coarse.cell_of(c[0])).collect()
}

fn check_chain(parts: &[VertexPartition], sizes: &[usize], ground: usize, side: &str) -> Result<()> {
    if parts.len() != sizes.len() {
        return invalid(format!("{} {side} partitions for {} levels", parts.len(), sizes.len()));
    }
    for (i, p) in parts.iter().enumerate() {
        if p.ground_size() != ground {
            return invalid(format!("{side}_{} has ground size {}, expected {ground}", i + 1, p.ground_size()));
        }
        if p.len() != sizes[i] {
            return invalid(format!("{side}_{} has {} cells, expected {}", i + 1, p.len(), sizes[i]));
        }
        if !p.is_equitable() {
            return precondition(format!("{side}_{} is not an equipartition", i + 1));
        }
        if i > 0 && !p.refines(&parts[i - 1]) {
            return precondition(format!("{side}_{} does not refine {side}_{i}", i + 1));
        }
    }
    Ok(())
}

/// Builds the chain. `l_parts` and `r_parts` hold levels `1..=s`.
pub fn build_core_sequence(
    profile: &GrowthProfile,
    l_parts: &[VertexPartition],
    r_parts: &[VertexPartition],
    seed: u64,
) -> Result<CoreSequence> {
    profile.validate()?;
    let n = profile.left_size()?;
    let m = profile.right_size();
    check_chain(l_parts, &profile.l_sizes()?, n, "L")?;
    check_chain(r_parts, &profile.r_sizes, m, "R")?;
    let mut ls = vec![VertexPartition::trivial(n)?];
    ls.extend_from_slice(l_parts);
    let mut rs = vec![VertexPartition::trivial(m)?];
    rs.extend_from_slice(r_parts);
    let s = profile.s();
    let mut l_parent = vec![Vec::new()];
    let mut r_parent = vec![Vec::new()];
    for i in 1..=s {
        l_parent.push(parents(&ls[i], &ls[i - 1]));
        r_parent.push(parents(&rs[i], &rs[i - 1]));
    }
    let mut seq = CoreSequence {
        profile: profile.clone(),
        seed,
        l_parts: ls,
        r_parts: rs,
        l_parent,
        r_parent,
        quotients: vec![vec![BipartiteGraph::complete(1, 1)]],
        gammas: Vec::new(),
    };
    let opts = SampleOptions {
        max_retries: profile.max_retries,
        on_exhaustion: if profile.keep_unaccepted { OnExhaustion::KeepLast } else { OnExhaustion::Error },
    };
    for i in 1..=s {
        let mut next = Vec::with_capacity(2 * seq.quotients[i - 1].len());
        let mut gammas = Vec::with_capacity(seq.quotients[i - 1].len());
        for parent in 0..seq.quotients[i - 1].len() {
            let spec = seq.balance_spec(i, parent)?;
            let gseed = seed::derive(seed, &["core", &i.to_string(), &parent.to_string()]);
            let balanced = sample_balanced(&spec, gseed, &opts)?;
            let lifted = seq.lift(i, &seq.quotients[i - 1][parent]);
            next.push(lifted.intersection(&balanced.graph)?);
            next.push(lifted.difference(&balanced.graph)?);
            gammas.push(GammaRecord { level: i, parent, seed: gseed, alpha: spec.alpha, beta: spec.beta, balanced });
        }
        seq.quotients.push(next);
        seq.gammas.push(gammas);
    }
    Ok(seq)
}

impl CoreSequence {
    pub fn profile(&self) -> &GrowthProfile {
        &self.profile
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn s(&self) -> usize {
        self.profile.s()
    }

    pub fn left_size(&self) -> usize {
        self.l_parts[0].ground_size()
    }

    pub fn right_size(&self) -> usize {
        self.r_parts[0].ground_size()
    }

    /// `ℒ_i`, with `ℒ_0 = {𝐋}`.
    pub fn l_part(&self, i: usize) -> &VertexPartition {
        &self.l_parts[i]
    }

    pub fn r_part(&self, i: usize) -> &VertexPartition {
        &self.r_parts[i]
    }

    pub fn l_parent(&self, i: usize) -> &[usize] {
        &self.l_parent[i]
    }

    pub fn r_parent(&self, i: usize) -> &[usize] {
        &self.r_parent[i]
    }

    pub fn members(&self, j: usize) -> usize {
        self.quotients[j].len()
    }

    pub fn quotient(&self, j: usize, m: usize) -> &BipartiteGraph {
        &self.quotients[j][m]
    }

    /// Mutable access, used to plant corruptions.
    pub fn quotient_mut(&mut self, j: usize, m: usize) -> &mut BipartiteGraph {
        &mut self.quotients[j][m]
    }

    /// `Γ_i` splitting member `parent` of `𝒢_{i-1}`.
    pub fn gamma(&self, i: usize, parent: usize) -> &GammaRecord {
        &self.gammas[i - 1][parent]
    }

    /// Every `Γ_i` passed verification.
    pub fn all_accepted(&self) -> bool {
        self.gammas.iter().flatten().all(|g| g.balanced.accepted)
    }

    pub fn gamma_records(&self) -> impl Iterator<Item = &GammaRecord> {
        self.gammas.iter().flatten()
    }

    /// The member of `𝒢_i` containing member `m` of `𝒢_j`, `i <= j`.
    pub fn ancestor(&self, j: usize, m: usize, i: usize) -> usize {
        m >> (j - i)
    }

    /// `Γ` of the split that produced member `m` of `𝒢_i`, complemented
    /// for a remainder so that `G̃_i = G̃_{i-1} ∩ Γ` either way.
    pub fn effective_gamma(&self, i: usize, m: usize) -> BipartiteGraph {
        let g = &self.gamma(i, m / 2).balanced.graph;
        if m.is_multiple_of(2) {
            g.clone()
        } else {
            g.complement()
        }
    }

    /// Children of each `ℒ_{i-1}` cluster.
    pub fn l_children(&self, i: usize) -> Vec<Vec<usize>> {
        children(&self.l_parent[i], self.l_parts[i - 1].len())
    }

    pub fn r_children(&self, i: usize) -> Vec<Vec<usize>> {
        children(&self.r_parent[i], self.r_parts[i - 1].len())
    }

    /// `q` on `(ℒ_{i-1}, ℛ_{i-1})` viewed on `(ℒ_i, ℛ_i)`.
    pub(crate) fn lift(&self, i: usize, q: &BipartiteGraph) -> BipartiteGraph {
        let rc = self.r_children(i);
        let nr = self.r_parts[i].len();
        let rows: Vec<BitSet> = (0..q.left())
            .map(|l| BitSet::from_indices(nr, q.neighbors_iter(l).flat_map(|r| rc[r].iter().copied())))
            .collect();
        let mut out = BipartiteGraph::empty(self.l_parts[i].len(), nr);
        for (c, &p) in self.l_parent[i].iter().enumerate() {
            out.row_mut(c).copy_from_slice(rows[p].words());
        }
        out
    }

    /// `𝔑_i(L)` for `L ∈ ℒ_{i-1}` in member `parent` of `𝒢_{i-1}`.
    pub fn neighbor_family(&self, i: usize, parent: usize, l: usize) -> Result<NeighborFamily> {
        if i == 0 || i > self.s() {
            return invalid(format!("level {i} outside 1..={}", self.s()));
        }
        if parent >= self.members(i - 1) {
            return invalid(format!("member {parent} outside G_{}", i - 1));
        }
        if l >= self.l_parts[i - 1].len() {
            return invalid(format!("cluster {l} outside L_{}", i - 1));
        }
        let rc = self.r_children(i);
        let mut members: Vec<usize> =
            self.quotients[i - 1][parent].neighbors_iter(l).flat_map(|r| rc[r].iter().copied()).collect();
        members.sort_unstable();
        Ok(NeighborFamily { level: i, parent, l, members })
    }

    /// The balanced-graph parameters for splitting member `parent` of `𝒢_{i-1}`.
    pub fn balance_spec(&self, i: usize, parent: usize) -> Result<BalanceSpec> {
        let x = VertexPartition::from_labels(&self.l_parent[i])?;
        let y = VertexPartition::from_labels(&self.r_parent[i])?;
        let mut f: Vec<Vec<usize>> = (0..self.l_parts[i - 1].len())
            .map(|l| self.neighbor_family(i, parent, l).map(|nf| nf.members))
            .collect::<Result<_>>()?;
        f.sort();
        f.dedup();
        BalanceSpec::new(x, y, f, self.profile.alpha_at(i)?, self.profile.beta_at(i))
    }

    /// For every pair `(u, v) ∈ 𝐋 × 𝐑`, at `u·|𝐑| + v`, the member of `𝒢_j`
    /// holding it.
    pub fn pair_labels(&self, j: usize) -> Vec<usize> {
        let (lp, rp) = (&self.l_parts[j], &self.r_parts[j]);
        let nr = rp.len();
        let mut table = vec![0usize; lp.len() * nr];
        for (m, q) in self.quotients[j].iter().enumerate() {
            for (l, r) in q.edges() {
                table[l * nr + r] = m;
            }
        }
        let mut out = Vec::with_capacity(self.left_size() * self.right_size());
        for u in 0..self.left_size() {
            let row = lp.cell_of(u) * nr;
            out.extend((0..self.right_size()).map(|v| table[row + rp.cell_of(v)]));
        }
        out
    }

    /// Member `m` of `𝒢_j` as a graph on `(𝐋, 𝐑)`.
    pub fn member_graph(&self, j: usize, m: usize) -> BipartiteGraph {
        let q = &self.quotients[j][m];
        let (lp, rp) = (&self.l_parts[j], &self.r_parts[j]);
        let nr = self.right_size();
        let rows: Vec<BitSet> = (0..q.left())
            .map(|l| BitSet::from_indices(nr, q.neighbors_iter(l).flat_map(|r| rp.cell(r).iter().copied())))
            .collect();
        let mut g = BipartiteGraph::empty(self.left_size(), nr);
        for u in 0..self.left_size() {
            g.row_mut(u).copy_from_slice(rows[lp.cell_of(u)].words());
        }
        g
    }
}

fn children(parent: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); count];
    for (c, &p) in parent.iter().enumerate() {
        out[p].push(c);
    }
    out
}
