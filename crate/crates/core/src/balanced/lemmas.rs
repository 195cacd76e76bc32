use crate::balanced::{beta_balanced_on, find_involution};
use crate::error::{invalid, precondition, Result};
use crate::exact::{pow2, ratio, Rational};
use crate::graphs::BipartiteGraph;
use crate::partitions::VertexPartition;

/// Nonnegative weights `λ_x = w_x / Σw`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    w: Vec<u64>,
    total: u64,
    max: u64,
}

impl Weights {
    pub fn new(w: Vec<u64>) -> Result<Self> {
        let total: u64 = w.iter().try_fold(0u64, |a, &b| a.checked_add(b)).ok_or_else(|| {
            crate::error::Error::Invalid("weights overflow".into())
        })?;
        if total == 0 {
            return invalid("weights must have positive total");
        }
        let max = *w.iter().max().unwrap();
        Ok(Weights { w, total, max })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `‖λ‖∞` as an exact rational.
    pub fn sup_norm(&self) -> Rational {
        ratio(self.max as i64, self.total as i64)
    }

    /// `8·s >= T − max`, i.e. `s/T >= (1 − ‖λ‖∞)/8`.
    fn meets_eighth(&self, s: u64) -> bool {
        8 * s as u128 >= (self.total - self.max) as u128
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneSixReport {
    pub qualifying: Vec<usize>,
    pub y_size: usize,
    /// `count >= |𝐘|/6`.
    pub holds: bool,
}

/// Vertices `y` with `min(Σ_{N(y)} λ, Σ_{𝐗∖N(y)} λ) >= (1 − ‖λ‖∞)/8`.
/// Fails unless `gamma` is `1/16`-balanced.
pub fn check_one_six(gamma: &BipartiteGraph, lambda: &Weights) -> Result<OneSixReport> {
    if lambda.len() != gamma.left() {
        return invalid("one weight per X vertex required");
    }
    let all: Vec<usize> = (0..gamma.right()).collect();
    if beta_balanced_on(gamma, &all, &ratio(1, 16)).is_some() {
        return precondition("graph is not 1/16-balanced");
    }
    let t = gamma.transpose();
    let qualifying: Vec<usize> = (0..gamma.right())
        .filter(|&y| {
            let inside: u64 = t.neighbors_iter(y).map(|x| lambda.w[x]).sum();
            lambda.meets_eighth(inside.min(lambda.total - inside))
        })
        .collect();
    let holds = 6 * qualifying.len() >= gamma.right();
    Ok(OneSixReport { qualifying, y_size: gamma.right(), holds })
}

/// Level-`i` data around one cluster `L ∈ ℒ_{i-1}`.
#[derive(Clone, Copy, Debug)]
pub struct OneTwelveContext<'a> {
    pub level: u32,
    /// `G̃_i` on `(ℒ_i, ℛ_i)`.
    pub quotient: &'a BipartiteGraph,
    /// `Γ_i` on `(ℒ_i, ℛ_i)`.
    pub gamma: &'a BipartiteGraph,
    /// Clusters of `ℒ_i` inside `L`.
    pub l_members: &'a [usize],
    /// `𝔑_i(L)`.
    pub n_l: &'a [usize],
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneTwelveReport {
    /// Clusters `R' ∈ 𝔑_i(L)` meeting both inequalities.
    pub qualifying: Vec<usize>,
    /// `(1/6)·2^{-i}·|ℛ_i|`.
    pub required: Rational,
    /// `Γ_i[ℒ_i, 𝔑_i(L)]` is `1/16`-balanced and complement-closed.
    pub context_holds: bool,
    /// The count bound, asserted only when the context holds.
    pub bound_holds: Option<bool>,
}

/// Evaluates, for each `R' ∈ 𝔑_i(L)`,
/// `Σ_{L' ∉ N_i(R')} λ >= (1 − ‖λ‖∞)/8` and
/// `Σ_{L' ∈ N_i(R'), L' ⊆ L} λ >= 1/2 − Σ_{L' ⊄ L} λ`.
pub fn check_one_twelve(ctx: &OneTwelveContext<'_>, lambda: &Weights) -> Result<OneTwelveReport> {
    let q = ctx.quotient;
    if ctx.gamma.left() != q.left() || ctx.gamma.right() != q.right() {
        return invalid("quotient and gamma differ in shape");
    }
    if lambda.len() != q.left() {
        return invalid("one weight per cluster of L_i required");
    }
    if ctx.l_members.iter().any(|&l| l >= q.left()) || ctx.n_l.iter().any(|&r| r >= q.right()) {
        return invalid("context clusters out of range");
    }
    let mut in_l = vec![false; q.left()];
    for &l in ctx.l_members {
        in_l[l] = true;
    }
    let outside_l: u64 = (0..q.left()).filter(|&l| !in_l[l]).map(|l| lambda.w[l]).sum();
    let t = q.transpose();
    let mut qualifying = Vec::new();
    for &r in ctx.n_l {
        let mut nbr = 0u64;
        let mut nbr_in_l = 0u64;
        for l in t.neighbors_iter(r) {
            nbr += lambda.w[l];
            if in_l[l] {
                nbr_in_l += lambda.w[l];
            }
        }
        let first = lambda.meets_eighth(lambda.total - nbr);
        let second = 2 * (nbr_in_l as u128 + outside_l as u128) >= lambda.total as u128;
        if first && second {
            qualifying.push(r);
        }
    }
    let sub = ctx.gamma.induced(&(0..q.left()).collect::<Vec<_>>(), ctx.n_l);
    let all: Vec<usize> = (0..sub.right()).collect();
    let context_holds = match VertexPartition::trivial(sub.right()) {
        Ok(whole) => beta_balanced_on(&sub, &all, &ratio(1, 16)).is_none() && find_involution(&sub, &whole).is_ok(),
        Err(_) => false,
    };
    let required = ratio(1, 6) * pow2(-(ctx.level as i64)) * Rational::from_integer(q.right().into());
    let bound_holds = context_holds.then(|| Rational::from_integer(qualifying.len().into()) >= required);
    Ok(OneTwelveReport { qualifying, required, context_holds, bound_holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 4 x-vertices, 6 y-vertices: every pair of x's is separated by 4 y's.
    fn square() -> BipartiteGraph {
        let cols: [[usize; 2]; 6] = [[0, 1], [2, 3], [0, 2], [1, 3], [0, 3], [1, 2]];
        let edges = cols.iter().enumerate().flat_map(|(y, xs)| xs.iter().map(move |&x| (x, y)));
        BipartiteGraph::from_edges(4, 6, edges).unwrap()
    }

    #[test]
    fn concentrated_lambda_all_qualify() {
        let g = square();
        let r = check_one_six(&g, &Weights::new(vec![5, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(r.qualifying.len(), 6);
        assert!(r.holds);
    }

    #[test]
    fn two_point_lambda() {
        // λ uniform on {0,1}: threshold (1 − 1/2)/8 = 1/16. A column
        // qualifies iff it separates 0 and 1.
        let g = square();
        let r = check_one_six(&g, &Weights::new(vec![1, 1, 0, 0]).unwrap()).unwrap();
        assert_eq!(r.qualifying, vec![2, 3, 4, 5]);
    }

    #[test]
    fn unbalanced_graph_rejected() {
        let g = BipartiteGraph::complete(3, 4);
        assert!(check_one_six(&g, &Weights::uniform(3).unwrap()).is_err());
    }

    #[test]
    fn weights_validation() {
        assert!(Weights::new(vec![0, 0]).is_err());
        assert_eq!(Weights::new(vec![1, 3]).unwrap().sup_norm(), ratio(3, 4));
    }
}
