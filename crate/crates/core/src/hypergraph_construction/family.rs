use crate::core_construction::{build_core_sequence, verify_structure, CoreSequence, GrowthProfile};
use crate::error::{invalid, precondition, Error, Result};
use crate::exact::{pow2, Rational};
use crate::graphs::{aux_graph, lift_graph_to_kgraph, KPartiteKGraph};
use crate::hypergraph_construction::ParamSchedule;
use crate::partitions::VertexPartition;
use crate::seed;

/// `chain[i][h]` is `V_h(𝒱_{i+1})`: nested blocks of `t(i+1)` cells on a
/// class of size `n`, for `k` classes.
pub fn block_chain(sched: &ParamSchedule, k: usize, n: usize, m: usize) -> Result<Vec<Vec<VertexPartition>>> {
    (1..=m)
        .map(|i| {
            let t = sched.t_usize(i)?;
            if t == 0 || !n.is_multiple_of(t) {
                return invalid(format!("t({i}) = {t} does not divide the class size {n}"));
            }
            let p = VertexPartition::blocks(n, t)?;
            Ok(vec![p; k])
        })
        .collect()
}

/// `ℋ_1 ≻ … ≻ ℋ_s` on `𝐕¹ × … × 𝐕ᵏ`, with the lower-uniformity family it
/// was built from.
#[derive(Clone, Debug)]
pub struct InductiveFamily {
    pub k: usize,
    pub s: usize,
    /// Common class size.
    pub n: usize,
    pub seed: u64,
    /// `chain[i][h] = V_h(𝒱_{i+1})`.
    pub chain: Vec<Vec<VertexPartition>>,
    /// The core chain on `(𝐕¹ × … × 𝐕^(k-1), 𝐕ᵏ)`.
    pub core: CoreSequence,
    pub sub: Option<Box<InductiveFamily>>,
    /// Level of the lower family used as `ℒ_j`: `A_k*(j)`, or `j + 1` of the
    /// vertex chain when `k = 2`.
    pub f_levels: Vec<usize>,
    /// Level of `𝒱` used as `ℛ_j`: `A_k(j)`.
    pub v_levels: Vec<usize>,
}

fn profile_for(sched: &ParamSchedule, r_sizes: Vec<usize>, e: Vec<usize>, bl: usize, br: usize) -> GrowthProfile {
    let s = r_sizes.len();
    GrowthProfile {
        r_sizes,
        e,
        blowup_l: bl,
        blowup_r: br,
        alpha: vec![sched.alpha.clone(); s],
        beta: vec![sched.beta.clone(); s],
        require_quadrupling: false,
        max_retries: sched.max_retries,
        keep_unaccepted: false,
        strict: false,
    }
}

fn check_increasing(v: &[usize], what: &str, max: usize) -> Result<()> {
    if v.first().is_some_and(|&x| x == 0) || v.windows(2).any(|w| w[0] >= w[1]) || v.last().is_some_and(|&x| x > max) {
        return Err(Error::Invalid(format!("{what} = {v:?} must increase within 1..={max}")));
    }
    Ok(())
}

/// Builds the family for `k` classes of size `n` from `chain` (see
/// [`block_chain`]).
pub fn build_inductive_family(
    k: usize,
    s: usize,
    n: usize,
    chain: &[Vec<VertexPartition>],
    sched: &ParamSchedule,
    master: u64,
) -> Result<InductiveFamily> {
    if k < 2 {
        return invalid("the induction starts at k = 2");
    }
    if s == 0 {
        return invalid("s must be at least 1");
    }
    if chain.iter().any(|lvl| lvl.len() < k || lvl.iter().any(|p| p.ground_size() != n)) {
        return invalid(format!("chain must give {k} partitions of {n} vertices per level"));
    }
    for (i, lvl) in chain.iter().enumerate() {
        let t = sched.t_usize(i + 1)?;
        if lvl[..k].iter().any(|p| p.len() != t || !p.is_equitable()) {
            return precondition(format!("level {} of the chain must be equitable with t({}) = {t} cells", i + 1, i + 1));
        }
        if i > 0 && (0..k).any(|h| !lvl[h].refines(&chain[i - 1][h])) {
            return precondition(format!("level {} of the chain does not refine level {i}", i + 1));
        }
    }
    let m = chain.len();
    let core_seed = seed::derive(master, &["family", &k.to_string(), "core"]);
    if k == 2 {
        if m < s + 1 {
            return precondition(format!("k = 2 with s = {s} needs {} chain levels, got {m}", s + 1));
        }
        let r_sizes: Vec<usize> = (1..=s).map(|j| sched.t_usize(j)).collect::<Result<_>>()?;
        let e = (1..=s)
            .map(|j| {
                sched.e(j)?.to_u64().map(|x| x as usize).ok_or_else(|| Error::Regime(format!("e({j}) cannot be materialized")))
            })
            .collect::<Result<Vec<_>>>()?;
        let tl = sched.t_usize(s + 1)?;
        let profile = profile_for(sched, r_sizes.clone(), e, n / tl, n / r_sizes[s - 1]);
        let l: Vec<VertexPartition> = (1..=s).map(|j| chain[j][0].clone()).collect();
        let r: Vec<VertexPartition> = (1..=s).map(|j| chain[j - 1][1].clone()).collect();
        let core = build_core_sequence(&profile, &l, &r, core_seed)?;
        return Ok(InductiveFamily {
            k,
            s,
            n,
            seed: master,
            chain: chain.iter().map(|lvl| lvl[..k].to_vec()).collect(),
            core,
            sub: None,
            f_levels: (2..=s + 1).collect(),
            v_levels: (1..=s).collect(),
        });
    }
    let s_sub = sched.a_k_star_usize(k, s)?;
    let f_levels: Vec<usize> = (1..=s).map(|j| sched.a_k_star_usize(k, j)).collect::<Result<_>>()?;
    let v_levels: Vec<usize> = (1..=s).map(|j| sched.a_k_usize(k, j)).collect::<Result<_>>()?;
    check_increasing(&f_levels, &format!("A_{k}*"), s_sub)?;
    check_increasing(&v_levels, &format!("A_{k}"), m)?;
    let sub_chain: Vec<Vec<VertexPartition>> = chain.iter().map(|lvl| lvl[..k - 1].to_vec()).collect();
    let sub = build_inductive_family(k - 1, s_sub, n, &sub_chain, sched, seed::derive(master, &["family", &k.to_string(), "sub"]))?;
    let mut r_sizes = Vec::with_capacity(s);
    let mut e = Vec::with_capacity(s);
    let mut l = Vec::with_capacity(s);
    let mut r = Vec::with_capacity(s);
    for j in 0..s {
        let rp = chain[v_levels[j] - 1][k - 1].clone();
        let size = rp.len();
        if !size.is_multiple_of(f_levels[j]) {
            return Err(Error::Invalid(format!(
                "|V_(j)| = {size} is not a multiple of A_{k}*({}) = {}",
                j + 1,
                f_levels[j]
            )));
        }
        r_sizes.push(size);
        e.push(size / f_levels[j]);
        l.push(VertexPartition::from_labels(&sub.core.pair_labels(f_levels[j]))?);
        r.push(rp);
    }
    let left = l[0].ground_size();
    let profile = profile_for(sched, r_sizes.clone(), e, left >> f_levels[s - 1], n / r_sizes[s - 1]);
    let core = build_core_sequence(&profile, &l, &r, core_seed)?;
    Ok(InductiveFamily {
        k,
        s,
        n,
        seed: master,
        chain: chain.iter().map(|lvl| lvl[..k].to_vec()).collect(),
        core,
        sub: Some(Box::new(sub)),
        f_levels,
        v_levels,
    })
}

impl InductiveFamily {
    pub fn members(&self, j: usize) -> usize {
        self.core.members(j)
    }

    /// `H_G` for member `m` of `𝒢_j`.
    pub fn member(&self, j: usize, m: usize) -> Result<KPartiteKGraph> {
        if j == 0 || j > self.s || m >= self.members(j) {
            return invalid(format!("no member {m} at level {j}"));
        }
        lift_graph_to_kgraph(&self.core.member_graph(j, m), &vec![self.n; self.k - 1])
    }

    /// The family at uniformity `h`, `2 <= h <= k`.
    pub fn at(&self, h: usize) -> Option<&InductiveFamily> {
        if h == self.k {
            Some(self)
        } else {
            self.sub.as_deref().and_then(|s| s.at(h))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub k: usize,
    pub s: usize,
    /// `(j, m, density)` for members whose density is not `2^-j`.
    pub density_failures: Vec<(usize, usize, Rational)>,
    /// Members whose lift does not give back `G` along the last axis.
    pub lift_failures: Vec<(usize, usize)>,
    pub structure_holds: bool,
    /// `|𝓕_(j)| = 2^(A_k*(j))` and `|𝒱_(j)| = t(A_k(j))`.
    pub bookkeeping_failures: Vec<String>,
    pub members_checked: usize,
    pub sub: Option<Box<FamilyReport>>,
}

impl FamilyReport {
    pub fn holds(&self) -> bool {
        self.density_failures.is_empty()
            && self.lift_failures.is_empty()
            && self.structure_holds
            && self.bookkeeping_failures.is_empty()
            && self.sub.as_ref().is_none_or(|s| s.holds())
    }
}

/// Recounts every member of every level at every uniformity.
pub fn verify_family(fam: &InductiveFamily, sched: &ParamSchedule) -> Result<FamilyReport> {
    let mut density_failures = Vec::new();
    let mut lift_failures = Vec::new();
    let mut bookkeeping_failures = Vec::new();
    let mut members_checked = 0;
    for j in 1..=fam.s {
        for m in 0..fam.members(j) {
            let h = fam.member(j, m)?;
            let d = h.density();
            if d != pow2(-(j as i64)) {
                density_failures.push((j, m, d));
            }
            let g = fam.core.member_graph(j, m);
            if aux_graph(&h, fam.k - 1)?.graph != g {
                lift_failures.push((j, m));
            }
            members_checked += 1;
        }
        let lj = fam.core.l_part(j).len();
        let rj = fam.core.r_part(j).len();
        if fam.k > 2 {
            if lj != 1usize << fam.f_levels[j - 1] {
                bookkeeping_failures.push(format!("|F_({j})| = {lj}, expected 2^{}", fam.f_levels[j - 1]));
            }
        } else if lj != sched.t_usize(j + 1)? {
            bookkeeping_failures.push(format!("|L_{j}| = {lj}, expected t({})", j + 1));
        }
        let want = sched.t_usize(fam.v_levels[j - 1])?;
        if rj != want {
            bookkeeping_failures.push(format!("|V_({j})| = {rj}, expected t({}) = {want}", fam.v_levels[j - 1]));
        }
    }
    let sub = match &fam.sub {
        Some(s) => Some(Box::new(verify_family(s, sched)?)),
        None => None,
    };
    Ok(FamilyReport {
        k: fam.k,
        s: fam.s,
        density_failures,
        lift_failures,
        structure_holds: verify_structure(&fam.core).holds(),
        bookkeeping_failures,
        members_checked,
        sub,
    })
}
