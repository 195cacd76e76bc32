use crate::balanced::max_codegree;
use crate::bits::{self, BitSet};
use crate::core_construction::CoreSequence;
use crate::error::{invalid, precondition, Result};
use crate::exact::{int, pow2, Rational, Real};
use crate::graphs::BipartiteGraph;
use crate::regularity::{is_eps_regular_graph, CheckOptions, EpsVerdict, Mode};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    /// `(j, m, edges, expected)` for members with the wrong edge count.
    pub density_failures: Vec<(usize, usize, u64, u64)>,
    /// `(j, m)` whose children do not partition it.
    pub chain_failures: Vec<(usize, usize)>,
    /// `(j, m, L, R, e(L, R))` with `0 < d(L, R) < 1`, or disagreeing with the quotient.
    pub blowup_failures: Vec<(usize, usize, usize, usize, u64)>,
    /// `(i, parent, L, |𝔑_i(L)|)` off `|ℛ_i|/2^(i-1)`.
    pub family_failures: Vec<(usize, usize, usize, usize)>,
    pub members_checked: usize,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.density_failures.is_empty()
            && self.chain_failures.is_empty()
            && self.blowup_failures.is_empty()
            && self.family_failures.is_empty()
    }
}

/// Recounts every member on `(𝐋, 𝐑)`: edge counts, the two-way split,
/// the blowup structure and the family sizes.
pub fn verify_structure(seq: &CoreSequence) -> StructureReport {
    let mut rep = StructureReport::default();
    let total = (seq.left_size() * seq.right_size()) as u64;
    let mut prev: Vec<BipartiteGraph> = Vec::new();
    for j in 0..=seq.s() {
        let graphs: Vec<BipartiteGraph> = (0..seq.members(j)).map(|m| seq.member_graph(j, m)).collect();
        for (m, g) in graphs.iter().enumerate() {
            rep.members_checked += 1;
            let e = g.edge_count();
            if e << j != total {
                rep.density_failures.push((j, m, e, total >> j));
            }
            blowup_failures(seq, j, m, g, &mut rep.blowup_failures);
        }
        for (pm, parent) in prev.iter().enumerate() {
            let (a, b) = (&graphs[2 * pm], &graphs[2 * pm + 1]);
            let ok = a.is_edge_disjoint(b).unwrap_or(false) && a.union(b).map(|u| &u == parent).unwrap_or(false);
            if !ok {
                rep.chain_failures.push((j - 1, pm));
            }
        }
        prev = graphs;
    }
    for i in 1..=seq.s() {
        let expected = seq.r_part(i).len() >> (i - 1);
        for parent in 0..seq.members(i - 1) {
            for l in 0..seq.l_part(i - 1).len() {
                let nf = seq.neighbor_family(i, parent, l).expect("indices in range");
                if nf.members.len() != expected {
                    rep.family_failures.push((i, parent, l, nf.members.len()));
                }
            }
        }
    }
    rep
}

fn blowup_failures(seq: &CoreSequence, j: usize, m: usize, g: &BipartiteGraph, out: &mut Vec<(usize, usize, usize, usize, u64)>) {
    let (lp, rp) = (seq.l_part(j), seq.r_part(j));
    let q = seq.quotient(j, m);
    let masks: Vec<BitSet> = rp.cells().iter().map(|c| BitSet::from_indices(g.right(), c.iter().copied())).collect();
    for (li, lc) in lp.cells().iter().enumerate() {
        for (ri, mask) in masks.iter().enumerate() {
            let e = g.edges_into(lc.iter().copied(), mask);
            let full = (lc.len() * rp.cell(ri).len()) as u64;
            let consistent = if q.has_edge(li, ri) { e == full } else { e == 0 };
            if !consistent {
                out.push((j, m, li, ri, e));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorePropertiesReport {
    pub level: usize,
    pub member: usize,
    pub l: usize,
    /// `(L', R, detail)`: blocks `G_i[L, R]` that are not biregular of density 1/2.
    pub item1_failures: Vec<(usize, usize, String)>,
    /// `G_i` is biregular of density `2^-i`.
    pub whole_biregular: bool,
    /// Largest codegree with `4c <= (1 + α_i)|ℒ_i[L]|`.
    pub item2_limit: u64,
    pub item2_max: u64,
    pub item2_pairs: usize,
    /// `(R₁', R₂', codegree)` over the bound.
    pub item2_failures: Vec<(usize, usize, u64)>,
}

impl CorePropertiesReport {
    pub fn item1_holds(&self) -> bool {
        self.item1_failures.is_empty() && self.whole_biregular
    }

    pub fn item2_holds(&self) -> bool {
        self.item2_failures.is_empty()
    }

    pub fn holds(&self) -> bool {
        self.item1_holds() && self.item2_holds()
    }
}

/// Both items for member `member` of `𝒢_i` at `L ∈ ℒ_{i-1}`.
pub fn verify_core_properties(seq: &CoreSequence, i: usize, member: usize, l: usize) -> Result<CorePropertiesReport> {
    check_member(seq, i, member)?;
    if i == 0 {
        return invalid("core properties start at level 1");
    }
    let g = seq.member_graph(i, member);
    let whole = whole_biregular(&g, i);
    core_properties_on(seq, &g, whole, &seq.l_children(i), i, member, l)
}

/// All members of all levels at every `L`.
pub fn verify_all_core_properties(seq: &CoreSequence) -> Result<Vec<CorePropertiesReport>> {
    let mut out = Vec::new();
    for i in 1..=seq.s() {
        let children = seq.l_children(i);
        for m in 0..seq.members(i) {
            let g = seq.member_graph(i, m);
            let whole = whole_biregular(&g, i);
            for l in 0..seq.l_part(i - 1).len() {
                out.push(core_properties_on(seq, &g, whole, &children, i, m, l)?);
            }
        }
    }
    Ok(out)
}

fn check_member(seq: &CoreSequence, j: usize, m: usize) -> Result<()> {
    if j > seq.s() {
        return invalid(format!("level {j} outside 0..={}", seq.s()));
    }
    if m >= seq.members(j) {
        return invalid(format!("member {m} outside G_{j}"));
    }
    Ok(())
}

fn whole_biregular(g: &BipartiteGraph, i: usize) -> bool {
    let (nl, nr) = (g.left() as u64, g.right() as u64);
    (0..g.left()).all(|u| g.degree(u) << i == nr) && g.right_degrees().iter().all(|&d| d << i == nl)
}

fn core_properties_on(
    seq: &CoreSequence,
    g: &BipartiteGraph,
    whole_biregular: bool,
    children: &[Vec<usize>],
    i: usize,
    member: usize,
    l: usize,
) -> Result<CorePropertiesReport> {
    let parent = member / 2;
    if l >= seq.l_part(i - 1).len() {
        return invalid(format!("cluster {l} outside L_{}", i - 1));
    }
    let l_set = seq.l_part(i - 1).cell(l);
    let mut item1_failures = Vec::new();
    for r in seq.quotient(i - 1, parent).neighbors_iter(l) {
        let r_set = seq.r_part(i - 1).cell(r);
        if let Some(d) = block_biregular_half(g, l_set, r_set) {
            item1_failures.push((l, r, d));
        }
    }
    let q = seq.quotient(i, member);
    let members = &children[l];
    let nf = seq.neighbor_family(i, parent, l)?.members;
    let size = members.len() as u64;
    let alpha = seq.profile().alpha_at(i)?;
    let item2_limit = max_codegree(&alpha, size);
    let mut item2_failures = Vec::new();
    let mut item2_max = 0;
    let mut item2_pairs = 0;
    // Neighbourhoods of the family restricted to ℒ_i[L], indexed by position in L.
    let mut local = vec![BitSet::new(members.len()); q.right()];
    for (pos, &x) in members.iter().enumerate() {
        for r in q.neighbors_iter(x) {
            local[r].insert(pos);
        }
    }
    for a in 0..nf.len() {
        for b in a + 1..nf.len() {
            item2_pairs += 1;
            let c = bits::and_count(local[nf[a]].words(), local[nf[b]].words());
            item2_max = item2_max.max(c);
            if c > item2_limit {
                item2_failures.push((nf[a], nf[b], c));
            }
        }
    }
    Ok(CorePropertiesReport {
        level: i,
        member,
        l,
        item1_failures,
        whole_biregular,
        item2_limit,
        item2_max,
        item2_pairs,
        item2_failures,
    })
}

/// `Some(detail)` unless every vertex of `s` has `|t|/2` neighbours in `t`
/// and every vertex of `t` has `|s|/2` in `s`.
fn block_biregular_half(g: &BipartiteGraph, s: &[usize], t: &[usize]) -> Option<String> {
    let mask = BitSet::from_indices(g.right(), t.iter().copied());
    let mut right = vec![0u64; g.right()];
    for &u in s {
        let d = bits::and_count(g.row(u), mask.words());
        if 2 * d != t.len() as u64 {
            return Some(format!("left vertex {u} has {d} of {} neighbours", t.len()));
        }
        for v in g.neighbors_iter(u) {
            right[v] += 1;
        }
    }
    t.iter()
        .find(|&&v| 2 * right[v] != s.len() as u64)
        .map(|&v| format!("right vertex {v} has {} of {} neighbours", right[v], s.len()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    /// `2^i p |R|` with `p = 2^-ℓ`.
    pub expected: u64,
    pub min: u64,
    pub max: u64,
    /// `(u, degree)` off the expected value.
    pub failures: Vec<(usize, u64)>,
}

impl DegreeReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For member `m` of `𝒢_ℓ` and `L ∈ ℒ_i`, `R ∈ ℛ_i` joined in the ancestor
/// `G_i`: every `u ∈ L` has exactly `2^(i-ℓ)|R|` neighbours in `R`.
pub fn verify_degree_property(seq: &CoreSequence, ell: usize, m: usize, i: usize, l: usize, r: usize) -> Result<DegreeReport> {
    check_member(seq, ell, m)?;
    if i == 0 || i > ell {
        return invalid(format!("level {i} outside 1..={ell}"));
    }
    if l >= seq.l_part(i).len() || r >= seq.r_part(i).len() {
        return invalid("cluster out of range");
    }
    if !seq.quotient(i, seq.ancestor(ell, m, i)).has_edge(l, r) {
        return precondition(format!("d(L, R) is not 1 in the level-{i} ancestor"));
    }
    let g = seq.member_graph(ell, m);
    let r_set = seq.r_part(i).cell(r);
    let expected = (r_set.len() as u64) >> (ell - i);
    let mask = BitSet::from_indices(g.right(), r_set.iter().copied());
    let mut rep = DegreeReport { expected, min: u64::MAX, max: 0, failures: Vec::new() };
    for &u in seq.l_part(i).cell(l) {
        let d = bits::and_count(g.row(u), mask.words());
        rep.min = rep.min.min(d);
        rep.max = rep.max.max(d);
        if d != expected {
            rep.failures.push((u, d));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiReport {
    pub level: usize,
    pub member: usize,
    /// `p = 2^-ℓ`.
    pub density: Rational,
    pub biregular: bool,
    /// `max_v Σ_{v'} max{codeg(v, v') - p²|𝐋|, 0}`, with `v' = v` included.
    pub max_excess: Rational,
    /// `α̂ = max_excess / (p²|𝐋||𝐑|)`.
    pub alpha_hat: Rational,
    /// `2α̂^(1/6)`.
    pub epsilon: Real,
    /// `ε >= 1` makes the conclusion vacuous.
    pub vacuous: bool,
    pub verdict: EpsVerdict,
    pub mode: Mode,
}

/// The codegree hypothesis on member `m` of `𝒢_ℓ` and the regularity it
/// implies, checked with `opts` (exact within the cap, else sampled).
pub fn verify_quasirandomness(seq: &CoreSequence, ell: usize, m: usize, opts: &CheckOptions) -> Result<QuasiReport> {
    check_member(seq, ell, m)?;
    let g = seq.member_graph(ell, m);
    let t = g.transpose();
    let (nl, nr) = (g.left() as u64, g.right() as u64);
    let density = pow2(-(ell as i64));
    let biregular = (0..g.left()).all(|u| g.degree(u) << ell == nr) && (0..t.left()).all(|v| t.degree(v) << ell == nl);
    // p²|𝐋| = |𝐋|/4^ℓ, kept exact by scaling by 4^ℓ.
    let scale = 1u128 << (2 * ell);
    let mut best = 0u128;
    for v in 0..t.left() {
        let mut excess = 0u128;
        for v2 in 0..t.left() {
            let c = bits::and_count(t.row(v), t.row(v2)) as u128 * scale;
            excess += c.saturating_sub(nl as u128);
        }
        best = best.max(excess);
    }
    let max_excess = Rational::new(best.into(), scale.into());
    let alpha_hat = if nl == 0 || nr == 0 {
        Rational::from_integer(0.into())
    } else {
        Rational::new(best.into(), (nl as u128 * nr as u128).into())
    };
    let epsilon = Real::root(alpha_hat.clone(), 6).scale(&int(2));
    let vacuous = epsilon.cmp_rational(&int(1)) != std::cmp::Ordering::Less;
    let (verdict, mode) = match is_eps_regular_graph(&g, &epsilon, opts) {
        Ok(v) => (v, opts.mode),
        Err(crate::error::Error::CapExceeded { .. }) => {
            let fallback = CheckOptions::sampled(seq.seed(), 8);
            (is_eps_regular_graph(&g, &epsilon, &fallback)?, fallback.mode)
        }
        Err(e) => return Err(e),
    };
    Ok(QuasiReport { level: ell, member: m, density, biregular, max_excess, alpha_hat, epsilon, vacuous, verdict, mode })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_construction::{build_core_sequence, default_parts, GrowthProfile};
    use crate::exact::ratio;

    fn small() -> CoreSequence {
        let p = GrowthProfile {
            r_sizes: vec![4, 16],
            e: vec![2, 4],
            blowup_l: 2,
            blowup_r: 1,
            alpha: vec![Some(ratio(1, 1)); 2],
            beta: vec![Some(ratio(1, 2)); 2],
            require_quadrupling: true,
            max_retries: 16,
            keep_unaccepted: false,
            strict: false,
        };
        let (l, r) = default_parts(&p).unwrap();
        build_core_sequence(&p, &l, &r, 11).unwrap()
    }

    #[test]
    fn structure_holds() {
        let seq = small();
        let rep = verify_structure(&seq);
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.members_checked, 1 + 2 + 4);
    }

    #[test]
    fn core_properties_hold_and_corruption_is_located() {
        let mut seq = small();
        for rep in verify_all_core_properties(&seq).unwrap() {
            assert!(rep.holds(), "{rep:?}");
        }
        // Flip the quotient bit of L' = 0, R' = first neighbour-block child.
        let q = seq.quotient_mut(2, 0);
        let on = q.has_edge(0, 0);
        q.set_edge(0, 0, !on);
        let rep = verify_core_properties(&seq, 2, 0, 0).unwrap();
        assert!(!rep.item1_holds());
        let parent_r = seq.r_parent(2)[0];
        if seq.quotient(1, 0).has_edge(0, parent_r) {
            assert!(rep.item1_failures.iter().any(|&(l, r, _)| l == 0 && r == parent_r));
        }
    }

    #[test]
    fn degree_property_forced_values() {
        let seq = small();
        let q = seq.quotient(1, seq.ancestor(2, 3, 1));
        let (l, r) = q.edges().next().unwrap();
        let rep = verify_degree_property(&seq, 2, 3, 1, l, r).unwrap();
        assert_eq!(rep.expected, seq.r_part(1).cell(r).len() as u64 / 2);
        assert!(rep.holds());
        let q2 = seq.quotient(2, 3);
        let (l2, r2) = q2.edges().next().unwrap();
        let full = verify_degree_property(&seq, 2, 3, 2, l2, r2).unwrap();
        assert_eq!(full.expected, seq.r_part(2).cell(r2).len() as u64);
        let (lx, rx) = (0..q.left()).flat_map(|a| (0..q.right()).map(move |b| (a, b))).find(|&(a, b)| !q.has_edge(a, b)).unwrap();
        assert!(verify_degree_property(&seq, 2, 3, 1, lx, rx).is_err());
    }

    #[test]
    fn quasirandomness_on_complete_level() {
        let seq = small();
        let rep = verify_quasirandomness(&seq, 0, 0, &CheckOptions::default()).unwrap();
        // G₀ complete: codeg = |𝐋| = p²|𝐋|, no excess.
        assert_eq!(rep.alpha_hat, int(0));
        assert!(rep.biregular);
        assert!(rep.verdict.is_regular());
    }
}
