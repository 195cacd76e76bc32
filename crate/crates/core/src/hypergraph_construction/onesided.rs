use crate::core_construction::{refute_partition, verify_certificate, GammaChoice, Refutation};
use crate::error::{invalid, Error, Result};
use crate::exact::{pow2, Rational};
use crate::graphs::VertexClassSet;
use crate::hypergraph_construction::{InductiveFamily, ParamSchedule};
use crate::partitions::{refines_beta, KPartition, VertexPartition};
use crate::regularity::axis_partitions;

/// Outcome of evaluating the one-sided property on an explicit partition.
#[derive(Clone, Debug)]
pub struct OneSidedReport {
    pub k: usize,
    pub j: usize,
    pub member: usize,
    pub i: usize,
    /// `V_h(P) ≺_c V_h(𝒱_i)` for `h = 2..=k` (0-based `1..k`).
    pub hypothesis: Vec<bool>,
    /// `V_1(P) ≺_c V_1(𝒱_{i+1})`.
    pub conclusion: bool,
    /// `j'` with `A_k(j') <= i < A_k(j'+1)`.
    pub j_prime: usize,
    /// Refutation of `E_k(P) ∪ V_k(P)` on `G`, when one applies.
    pub certificate: Option<Refutation>,
    /// Why no certificate was produced at this level.
    pub note: Option<String>,
    /// The same evaluation one uniformity down, on each `F ∈ 𝓕_(j')`.
    pub descended: Vec<OneSidedReport>,
}

impl OneSidedReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis.iter().all(|&b| b)
    }

    /// A verified refutation exists here or below.
    pub fn refuted(&self) -> bool {
        self.certificate.as_ref().is_some_and(Refutation::refutes) || self.descended.iter().any(OneSidedReport::refuted)
    }

    /// The hypothesis failed, the conclusion held, or `P` was refuted.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds() || self.conclusion || self.refuted()
    }
}

fn class_part(p: &KPartition, classes: &VertexClassSet, h: usize) -> Result<VertexPartition> {
    let off = classes.offset(h);
    let cells = p
        .class_clusters(classes, h)?
        .into_iter()
        .map(|c| p.vertex().cell(c).iter().map(|v| v - off).collect())
        .collect();
    VertexPartition::new(classes.size(h), cells)
}

/// Evaluates hypothesis and conclusion for member `member` of `ℋ_j` and a
/// `(k-1)`-partition `p` of its classes, and, when the hypothesis holds but
/// the conclusion fails, looks for a refutation of `⟨δ⟩`-regularity.
#[allow(clippy::too_many_arguments)]
pub fn verify_onesided_property(
    fam: &InductiveFamily,
    sched: &ParamSchedule,
    j: usize,
    member: usize,
    p: &KPartition,
    i: usize,
    delta: &Rational,
    gamma: &Rational,
) -> Result<OneSidedReport> {
    let k = fam.k;
    if j == 0 || j > fam.s || member >= fam.members(j) {
        return invalid(format!("no member {member} at level {j}"));
    }
    let a_j = if k == 2 { j } else { fam.v_levels[j - 1] };
    if i == 0 || i > a_j || i >= fam.chain.len() {
        return invalid(format!("i = {i} outside 1..={a_j}"));
    }
    let classes = VertexClassSet::from_sizes(&vec![fam.n; k])?;
    if p.arity() + 1 != k {
        return Err(Error::Invalid(format!("expected a {}-partition, got arity {}", k - 1, p.arity())));
    }
    p.check_refines_classes(&classes)?;
    let c = pow2(-9);
    let hypothesis = (1..k)
        .map(|h| Ok(refines_beta(&class_part(p, &classes, h)?, &fam.chain[i - 1][h], &c)?.holds))
        .collect::<Result<Vec<bool>>>()?;
    let conclusion = refines_beta(&class_part(p, &classes, 0)?, &fam.chain[i][0], &c)?.holds;
    let levels: Vec<usize> = if k == 2 { (1..=fam.s).collect() } else { fam.v_levels.clone() };
    let j_prime = levels.iter().rposition(|&a| a <= i).map(|x| x + 1).unwrap_or(0);
    let mut report = OneSidedReport {
        k,
        j,
        member,
        i,
        hypothesis,
        conclusion,
        j_prime,
        certificate: None,
        note: None,
        descended: Vec::new(),
    };
    if !report.hypothesis_holds() || conclusion {
        return Ok(report);
    }
    if j_prime == 0 || j_prime > j {
        report.note = Some(format!("no j' <= {j} with A_k(j') <= {i}"));
        return Ok(report);
    }
    let h = fam.member(j, member)?;
    let (e, q) = axis_partitions(&h, p, k - 1)?;
    match refute_partition(&fam.core, j, member, &e, &q, delta, j_prime, &GammaChoice::Desk(gamma.clone())) {
        Ok(r) => {
            let check = verify_certificate(&r.certificate.to_text(), &fam.core.member_graph(j, member))?;
            if !check.ok() {
                report.note = Some(format!("certificate failed re-verification: {:?}", check.failures));
            }
            report.certificate = Some(r);
        }
        Err(Error::Precondition(msg)) => report.note = Some(msg),
        Err(err) => return Err(err),
    }
    if report.certificate.as_ref().is_some_and(Refutation::refutes) {
        return Ok(report);
    }
    if let Some(sub) = fam.sub.as_deref() {
        let ell = fam.f_levels[j_prime - 1];
        if i > ell {
            return Ok(report);
        }
        let keep: Vec<usize> = (0..(k - 1) * fam.n).collect();
        let (restricted, _) = p.restrict(&keep)?;
        let lower = restricted.drop_top();
        for f in 0..sub.members(ell) {
            report.descended.push(verify_onesided_property(sub, sched, ell, f, &lower, i, delta, gamma)?);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph_construction::{block_chain, build_inductive_family};

    fn family() -> (ParamSchedule, InductiveFamily) {
        let sched = ParamSchedule::desk();
        let chain = block_chain(&sched, 3, 16, 3).unwrap();
        let fam = build_inductive_family(3, 2, 16, &chain, &sched, 11).unwrap();
        (sched, fam)
    }

    fn vertex_partition(fam: &InductiveFamily, levels: [usize; 3]) -> VertexPartition {
        let labels: Vec<usize> = (0..3)
            .flat_map(|h| fam.chain[levels[h] - 1][h].labels().iter().map(move |&l| h * 16 + l).collect::<Vec<_>>())
            .collect();
        VertexPartition::from_labels(&labels).unwrap()
    }

    #[test]
    fn chain_restriction_satisfies_both() {
        let (sched, fam) = family();
        let p = KPartition::complete(vertex_partition(&fam, [2, 1, 1]), 2).unwrap();
        let r = verify_onesided_property(&fam, &sched, 2, 0, &p, 1, &pow2(-20), &pow2(-9)).unwrap();
        assert!(r.hypothesis_holds() && r.conclusion && r.consistent());
    }

    #[test]
    fn scrambled_first_class_is_refuted() {
        let (sched, fam) = family();
        let p = KPartition::complete(vertex_partition(&fam, [1, 1, 1]), 2).unwrap();
        for m in 0..fam.members(2) {
            let r = verify_onesided_property(&fam, &sched, 2, m, &p, 1, &pow2(-20), &pow2(-9)).unwrap();
            assert!(r.hypothesis_holds());
            assert!(!r.conclusion);
            assert!(r.refuted(), "{:?} {:?}", r.note, r.descended.iter().map(|d| &d.note).collect::<Vec<_>>());
        }
    }

    #[test]
    fn i_beyond_a_k_is_rejected() {
        let (sched, fam) = family();
        let p = KPartition::complete(vertex_partition(&fam, [1, 1, 1]), 2).unwrap();
        assert!(verify_onesided_property(&fam, &sched, 1, 0, &p, 2, &pow2(-20), &pow2(-9)).is_err());
    }
}
