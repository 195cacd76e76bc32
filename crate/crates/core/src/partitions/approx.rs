//! Approximate refinement: `S ⊂_β T`, `S ∈_β P`, `Q ≺_β P`.

use crate::error::{invalid, precondition, Result};
use crate::exact::{int, ratio, Rational};
use crate::partitions::vertex::VertexPartition;

/// `|S \ T| < β|S|`, with exact containment also accepted so that `β = 0`
/// means plain refinement.
pub fn subset_beta(outside: usize, size: usize, beta: &Rational) -> bool {
    outside == 0 || int(outside as u64) < beta * int(size as u64)
}

fn check_beta(beta: &Rational) -> Result<()> {
    if *beta < int(0) || *beta > ratio(1, 2) {
        return precondition(format!("beta must lie in [0, 1/2], got {beta}"));
    }
    Ok(())
}

/// The cell of `p` holding the most of `set` (lowest index on ties), with
/// the overlap size.
pub fn best_host(set: &[usize], p: &VertexPartition) -> (usize, usize) {
    let mut counts: std::collections::HashMap<usize, usize> = Default::default();
    for &v in set {
        *counts.entry(p.cell_of(v)).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((0, 0))
}

/// `S ∈_β P`: the unique host cell, if any.
pub fn in_beta(set: &[usize], p: &VertexPartition, beta: &Rational) -> Result<Option<usize>> {
    check_beta(beta)?;
    if set.is_empty() {
        return invalid("empty set has no host");
    }
    let (h, overlap) = best_host(set, p);
    Ok(subset_beta(set.len() - overlap, set.len(), beta).then_some(h))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefinementReport {
    pub beta: Rational,
    /// Host cell of `p` for each cell of `q`, or `None`.
    pub assignment: Vec<Option<usize>>,
    /// Total size of the unassigned cells.
    pub unassigned: usize,
    pub ground: usize,
    pub holds: bool,
}

impl RefinementReport {
    /// Unassigned fraction of the ground set.
    pub fn mass_unassigned(&self) -> Rational {
        crate::graphs::density_of(self.unassigned as u64, self.ground as u64)
    }
}

/// Evaluates `Q ≺_β P`.
pub fn refines_beta(q: &VertexPartition, p: &VertexPartition, beta: &Rational) -> Result<RefinementReport> {
    check_beta(beta)?;
    if q.ground_size() != p.ground_size() {
        return invalid("partitions of different ground sets");
    }
    let mut assignment = Vec::with_capacity(q.len());
    let mut unassigned = 0;
    for c in q.cells() {
        let (h, overlap) = best_host(c, p);
        if subset_beta(c.len() - overlap, c.len(), beta) {
            assignment.push(Some(h));
        } else {
            assignment.push(None);
            unassigned += c.len();
        }
    }
    let ground = q.ground_size();
    let holds = int(unassigned as u64) <= beta * int(ground as u64);
    Ok(RefinementReport { beta: beta.clone(), assignment, unassigned, ground, holds })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefinementUnion {
    pub p_cell: usize,
    /// Cells `Q` of `q` with `Q ⊂_δ P`.
    pub q_cells: Vec<usize>,
    pub union: Vec<usize>,
    /// `|P △ P_Q|`.
    pub symmetric_difference: usize,
}

/// For `Q ≺_δ P`, the cell `P` minimizing `|P △ P_Q|` where
/// `P_Q = ∪{Q : Q ⊂_δ P}`; ties go to the lowest index.
pub fn refinement_union(q: &VertexPartition, p: &VertexPartition, delta: &Rational) -> Result<RefinementUnion> {
    let rep = refines_beta(q, p, delta)?;
    if !rep.holds {
        return precondition("Q is not a delta-refinement of P");
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); p.len()];
    for (qi, a) in rep.assignment.iter().enumerate() {
        if let Some(h) = a {
            members[*h].push(qi);
        }
    }
    let mut best: Option<RefinementUnion> = None;
    for (pi, qs) in members.into_iter().enumerate() {
        let mut union: Vec<usize> = qs.iter().flat_map(|&qi| q.cell(qi).iter().copied()).collect();
        union.sort_unstable();
        let inside = union.iter().filter(|&&v| p.cell_of(v) == pi).count();
        let sd = (union.len() - inside) + (p.cell(pi).len() - inside);
        if best.as_ref().is_none_or(|b| sd < b.symmetric_difference) {
            best = Some(RefinementUnion { p_cell: pi, q_cells: qs, union, symmetric_difference: sd });
        }
    }
    Ok(best.expect("P has at least one cell"))
}

/// `|P △ P_Q| <= 3δ|P|` for the chosen cell.
pub fn refinement_union_within_bound(r: &RefinementUnion, p: &VertexPartition, delta: &Rational) -> bool {
    int(r.symmetric_difference as u64) <= int(3) * delta * int(p.cell(r.p_cell).len() as u64)
}

/// `|Q| >= |P|/4`, given `Q ≺_{1/2} P` with `P` equitable.
pub fn check_refinement_size(q: &VertexPartition, p: &VertexPartition) -> Result<bool> {
    if !p.is_equitable() {
        return precondition("P is not equitable");
    }
    if !refines_beta(q, p, &ratio(1, 2))?.holds {
        return precondition("Q is not a 1/2-refinement of P");
    }
    Ok(4 * q.len() >= p.len())
}
