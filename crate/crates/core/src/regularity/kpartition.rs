use std::collections::HashMap;

use crate::error::{invalid, precondition, Result};
use crate::exact::{int, Rational};
use crate::graphs::{aux_graph, BipartiteGraph, KPartiteKGraph, MixedRadix};
use crate::partitions::{refinement_union, refines_beta, Edge, KPartition, RefinementReport, VertexPartition};
use crate::regularity::pair::{is_delta_regular_pair, CheckOptions, DeltaWitness, PairVerdict};
use crate::regularity::partition::{partition_edit_interval, EditInterval, Verdict};

/// `G^i_{F,P}` for cell `c` of layer `r` and axis `i` (an index into the
/// cell's clusters). Left vertices are the faces of part `i` in the order
/// returned by [`KPartition::cell_edges`]; right vertices are the cluster's
/// vertices in ascending order.
pub fn cell_aux_graph(p: &KPartition, r: usize, c: usize, i: usize) -> Result<BipartiteGraph> {
    if r < 2 || r > p.arity() {
        return invalid(format!("no layer {r}"));
    }
    let cell = &p.layer(r)[c];
    if i >= r {
        return invalid(format!("axis {i} out of range for a {r}-set"));
    }
    let faces = p.cell_edges(r - 1, cell.under[i]);
    let face_ix: HashMap<&Edge, usize> = faces.iter().enumerate().map(|(j, f)| (f, j)).collect();
    let cluster = p.vertex().cell(cell.clusters[i]);
    let mut g = BipartiteGraph::empty(faces.len(), cluster.len());
    for e in &cell.edges {
        let pos = e.iter().position(|&v| p.vertex().cell_of(v) == cell.clusters[i]).unwrap();
        let v = e[pos];
        let face: Edge = e.iter().enumerate().filter(|(j, _)| *j != pos).map(|(_, &x)| x).collect();
        let u = face_ix[&face];
        g.add_edge(u, cluster.binary_search(&v).unwrap());
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoodFailure {
    pub layer: usize,
    pub cell: usize,
    pub axis: usize,
    pub witness: Option<DeltaWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoodReport {
    pub verdict: Verdict,
    pub failures: Vec<GoodFailure>,
    /// Checks that sampled mode could not settle.
    pub unsettled: Vec<GoodFailure>,
    pub checked: usize,
}

/// Checks `G^i_{F,under(F)}` for every cell of every layer `r >= 2` and
/// every axis. A 1-partition is good for every δ.
pub fn is_delta_good(p: &KPartition, delta: &Rational, opts: &CheckOptions) -> Result<GoodReport> {
    let mut failures = Vec::new();
    let mut unsettled = Vec::new();
    let mut checked = 0;
    for r in 2..=p.arity() {
        for c in 0..p.layer(r).len() {
            for i in 0..r {
                let g = cell_aux_graph(p, r, c, i)?;
                checked += 1;
                match is_delta_regular_pair(&g, delta, opts)? {
                    PairVerdict::Regular => {}
                    PairVerdict::Irregular(w) => {
                        failures.push(GoodFailure { layer: r, cell: c, axis: i, witness: Some(w) })
                    }
                    PairVerdict::NoWitnessFound => {
                        unsettled.push(GoodFailure { layer: r, cell: c, axis: i, witness: None })
                    }
                }
            }
        }
    }
    let verdict = if !failures.is_empty() {
        Verdict::NotRegular
    } else if unsettled.is_empty() {
        Verdict::Regular
    } else {
        Verdict::Undecided
    };
    Ok(GoodReport { verdict, failures, unsettled, checked })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KRegularityReport {
    pub verdict: Verdict,
    pub good: GoodReport,
    /// One interval per axis; empty when `P` is not good.
    pub axes: Vec<EditInterval>,
}

/// `E_i(P) ∪ V_i(P)` as partitions of the two sides of `G_H^i`.
pub fn axis_partitions(h: &KPartiteKGraph, p: &KPartition, axis: usize) -> Result<(VertexPartition, VertexPartition)> {
    let classes = h.classes();
    let (left, _) = p.e_partition(classes, axis)?;
    let off = classes.offset(axis);
    let cells = p
        .class_clusters(classes, axis)?
        .into_iter()
        .map(|c| p.vertex().cell(c).iter().map(|v| v - off).collect())
        .collect();
    let right = VertexPartition::new(classes.size(axis), cells)?;
    Ok((left, right))
}

/// `P` (arity `k-1`) is a `⟨δ⟩`-regular partition of the k-partite `H`.
/// A partition that is not good yields [`Verdict::NotRegular`].
pub fn is_delta_regular_kpartition(
    h: &KPartiteKGraph,
    p: &KPartition,
    delta: &Rational,
    opts: &CheckOptions,
) -> Result<KRegularityReport> {
    let classes = h.classes();
    p.check_refines_classes(classes)?;
    if p.arity() + 1 != h.k() {
        return precondition(format!("expected a {}-partition, got a {}-partition", h.k() - 1, p.arity()));
    }
    let good = is_delta_good(p, delta, opts)?;
    if good.verdict == Verdict::NotRegular {
        return Ok(KRegularityReport { verdict: Verdict::NotRegular, good, axes: Vec::new() });
    }
    let mut verdict = good.verdict;
    let mut axes = Vec::with_capacity(h.k());
    for i in 0..h.k() {
        let view = aux_graph(h, i)?;
        let (left, right) = axis_partitions(h, p, i)?;
        let iv = partition_edit_interval(&view.graph, &left, &right, delta, opts)?;
        verdict = verdict.and(iv.verdict);
        axes.push(iv);
    }
    Ok(KRegularityReport { verdict, good, axes })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarUnionReport {
    pub members: Vec<bool>,
    pub union_regular: bool,
    /// Every member regular implies the union is regular.
    pub consistent: bool,
}

pub fn check_star_union(gs: &[BipartiteGraph], delta: &Rational, opts: &CheckOptions) -> Result<StarUnionReport> {
    let Some(first) = gs.first() else {
        return invalid("empty family");
    };
    let mut union = BipartiteGraph::empty(first.left(), first.right());
    let mut members = Vec::with_capacity(gs.len());
    for g in gs {
        if !union.is_edge_disjoint(g)? {
            return invalid("graphs are not pairwise edge-disjoint");
        }
        union = union.union(g)?;
        members.push(is_delta_regular_pair(g, delta, opts)?.is_regular());
    }
    let union_regular = is_delta_regular_pair(&union, delta, opts)?.is_regular();
    let consistent = !members.iter().all(|&m| m) || union_regular;
    Ok(StarUnionReport { members, union_regular, consistent })
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformRefinementReport {
    pub refinement: RefinementReport,
    /// Index of the chosen `F` in the family.
    pub chosen: usize,
    pub f: KPartiteKGraph,
    pub restricted: KRegularityReport,
}

/// Given `E_k(P) ≺_δ 𝓕` with `P` good, restricts `P` to the first `k-1`
/// classes and checks it against the refinement-union member of `𝓕` at `3δ`.
///
/// `family` partitions the mixed-radix product of the first `k-1` classes.
pub fn check_uniform_refinement(
    p: &KPartition,
    classes: &crate::graphs::VertexClassSet,
    family: &VertexPartition,
    delta: &Rational,
    opts: &CheckOptions,
) -> Result<UniformRefinementReport> {
    let k = classes.len();
    if k < 3 {
        return invalid("uniform refinement needs k >= 3");
    }
    let (ek, _) = p.e_partition(classes, k - 1)?;
    if family.ground_size() != ek.ground_size() {
        return invalid("family does not partition the product of the first k-1 classes");
    }
    let refinement = refines_beta(&ek, family, delta)?;
    if !refinement.holds {
        return precondition("E_k(P) is not a delta-refinement of the family");
    }
    if is_delta_good(p, delta, opts)?.verdict != Verdict::Regular {
        return precondition("P is not delta-good");
    }
    let chosen = refinement_union(&ek, family, delta)?.p_cell;
    let sizes: Vec<usize> = (0..k - 1).map(|j| classes.size(j)).collect();
    let radix = MixedRadix::new(&sizes)?;
    let codes: Vec<u64> = family.cell(chosen).iter().map(|&c| c as u64).collect();
    debug_assert!(codes.iter().all(|&c| c < radix.len()));
    let f = KPartiteKGraph::from_codes(&sizes, codes)?;
    let keep: Vec<usize> = (0..classes.offset(k - 1)).collect();
    let (restricted_p, _) = p.restrict(&keep)?;
    let restricted_p = restricted_p.drop_top();
    let restricted = is_delta_regular_kpartition(&f, &restricted_p, &(int(3) * delta), opts)?;
    Ok(UniformRefinementReport { refinement, chosen, f, restricted })
}
