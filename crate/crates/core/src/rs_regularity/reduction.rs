use crate::error::Result;
use crate::exact::{int, Rational, Real};
use crate::graphs::{aux_graph, KPartiteKGraph};
use crate::partitions::KPartition;
use crate::regularity::{axis_partitions, is_delta_regular_pair_real, CheckOptions, DeltaWitness, PairVerdict, Verdict};
use crate::rs_regularity::density::{hits_in, spread_on, transversal_polyads};
use crate::rs_regularity::equitable::{is_f_equitable, EquitableReport, RsParams};
use crate::rs_regularity::lattice::{Lattice, SubPolyad};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSub {
    pub polyad: usize,
    pub sub: SubPolyad,
    /// `d_H(P)` of the polyad.
    pub density: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairFailure {
    /// Cell of `E_k(P)` (index into the left partition of `G_H^k`).
    pub e_cell: usize,
    /// Cluster of `V_k(P)` (index into the right partition).
    pub cluster: usize,
    pub witness: Option<DeltaWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub equitable: Option<EquitableReport>,
    /// Every `δ`-large `S` keeps `d_H(S) >= (2/3)d_H(P)`.
    pub hypothesis: Verdict,
    pub sparse: Vec<SparseSub>,
    /// `2√δ`.
    pub pair_delta: Real,
    /// `E_k(P) ∪ V_k(P)` is perfectly `⟨2√δ⟩`-regular in `G_H^k`.
    pub conclusion: Verdict,
    pub pair_failures: Vec<PairFailure>,
    pub pairs_checked: usize,
}

impl ReductionReport {
    /// A decided hypothesis with a refuted conclusion is the only
    /// inconsistent outcome.
    pub fn consistent(&self) -> bool {
        let eq = self.equitable.as_ref().map_or(Verdict::Regular, |e| e.verdict);
        !(eq == Verdict::Regular && self.hypothesis == Verdict::Regular && self.conclusion == Verdict::NotRegular)
    }
}

/// Checks the density hypothesis on every polyad of `P` and the pairwise
/// conclusion on the last auxiliary graph, reporting both. With `params`,
/// `f`-equitability is checked too.
pub fn reduction_check(
    h: &KPartiteKGraph,
    p: &KPartition,
    params: Option<&RsParams>,
    delta: &Rational,
    opts: &CheckOptions,
) -> Result<ReductionReport> {
    let k = h.k();
    let equitable = params.map(|pr| is_f_equitable(p, pr, opts)).transpose()?;
    let hit = hits_in(h);
    let two_thirds = Rational::new(2.into(), 3.into());
    let mut sparse = Vec::new();
    let mut undecided = false;
    for (i, pp) in transversal_polyads(h.classes(), p)?.iter().enumerate() {
        let lat = Lattice::new(&pp.polyad, &hit);
        if lat.cliques() == 0 {
            continue;
        }
        let s = spread_on(&lat, delta, opts)?;
        let d = lat.whole().density();
        if s.low.density() < &two_thirds * &d {
            sparse.push(SparseSub { polyad: i, sub: s.low, density: d });
        } else if !s.exhaustive {
            undecided = true;
        }
    }
    let hypothesis = if !sparse.is_empty() {
        Verdict::NotRegular
    } else if undecided {
        Verdict::Undecided
    } else {
        Verdict::Regular
    };

    let pair_delta = Real::sqrt(delta.clone()).scale(&int(2));
    let view = aux_graph(h, k - 1)?;
    let (left, right) = axis_partitions(h, p, k - 1)?;
    let mut pair_failures = Vec::new();
    let mut unsettled = false;
    let mut pairs_checked = 0;
    for (e_cell, e) in left.cells().iter().enumerate() {
        for (cluster, v) in right.cells().iter().enumerate() {
            pairs_checked += 1;
            match is_delta_regular_pair_real(&view.graph.induced(e, v), &pair_delta, opts)? {
                PairVerdict::Regular => {}
                PairVerdict::Irregular(w) => pair_failures.push(PairFailure { e_cell, cluster, witness: Some(w) }),
                PairVerdict::NoWitnessFound => unsettled = true,
            }
        }
    }
    let conclusion = if !pair_failures.is_empty() {
        Verdict::NotRegular
    } else if unsettled {
        Verdict::Undecided
    } else {
        Verdict::Regular
    };
    Ok(ReductionReport { equitable, hypothesis, sparse, pair_delta, conclusion, pair_failures, pairs_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::partitions::VertexPartition;
    use crate::regularity::is_delta_regular_pair;

    fn k2(edges: &[(usize, usize)], n: usize) -> KPartiteKGraph {
        KPartiteKGraph::from_tuples(&[n, n], edges.iter().map(|&(a, b)| vec![a, b])).unwrap()
    }

    #[test]
    fn complete_graph_satisfies_both() {
        let all: Vec<(usize, usize)> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        let h = k2(&all, 4);
        let p = KPartition::trivial(VertexPartition::blocks(8, 4).unwrap());
        let r = reduction_check(&h, &p, None, &ratio(1, 16), &CheckOptions::default()).unwrap();
        assert_eq!((r.hypothesis, r.conclusion), (Verdict::Regular, Verdict::Regular));
    }

    #[test]
    fn planted_sparse_corner_fails_hypothesis() {
        let edges: Vec<(usize, usize)> =
            (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).filter(|&(a, b)| a >= 2 || b >= 2).collect();
        let h = k2(&edges, 4);
        let p = KPartition::trivial(VertexPartition::new(8, vec![(0..4).collect(), (4..8).collect()]).unwrap());
        let r = reduction_check(&h, &p, None, &ratio(1, 4), &CheckOptions::default()).unwrap();
        assert_eq!(r.hypothesis, Verdict::NotRegular);
        assert_eq!(r.sparse[0].sub.hits, 0);
    }

    #[test]
    fn k2_conclusion_is_the_pair_check() {
        let edges = [(0, 0), (0, 1), (1, 1), (2, 2), (3, 3), (3, 0), (2, 1)];
        let h = k2(&edges, 4);
        let p = KPartition::trivial(VertexPartition::new(8, vec![(0..4).collect(), (4..8).collect()]).unwrap());
        // 2√(1/16) = 1/2.
        let r = reduction_check(&h, &p, None, &ratio(1, 16), &CheckOptions::default()).unwrap();
        let g = aux_graph(&h, 1).unwrap().graph;
        let direct = is_delta_regular_pair(&g, &ratio(1, 2), &CheckOptions::default()).unwrap();
        assert_eq!(r.conclusion == Verdict::Regular, direct.is_regular());
    }
}
