//! `⟨δ⟩`-regularity of pairs, partitions and k-partitions, and the
//! two-sided `(ε)`-regularity check.

mod kpartition;
mod pair;
mod partition;

pub use kpartition::{
    axis_partitions, cell_aux_graph, check_star_union, check_uniform_refinement, is_delta_good,
    is_delta_regular_kpartition, GoodFailure, GoodReport, KRegularityReport, StarUnionReport, UniformRefinementReport,
};
pub use pair::{
    binomial, is_delta_regular_pair, is_delta_regular_pair_real, is_eps_regular_graph, minimal_subset_reduction, sparsest_pair, threshold_size, CheckOptions,
    DeltaWitness, EpsVerdict, EpsWitness, Mode, PairVerdict, SearchSpace, SparsestPair, DEFAULT_CAP,
};
pub use partition::{
    partition_edit_interval, witness_lower_bound, EditInterval, PairLine, PairStatus, Repair, Verdict,
};
