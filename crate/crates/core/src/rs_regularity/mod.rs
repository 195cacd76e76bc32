//! Rödl–Schacht regularity for k-graphs and complexes, as exact or sampled
//! property checks.

mod complex;
mod density;
mod equitable;
mod lattice;
mod reduction;

pub use complex::{
    counting_tolerance, dense_counting_check, is_f_regular_complex, measure_complex, slicing_check, CountingReport,
    ExtensionReport, LayerMeasure, RankedHypergraph, SlicingReport,
};
pub use density::{
    is_eps_d_regular, is_eps_regular_partition, relative_density, transversal_polyads, IrregularPolyad,
    PartitionPolyad, RsPartitionReport, RsVerdict, Spread,
};
pub use equitable::{is_f_equitable, under_polyad, CellFailure, EquitableReport, RsParams, ToleranceFn};
pub use lattice::{SubPolyad, MAX_ACTIVE_FACES};
pub use reduction::{reduction_check, PairFailure, ReductionReport, SparseSub};
