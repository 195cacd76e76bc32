//! Vertex partitions, approximate refinement and layered k-partitions.

mod approx;
mod kpartition;
mod vertex;

pub use approx::{
    best_host, check_refinement_size, in_beta, refinement_union, refinement_union_within_bound, refines_beta,
    subset_beta, RefinementReport, RefinementUnion,
};
pub use kpartition::{
    class_tuple, clique_set, combinations, compose, cross_count, cross_k, decompose_polyads, Cell, Edge, KPartition,
    Polyad,
};
pub use vertex::VertexPartition;
