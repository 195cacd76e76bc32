//! Constructions of hard instances for graph and hypergraph regularity, and
//! exact verifiers for their structural properties.

pub mod balanced;
pub mod core_construction;
pub mod counterexample;
pub mod bits;
pub mod error;
pub mod exact;
pub mod graphs;
pub mod hypergraph_construction;
pub mod partitions;
pub mod regularity;
pub mod rs_regularity;
pub mod seed;

pub use error::{Error, Result};
pub use exact::{Rational, Real};
pub use graphs::{BipartiteGraph, KPartiteKGraph, VertexClassSet};
pub use partitions::{KPartition, Polyad, VertexPartition};
