//! Bipartite graphs and k-partite k-graphs with exact counting.

mod bipartite;
mod classes;
pub mod io;
mod kgraph;

pub use bipartite::{density_of, BipartiteGraph, Side};
pub use classes::VertexClassSet;
pub use kgraph::{aux_graph, lift_graph_to_kgraph, AuxGraphView, KPartiteKGraph, MixedRadix};

/// Free-function form of [`BipartiteGraph::density`].
pub fn density(g: &BipartiteGraph) -> crate::exact::Rational {
    g.density()
}

pub fn codegree(g: &BipartiteGraph, side: Side, v: usize, w: usize) -> crate::error::Result<u64> {
    g.codegree(side, v, w)
}

pub fn edges_between(g: &BipartiteGraph, s: &[usize], t: &[usize]) -> crate::error::Result<u64> {
    g.edges_between(s, t)
}

pub fn blowup(g: &BipartiteGraph, m: usize) -> crate::error::Result<BipartiteGraph> {
    g.blowup(m)
}
