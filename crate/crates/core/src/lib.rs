//! Graph immersion workbench: immersion search with independently checkable certificates,
//! generation of graphs with independence number at most two, the structural constructions
//! behind complete-bipartite immersions in such graphs, and exhaustive verification sweeps.

pub mod canon;
pub mod generate;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod immersion;
pub mod invariants;
pub mod lift;
pub mod proof;

pub use graph::{Graph, GraphError, VertexMap, VertexSet};
