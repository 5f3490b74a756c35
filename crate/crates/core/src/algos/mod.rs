//! Graph analytics over [`GraphView`](crate::csr::GraphView).
//!
//! Every routine is read-only and deterministic: per-vertex work may run on
//! the rayon pool, but each output value is computed by a fixed-order loop,
//! so results do not depend on the worker count.

mod cdlp;
mod clustering;
mod components;
mod flow;
pub mod linalg;
mod mst;
mod pagerank;
mod paths;
mod pca;

use thiserror::Error;

pub use cdlp::cdlp;
pub use clustering::{lcc, triangle_count, TriangleCount};
pub use components::{scc, wcc};
pub use flow::max_flow;
pub use linalg::Matrix;
pub use mst::{mst_prim, SpanningForest};
pub use pagerank::{page_rank, PageRankMode, PageRankResult, DEFAULT_DAMPING};
pub use paths::{bfs, bfs_all_shortest_paths, sssp_dijkstra, ShortestPathCounts, UNREACHABLE};
pub use pca::{pca, pca_with, PcaMethod, PcaOptions, PcaResult, RANDOMIZED_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgoError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("edge slot {0} has a negative or NaN weight")]
    NegativeWeight(usize),
    #[error("source and sink must differ")]
    SameSourceSink,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type AlgoResult<T> = Result<T, AlgoError>;

fn check_vertex(view: &crate::csr::GraphView, v: usize) -> AlgoResult<()> {
    if v < view.vertex_count() {
        Ok(())
    } else {
        Err(AlgoError::OutOfRange(v))
    }
}

/// Sorted, de-duplicated union of in- and out-neighbors, excluding `v`.
fn undirected_neighbors(out: &[u32], inn: &[u32], v: u32, buf: &mut Vec<u32>) {
    buf.clear();
    buf.extend(out.iter().chain(inn.iter()).copied().filter(|&u| u != v));
    buf.sort_unstable();
    buf.dedup();
}
