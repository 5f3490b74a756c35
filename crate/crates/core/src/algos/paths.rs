//! Unweighted and weighted shortest paths.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use ordered_float::OrderedFloat;

use super::{check_vertex, AlgoError, AlgoResult};
use crate::csr::GraphView;

/// Depth sentinel for vertices the source cannot reach.
pub const UNREACHABLE: u64 = u64::MAX;

/// Hop distance from `source` along out-edges.
pub fn bfs(view: &GraphView, source: usize) -> AlgoResult<Vec<u64>> {
    check_vertex(view, source)?;
    let mut depth = vec![UNREACHABLE; view.vertex_count()];
    let mut queue = VecDeque::new();
    depth[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let d = depth[u] + 1;
        for &w in view.out_neighbors(u) {
            let w = w as usize;
            if depth[w] == UNREACHABLE {
                depth[w] = d;
                queue.push_back(w);
            }
        }
    }
    Ok(depth)
}

/// Dijkstra with a binary heap and lazy deletion. Unreachable vertices get
/// `f64::INFINITY`; missing weights read as 1.0.
pub fn sssp_dijkstra(view: &GraphView, source: usize) -> AlgoResult<Vec<f64>> {
    check_vertex(view, source)?;
    if let Some(w) = view.weights() {
        if let Some(bad) = w.iter().position(|x| !(*x >= 0.0)) {
            return Err(AlgoError::NegativeWeight(bad));
        }
    }
    let n = view.vertex_count();
    let offsets = view.out_offsets();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((OrderedFloat(0.0), source)));
    while let Some(Reverse((OrderedFloat(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for e in offsets[u]..offsets[u + 1] {
            let w = view.out_targets()[e] as usize;
            let nd = d + view.weight(e);
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Reverse((OrderedFloat(nd), w)));
            }
        }
    }
    Ok(dist)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathCounts {
    pub depth: Vec<u64>,
    /// Distinct shortest paths from the source, saturating at `u64::MAX`.
    pub paths: Vec<u64>,
    pub overflow: bool,
}

/// BFS depths plus the number of distinct shortest paths to each vertex.
pub fn bfs_all_shortest_paths(view: &GraphView, source: usize) -> AlgoResult<ShortestPathCounts> {
    check_vertex(view, source)?;
    let n = view.vertex_count();
    let mut depth = vec![UNREACHABLE; n];
    let mut paths = vec![0u64; n];
    let mut overflow = false;
    let mut queue = VecDeque::new();
    depth[source] = 0;
    paths[source] = 1;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let d = depth[u] + 1;
        for &w in view.out_neighbors(u) {
            let w = w as usize;
            if depth[w] == UNREACHABLE {
                depth[w] = d;
                queue.push_back(w);
            }
            if depth[w] == d {
                let (sum, o) = paths[w].overflowing_add(paths[u]);
                if o {
                    overflow = true;
                    paths[w] = u64::MAX;
                } else {
                    paths[w] = sum;
                }
            }
        }
    }
    Ok(ShortestPathCounts {
        depth,
        paths,
        overflow,
    })
}
