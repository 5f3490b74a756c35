//! Local clustering coefficient and triangle counting.

use rayon::prelude::*;

use super::undirected_neighbors;
use crate::csr::GraphView;

/// Local clustering coefficient, directed Graphalytics form: the number of
/// ordered neighbor pairs `(u, w)` joined by an edge `u -> w`, over
/// `|N(v)|·(|N(v)|-1)`, where `N(v)` is the in/out neighborhood without `v`.
pub fn lcc(view: &GraphView) -> Vec<f64> {
    let n = view.vertex_count();
    let inbound = view.inbound();
    (0..n)
        .into_par_iter()
        .map_init(Vec::new, |nbrs: &mut Vec<u32>, v| {
            undirected_neighbors(view.out_neighbors(v), inbound.neighbors(v), v as u32, nbrs);
            let k = nbrs.len();
            if k < 2 {
                return 0.0;
            }
            let mut links: u64 = 0;
            for &u in nbrs.iter() {
                let out = view.out_neighbors(u as usize);
                // merge of two ascending lists; `out` may repeat targets
                let (mut i, mut j) = (0, 0);
                while i < out.len() && j < nbrs.len() {
                    let (a, b) = (out[i], nbrs[j]);
                    if a < b {
                        i += 1;
                    } else if a > b {
                        j += 1;
                    } else {
                        if a != u {
                            links += 1;
                        }
                        while i < out.len() && out[i] == a {
                            i += 1;
                        }
                        j += 1;
                    }
                }
            }
            links as f64 / (k as f64 * (k as f64 - 1.0))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCount {
    pub total: u64,
    pub per_vertex: Vec<u64>,
}

fn intersection_len(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Triangles of the undirected simple skeleton (directions, parallel edges
/// and self-loops ignored). `total == sum(per_vertex) / 3` exactly.
pub fn triangle_count(view: &GraphView) -> TriangleCount {
    let n = view.vertex_count();
    let inbound = view.inbound();
    let adj: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut buf = Vec::new();
            undirected_neighbors(
                view.out_neighbors(v),
                inbound.neighbors(v),
                v as u32,
                &mut buf,
            );
            buf
        })
        .collect();
    let per_vertex: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|v| {
            let nv = &adj[v];
            let twice: u64 = nv
                .iter()
                .map(|&u| intersection_len(nv, &adj[u as usize]))
                .sum();
            twice / 2
        })
        .collect();
    let total = per_vertex.iter().sum::<u64>() / 3;
    TriangleCount { total, per_vertex }
}
