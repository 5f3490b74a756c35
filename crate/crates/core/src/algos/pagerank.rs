use rayon::prelude::*;

use super::{AlgoError, AlgoResult};
use crate::csr::GraphView;

pub const DEFAULT_DAMPING: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PageRankMode {
    /// Exactly `n` synchronous rounds.
    Iterations(usize),
    /// Stop once the L1 change between rounds drops below `epsilon`.
    Tolerance { epsilon: f64, max_iterations: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankResult {
    pub ranks: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Pull-based synchronous PageRank. Mass held by vertices without out-edges
/// is spread uniformly over all vertices each round.
pub fn page_rank(view: &GraphView, damping: f64, mode: PageRankMode) -> AlgoResult<PageRankResult> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(AlgoError::InvalidParameter(format!(
            "damping {damping} not in (0, 1)"
        )));
    }
    let n = view.vertex_count();
    if n == 0 {
        return Err(AlgoError::EmptyGraph);
    }
    let (max_iter, epsilon) = match mode {
        PageRankMode::Iterations(k) => (k, None),
        PageRankMode::Tolerance {
            epsilon,
            max_iterations,
        } => (max_iterations, Some(epsilon)),
    };
    let inbound = view.inbound();
    let out_deg: Vec<usize> = (0..n).map(|v| view.out_neighbors(v).len()).collect();
    let nf = n as f64;
    let mut ranks = vec![1.0 / nf; n];
    let mut contrib = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let mut dangling = 0.0;
        for v in 0..n {
            if out_deg[v] == 0 {
                dangling += ranks[v];
                contrib[v] = 0.0;
            } else {
                contrib[v] = ranks[v] / out_deg[v] as f64;
            }
        }
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|v| {
                let s: f64 = inbound
                    .neighbors(v)
                    .iter()
                    .map(|&u| contrib[u as usize])
                    .sum();
                base + damping * s
            })
            .collect();
        let delta: f64 = next.iter().zip(&ranks).map(|(a, b)| (a - b).abs()).sum();
        ranks = next;
        iterations += 1;
        if let Some(eps) = epsilon {
            if delta < eps {
                converged = true;
                break;
            }
        }
    }
    if epsilon.is_none() {
        converged = true;
    }
    Ok(PageRankResult {
        ranks,
        iterations,
        converged,
    })
}
