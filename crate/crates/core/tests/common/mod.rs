#![allow(dead_code)]

pub mod front_oracle;
pub mod graph_oracles;
pub mod naive;
pub mod pca_oracle;
pub mod querygen;
pub mod vector_oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata::csr::GraphView;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Directed G(n, p) without self-loops.
pub fn gnp(n: usize, p: f64, seed: u64) -> Vec<(u32, u32)> {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if a != b && r.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Directed graph with `m` uniformly random edges; may contain parallel edges and loops.
pub fn random_edges(n: usize, m: usize, seed: u64) -> Vec<(u32, u32)> {
    let mut r = rng(seed);
    (0..m)
        .map(|_| (r.random_range(0..n as u32), r.random_range(0..n as u32)))
        .collect()
}

pub fn random_weights(m: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..m).map(|_| r.random_range(lo..hi)).collect()
}

pub fn view(n: usize, edges: &[(u32, u32)]) -> GraphView {
    GraphView::from_edges(n, edges, None, true)
}

pub fn weighted_view(n: usize, edges: &[(u32, u32)], w: &[f64]) -> GraphView {
    GraphView::from_edges(n, edges, Some(w), true)
}

/// Canonical form of a partition: each member mapped to the smallest index in its class.
pub fn canonical_partition<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Vec<usize> {
    let mut first = std::collections::HashMap::new();
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| *first.entry(*l).or_insert(i))
        .collect()
}

/// Sorted copy of a result, for multiset comparison.
pub fn sorted_rows(rows: &[Vec<strata::query::Value>]) -> Vec<Vec<strata::query::Value>> {
    let mut r = rows.to_vec();
    r.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    r
}

/// Row-wise equality where floats may differ by summation order.
pub fn rows_close(a: &[Vec<strata::query::Value>], b: &[Vec<strata::query::Value>]) -> bool {
    use strata::query::Value;
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.len() == y.len()
                && x.iter().zip(y).all(|(u, v)| match (u, v) {
                    (Value::Float(p), Value::Float(q)) => {
                        (p - q).abs() <= 1e-9 * (1.0 + p.abs().max(q.abs()))
                    }
                    _ => u == v,
                })
        })
}
