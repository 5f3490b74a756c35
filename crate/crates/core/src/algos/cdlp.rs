use rayon::prelude::*;

use super::{AlgoError, AlgoResult};
use crate::csr::GraphView;

/// Synchronous label propagation. Labels start as external ids; each round
/// every vertex takes the most frequent label over its in- and out-neighbors
/// (counted with multiplicity), ties going to the smallest label.
pub fn cdlp(view: &GraphView, iterations: usize) -> AlgoResult<Vec<u64>> {
    if iterations == 0 {
        return Err(AlgoError::InvalidParameter(
            "cdlp needs at least one iteration".into(),
        ));
    }
    let n = view.vertex_count();
    let inbound = view.inbound();
    let mut labels: Vec<u64> = view.external_ids().to_vec();
    for _ in 0..iterations {
        let next: Vec<u64> = (0..n)
            .into_par_iter()
            .map_init(Vec::new, |buf: &mut Vec<u64>, v| {
                buf.clear();
                buf.extend(view.out_neighbors(v).iter().map(|&u| labels[u as usize]));
                buf.extend(inbound.neighbors(v).iter().map(|&u| labels[u as usize]));
                if buf.is_empty() {
                    return labels[v];
                }
                buf.sort_unstable();
                let (mut best, mut best_count) = (buf[0], 0usize);
                let mut i = 0;
                while i < buf.len() {
                    let mut j = i;
                    while j < buf.len() && buf[j] == buf[i] {
                        j += 1;
                    }
                    // ascending scan: strict > keeps the smallest label on ties
                    if j - i > best_count {
                        best = buf[i];
                        best_count = j - i;
                    }
                    i = j;
                }
                best
            })
            .collect();
        labels = next;
    }
    Ok(labels)
}
