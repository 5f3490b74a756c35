use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use ordered_float::OrderedFloat;

use crate::csr::GraphView;

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningForest {
    /// `(u, v, weight)` with `u < v`, in the order Prim added them.
    pub edges: Vec<(u32, u32, f64)>,
    pub total_weight: f64,
}

/// Prim's algorithm on the undirected skeleton, one tree per component.
/// A vertex pair's weight is the minimum over all stored edges between them.
/// Ties are broken by `(weight, smaller endpoint, larger endpoint)`.
pub fn mst_prim(view: &GraphView) -> SpanningForest {
    let n = view.vertex_count();
    let mut best: HashMap<(u32, u32), f64> = HashMap::new();
    for u in 0..n {
        let base = view.out_offsets()[u];
        for (i, &v) in view.out_neighbors(u).iter().enumerate() {
            let u32_ = u as u32;
            if u32_ == v {
                continue;
            }
            let key = (u32_.min(v), u32_.max(v));
            let w = view.weight(base + i);
            best.entry(key).and_modify(|x| *x = x.min(w)).or_insert(w);
        }
    }
    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut pairs: Vec<_> = best.into_iter().collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    for ((a, b), w) in pairs {
        adj[a as usize].push((b, w));
        adj[b as usize].push((a, w));
    }

    let mut in_tree = vec![false; n];
    let mut edges = Vec::new();
    let mut total = 0.0;
    let mut heap: BinaryHeap<Reverse<(OrderedFloat<f64>, u32, u32, u32)>> = BinaryHeap::new();
    for root in 0..n {
        if in_tree[root] {
            continue;
        }
        in_tree[root] = true;
        for &(w, wt) in &adj[root] {
            let r = root as u32;
            heap.push(Reverse((OrderedFloat(wt), r.min(w), r.max(w), w)));
        }
        while let Some(Reverse((OrderedFloat(wt), a, b, to))) = heap.pop() {
            if in_tree[to as usize] {
                continue;
            }
            in_tree[to as usize] = true;
            edges.push((a, b, wt));
            total += wt;
            for &(w, wt2) in &adj[to as usize] {
                if !in_tree[w as usize] {
                    heap.push(Reverse((OrderedFloat(wt2), to.min(w), to.max(w), w)));
                }
            }
        }
    }
    SpanningForest {
        edges,
        total_weight: total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_total() {
        let v = GraphView::from_edges(3, &[(0, 1), (1, 2), (0, 2)], Some(&[1.0, 2.0, 3.0]), false);
        let f = mst_prim(&v);
        assert_eq!(f.total_weight, 3.0);
        assert_eq!(f.edges, vec![(0, 1, 1.0), (1, 2, 2.0)]);
    }

    #[test]
    fn forest_of_two() {
        let v = GraphView::from_edges(4, &[(0, 1), (3, 2)], Some(&[4.0, 5.0]), false);
        let f = mst_prim(&v);
        assert_eq!(f.edges.len(), 2);
        assert_eq!(f.total_weight, 9.0);
    }

    #[test]
    fn min_over_directions() {
        let v = GraphView::from_edges(2, &[(0, 1), (1, 0)], Some(&[4.0, 2.0]), false);
        assert_eq!(mst_prim(&v).total_weight, 2.0);
    }
}
