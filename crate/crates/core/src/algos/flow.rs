use std::collections::VecDeque;

use super::{check_vertex, AlgoError, AlgoResult};
use crate::csr::GraphView;

struct Residual {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<u32>,
    cap: Vec<f64>,
}

const NIL: usize = usize::MAX;

impl Residual {
    fn add_pair(&mut self, u: usize, v: usize, c: f64) {
        for (a, b, cap) in [(u, v, c), (v, u, 0.0)] {
            self.to.push(b as u32);
            self.cap.push(cap);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }
}

/// Edmonds–Karp maximum flow; capacities are edge weights (1.0 when the
/// view is unweighted). Parallel edges add their capacities.
pub fn max_flow(view: &GraphView, source: usize, sink: usize) -> AlgoResult<f64> {
    check_vertex(view, source)?;
    check_vertex(view, sink)?;
    if source == sink {
        return Err(AlgoError::SameSourceSink);
    }
    if let Some(w) = view.weights() {
        if let Some(bad) = w.iter().position(|x| !(*x >= 0.0)) {
            return Err(AlgoError::NegativeWeight(bad));
        }
    }
    let n = view.vertex_count();
    let mut g = Residual {
        head: vec![NIL; n],
        next: Vec::new(),
        to: Vec::new(),
        cap: Vec::new(),
    };
    let offsets = view.out_offsets();
    for u in 0..n {
        for e in offsets[u]..offsets[u + 1] {
            let v = view.out_targets()[e] as usize;
            if u != v {
                g.add_pair(u, v, view.weight(e));
            }
        }
    }

    let mut flow = 0.0;
    let mut via = vec![NIL; n];
    loop {
        via.iter_mut().for_each(|x| *x = NIL);
        let mut queue = VecDeque::from([source]);
        let mut reached = false;
        'bfs: while let Some(u) = queue.pop_front() {
            let mut e = g.head[u];
            while e != NIL {
                let v = g.to[e] as usize;
                if g.cap[e] > 0.0 && v != source && via[v] == NIL {
                    via[v] = e;
                    if v == sink {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
                e = g.next[e];
            }
        }
        if !reached {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = sink;
        while v != source {
            let e = via[v];
            bottleneck = bottleneck.min(g.cap[e]);
            v = g.to[e ^ 1] as usize;
        }
        let mut v = sink;
        while v != source {
            let e = via[v];
            g.cap[e] -= bottleneck;
            g.cap[e ^ 1] += bottleneck;
            v = g.to[e ^ 1] as usize;
        }
        flow += bottleneck;
    }
    Ok(flow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let v = GraphView::from_edges(2, &[(0, 1)], Some(&[7.0]), false);
        assert_eq!(max_flow(&v, 0, 1).unwrap(), 7.0);
    }

    #[test]
    fn disconnected_is_zero() {
        let v = GraphView::from_edges(3, &[(0, 1)], None, false);
        assert_eq!(max_flow(&v, 0, 2).unwrap(), 0.0);
        assert_eq!(max_flow(&v, 1, 1), Err(AlgoError::SameSourceSink));
    }

    #[test]
    fn classic_network() {
        // CLRS figure 26.1: max flow 23
        let e = [
            (0, 1),
            (0, 2),
            (1, 3),
            (2, 1),
            (2, 4),
            (3, 2),
            (3, 5),
            (4, 3),
            (4, 5),
        ];
        let w = [16.0, 13.0, 12.0, 4.0, 14.0, 9.0, 20.0, 7.0, 4.0];
        let v = GraphView::from_edges(6, &e, Some(&w), false);
        assert_eq!(max_flow(&v, 0, 5).unwrap(), 23.0);
    }
}
