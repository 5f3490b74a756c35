//! Weakly and strongly connected components.
//!
//! Component ids are canonicalized to the smallest external id among the
//! component's members.

use crate::csr::GraphView;

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        // path halving
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (ka, kb) = (self.rank[ra as usize], self.rank[rb as usize]);
        if ka < kb {
            self.parent[ra as usize] = rb;
        } else if ka > kb {
            self.parent[rb as usize] = ra;
        } else {
            self.parent[rb as usize] = ra;
            self.rank[ra as usize] += 1;
        }
    }
}

fn canonicalize(view: &GraphView, root_of: &[u32]) -> Vec<u64> {
    let n = view.vertex_count();
    let mut min_ext = vec![u64::MAX; n];
    for v in 0..n {
        let r = root_of[v] as usize;
        min_ext[r] = min_ext[r].min(view.external_id(v));
    }
    (0..n).map(|v| min_ext[root_of[v] as usize]).collect()
}

/// Union-find over edges taken as undirected.
pub fn wcc(view: &GraphView) -> Vec<u64> {
    let n = view.vertex_count();
    let mut uf = UnionFind::new(n);
    for (u, v) in view.edge_pairs() {
        uf.union(u, v);
    }
    let roots: Vec<u32> = (0..n as u32).map(|v| uf.find(v)).collect();
    canonicalize(view, &roots)
}

/// Tarjan's algorithm with an explicit call stack.
pub fn scc(view: &GraphView) -> Vec<u64> {
    const UNVISITED: u32 = u32::MAX;
    let n = view.vertex_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut comp = vec![0u32; n];
    let mut next_index = 0u32;
    // (vertex, position in its neighbor slice)
    let mut call: Vec<(u32, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != UNVISITED {
            continue;
        }
        call.push((start as u32, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start as u32);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let vu = v as usize;
            let nbrs = view.out_neighbors(vu);
            if *pos < nbrs.len() {
                let w = nbrs[*pos] as usize;
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, 0));
                } else if on_stack[w] {
                    low[vu] = low[vu].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    let p = parent as usize;
                    low[p] = low[p].min(low[vu]);
                }
                if low[vu] == index[vu] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp[w as usize] = v;
                        if w == v {
                            break;
                        }
                    }
                }
            }
        }
    }
    canonicalize(view, &comp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wcc_two_pairs() {
        let v = GraphView::from_edges(4, &[(0, 1), (3, 2)], None, false);
        assert_eq!(wcc(&v), vec![0, 0, 2, 2]);
    }

    #[test]
    fn wcc_edgeless_singletons() {
        let v =
            GraphView::from_edges(5, &[], None, false).with_external_ids(vec![10, 11, 12, 13, 14]);
        assert_eq!(wcc(&v), vec![10, 11, 12, 13, 14]);
    }

    #[test]
    fn scc_cycle_and_dag() {
        let c = GraphView::from_edges(3, &[(0, 1), (1, 2), (2, 0)], None, false);
        assert_eq!(scc(&c), vec![0, 0, 0]);
        let d = GraphView::from_edges(4, &[(0, 1), (1, 2), (0, 3), (3, 2)], None, false);
        assert_eq!(scc(&d), vec![0, 1, 2, 3]);
    }

    #[test]
    fn scc_uses_min_external_id() {
        let v = GraphView::from_edges(3, &[(0, 1), (1, 0)], None, false)
            .with_external_ids(vec![9, 4, 7]);
        assert_eq!(scc(&v), vec![4, 4, 7]);
    }

    #[test]
    fn scc_long_path_does_not_recurse() {
        let n = 200_000u32;
        let edges: Vec<(u32, u32)> = (0..n - 1)
            .map(|i| (i, i + 1))
            .chain(std::iter::once((n - 1, 0)))
            .collect();
        let v = GraphView::from_edges(n as usize, &edges, None, false);
        assert!(scc(&v).iter().all(|&c| c == 0));
    }
}
