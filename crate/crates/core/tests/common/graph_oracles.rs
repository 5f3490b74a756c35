//! Brute-force references for the analytics routines. None of these share
//! code with the library.

use std::collections::{HashSet, VecDeque};

/// Dense power iteration with an explicit column-stochastic matrix (f64).
pub fn pagerank_dense(n: usize, edges: &[(u32, u32)], damping: f64, iterations: usize) -> Vec<f64> {
    let mut out_deg = vec![0usize; n];
    for &(a, _) in edges {
        out_deg[a as usize] += 1;
    }
    // m[i][j] = probability of moving j -> i
    let mut m = vec![0.0f64; n * n];
    for &(a, b) in edges {
        m[b as usize * n + a as usize] += 1.0 / out_deg[a as usize] as f64;
    }
    for j in 0..n {
        if out_deg[j] == 0 {
            for i in 0..n {
                m[i * n + j] = 1.0 / n as f64;
            }
        }
    }
    let mut r = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let mut next = vec![(1.0 - damping) / n as f64; n];
        for i in 0..n {
            let row = &m[i * n..(i + 1) * n];
            next[i] += damping * row.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>();
        }
        r = next;
    }
    r
}

fn undirected_adj(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    adj
}

/// Flood-fill component labels (label = first vertex reached).
pub fn wcc_flood(n: usize, edges: &[(u32, u32)]) -> Vec<usize> {
    let adj = undirected_adj(n, edges);
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = s;
                    q.push_back(w);
                }
            }
        }
    }
    comp
}

/// Mutual reachability via Floyd–Warshall transitive closure.
pub fn scc_closure(n: usize, edges: &[(u32, u32)]) -> Vec<usize> {
    let mut reach = vec![false; n * n];
    for i in 0..n {
        reach[i * n + i] = true;
    }
    for &(a, b) in edges {
        reach[a as usize * n + b as usize] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i * n + k] {
                for j in 0..n {
                    if reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .find(|&j| reach[i * n + j] && reach[j * n + i])
                .unwrap()
        })
        .collect()
}

/// One synchronous label-propagation round at a time.
pub fn cdlp_replay(n: usize, edges: &[(u32, u32)], external: &[u64], rounds: usize) -> Vec<u64> {
    let mut labels = external.to_vec();
    for _ in 0..rounds {
        let mut next = labels.clone();
        for v in 0..n {
            let mut counts = std::collections::BTreeMap::new();
            for &(a, b) in edges {
                if a as usize == v {
                    *counts.entry(labels[b as usize]).or_insert(0usize) += 1;
                }
                if b as usize == v {
                    *counts.entry(labels[a as usize]).or_insert(0usize) += 1;
                }
            }
            if let Some(max) = counts.values().max().copied() {
                next[v] = *counts.iter().find(|(_, c)| **c == max).unwrap().0;
            }
        }
        labels = next;
    }
    labels
}

pub fn lcc_naive(n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
    let set: HashSet<(u32, u32)> = edges.iter().copied().collect();
    (0..n as u32)
        .map(|v| {
            let nb: Vec<u32> = {
                let mut s: Vec<u32> = edges
                    .iter()
                    .filter_map(|&(a, b)| {
                        if a == v {
                            Some(b)
                        } else if b == v {
                            Some(a)
                        } else {
                            None
                        }
                    })
                    .filter(|&u| u != v)
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            };
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for &u in &nb {
                for &w in &nb {
                    if u != w && set.contains(&(u, w)) {
                        links += 1;
                    }
                }
            }
            links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

pub fn triangles_cubic(n: usize, edges: &[(u32, u32)]) -> u64 {
    let mut a = vec![false; n * n];
    for &(x, y) in edges {
        if x != y {
            a[x as usize * n + y as usize] = true;
            a[y as usize * n + x as usize] = true;
        }
    }
    let mut t = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if a[i * n + j] && a[j * n + k] && a[i * n + k] {
                    t += 1;
                }
            }
        }
    }
    t
}

/// Queue BFS over an edge list; `None` marks unreachable.
pub fn bfs_naive(n: usize, edges: &[(u32, u32)], s: usize) -> Vec<Option<u64>> {
    let mut d = vec![None; n];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &(a, b) in edges {
            if a as usize == u && d[b as usize].is_none() {
                d[b as usize] = Some(d[u].unwrap() + 1);
                q.push_back(b as usize);
            }
        }
    }
    d
}

pub fn bellman_ford(n: usize, edges: &[(u32, u32)], w: &[f64], s: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n];
    d[s] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for (&(a, b), &wt) in edges.iter().zip(w) {
            let cand = d[a as usize] + wt;
            if cand < d[b as usize] {
                d[b as usize] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// Shortest-path counts by enumerating every simple path from `s`.
pub fn path_enumeration(n: usize, edges: &[(u32, u32)], s: usize) -> (Vec<Option<u64>>, Vec<u64>) {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b as usize);
    }
    let mut best: Vec<Option<u64>> = vec![None; n];
    let mut count = vec![0u64; n];
    let mut on_path = vec![false; n];
    fn walk(
        u: usize,
        len: u64,
        adj: &[Vec<usize>],
        on_path: &mut [bool],
        best: &mut [Option<u64>],
        count: &mut [u64],
    ) {
        match best[u] {
            Some(b) if b < len => {}
            Some(b) if b == len => count[u] += 1,
            _ => {
                best[u] = Some(len);
                count[u] = 1;
            }
        }
        on_path[u] = true;
        for &w in &adj[u] {
            if !on_path[w] {
                walk(w, len + 1, adj, on_path, best, count);
            }
        }
        on_path[u] = false;
    }
    walk(s, 0, &adj, &mut on_path, &mut best, &mut count);
    (best, count)
}

/// Minimum s-t cut over all vertex bipartitions; parallel edges add.
pub fn min_cut_enumeration(n: usize, edges: &[(u32, u32)], w: &[f64], s: usize, t: usize) -> f64 {
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = f64::INFINITY;
    for mask in 0u64..(1 << others.len()) {
        let mut side = vec![false; n];
        side[s] = true;
        for (i, &v) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                side[v] = true;
            }
        }
        let cut: f64 = edges
            .iter()
            .zip(w)
            .filter(|(&(a, b), _)| side[a as usize] && !side[b as usize])
            .map(|(_, &c)| c)
            .sum();
        best = best.min(cut);
    }
    best
}

pub fn kruskal_total(n: usize, edges: &[(u32, u32)], w: &[f64]) -> f64 {
    let mut e: Vec<(f64, usize, usize)> = edges
        .iter()
        .zip(w)
        .filter(|(&(a, b), _)| a != b)
        .map(|(&(a, b), &x)| (x, a as usize, b as usize))
        .collect();
    e.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut total = 0.0;
    for (x, a, b) in e {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            total += x;
        }
    }
    total
}
