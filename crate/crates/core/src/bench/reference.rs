//! Brute-force references. Nothing here calls into [`crate::algos`] or
//! [`crate::csr`]; the input files are parsed again from scratch.

use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::validate::ValidationAlgorithm;
use super::{io_err, BenchError, BenchResult};

/// Largest vertex count the oracles accept.
pub const ORACLE_LIMIT: usize = 10_000;

/// Edge list indexed by file order. Undirected inputs list every edge in
/// both directions, self-loops once.
#[derive(Debug, Clone, PartialEq)]
pub struct RawGraph {
    pub ids: Vec<u64>,
    pub edges: Vec<(usize, usize, f64)>,
    pub directed: bool,
}

fn lines(path: &Path) -> BenchResult<Vec<(usize, String)>> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, l) in BufReader::new(f).lines().enumerate() {
        let l = l.map_err(|e| io_err(path, e))?;
        let t = l.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push((i + 1, t.to_owned()));
        }
    }
    Ok(out)
}

fn bad(path: &Path, line: usize, message: String) -> BenchError {
    BenchError::Parse {
        file: path.display().to_string(),
        line,
        message,
    }
}

impl RawGraph {
    pub fn read(vertices: &Path, edges: &Path, directed: bool) -> BenchResult<RawGraph> {
        let mut ids = Vec::new();
        let mut pos = HashMap::new();
        for (no, t) in lines(vertices)? {
            let id: u64 = t
                .parse()
                .map_err(|_| bad(vertices, no, format!("bad vertex id {t:?}")))?;
            pos.insert(id, ids.len());
            ids.push(id);
        }
        let mut list = Vec::new();
        for (no, t) in lines(edges)? {
            let f: Vec<&str> = t.split_whitespace().collect();
            if f.len() < 2 || f.len() > 3 {
                return Err(bad(
                    edges,
                    no,
                    format!("expected 2 or 3 fields, got {}", f.len()),
                ));
            }
            let end = |s: &str| -> BenchResult<usize> {
                let id: u64 = s
                    .parse()
                    .map_err(|_| bad(edges, no, format!("bad vertex id {s:?}")))?;
                pos.get(&id)
                    .copied()
                    .ok_or_else(|| bad(edges, no, format!("unknown vertex {id}")))
            };
            let (a, b) = (end(f[0])?, end(f[1])?);
            let w = match f.get(2) {
                Some(s) => s
                    .parse()
                    .map_err(|_| bad(edges, no, format!("bad weight {s:?}")))?,
                None => 1.0,
            };
            list.push((a, b, w));
            if !directed && a != b {
                list.push((b, a, w));
            }
        }
        Ok(RawGraph {
            ids,
            edges: list,
            directed,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    fn out_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
        }
        adj
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefValue {
    Int(u64),
    Float(f64),
    Infinity,
}

impl RefValue {
    fn render(&self) -> String {
        match self {
            RefValue::Int(i) => i.to_string(),
            RefValue::Float(x) => format!("{x:e}"),
            RefValue::Infinity => "infinity".to_owned(),
        }
    }

    fn parse(s: &str) -> Option<RefValue> {
        if s == "infinity" {
            return Some(RefValue::Infinity);
        }
        if let Ok(i) = s.parse::<u64>() {
            return Some(RefValue::Int(i));
        }
        s.parse::<f64>().ok().map(RefValue::Float)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            RefValue::Int(i) => *i as f64,
            RefValue::Float(x) => *x,
            RefValue::Infinity => f64::INFINITY,
        }
    }
}

/// One value per vertex, sorted by external id.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub values: Vec<(u64, RefValue)>,
}

impl Reference {
    pub fn from_pairs(mut values: Vec<(u64, RefValue)>) -> Reference {
        values.sort_by_key(|p| p.0);
        Reference { values }
    }

    pub fn write(&self, path: &Path) -> BenchResult<()> {
        let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
        for (id, v) in &self.values {
            writeln!(w, "{id} {}", v.render()).map_err(|e| io_err(path, e))?;
        }
        w.flush().map_err(|e| io_err(path, e))
    }

    pub fn read(path: &Path) -> BenchResult<Reference> {
        if !path.exists() {
            return Err(BenchError::MissingReference(PathBuf::from(path)));
        }
        let mut values = Vec::new();
        for (no, t) in lines(path)? {
            let mut f = t.split_whitespace();
            let id = f.next().and_then(|s| s.parse().ok());
            let v = f.next().and_then(RefValue::parse);
            match (id, v, f.next()) {
                (Some(id), Some(v), None) => values.push((id, v)),
                _ => return Err(bad(path, no, format!("expected `id value`, got {t:?}"))),
            }
        }
        Ok(Reference::from_pairs(values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub source: Option<u64>,
    pub damping: f64,
    pub iterations: usize,
}

fn source_index(g: &RawGraph, source: Option<u64>) -> BenchResult<usize> {
    let s = source.ok_or_else(|| BenchError::InvalidParameter("source vertex required".into()))?;
    g.ids
        .iter()
        .position(|&id| id == s)
        .ok_or_else(|| BenchError::InvalidParameter(format!("unknown source vertex {s}")))
}

pub fn generate_reference(
    g: &RawGraph,
    algorithm: ValidationAlgorithm,
    p: &OracleParams,
) -> BenchResult<Reference> {
    if g.len() > ORACLE_LIMIT {
        return Err(BenchError::TooLarge {
            n: g.len(),
            limit: ORACLE_LIMIT,
        });
    }
    let values: Vec<RefValue> = match algorithm {
        ValidationAlgorithm::Bfs => queue_bfs(g, source_index(g, p.source)?)
            .into_iter()
            .map(|d| d.map_or(RefValue::Infinity, |d| RefValue::Int(d as u64)))
            .collect(),
        ValidationAlgorithm::Sssp => bellman_ford(g, source_index(g, p.source)?)
            .into_iter()
            .map(|d| {
                if d.is_finite() {
                    RefValue::Float(d)
                } else {
                    RefValue::Infinity
                }
            })
            .collect(),
        ValidationAlgorithm::PageRank => dense_pagerank(g, p.damping, p.iterations)
            .into_iter()
            .map(RefValue::Float)
            .collect(),
        ValidationAlgorithm::Wcc => flood_wcc(g).into_iter().map(RefValue::Int).collect(),
        ValidationAlgorithm::Scc => closure_scc(g).into_iter().map(RefValue::Int).collect(),
        ValidationAlgorithm::Cdlp => replay_cdlp(g, p.iterations)
            .into_iter()
            .map(RefValue::Int)
            .collect(),
        ValidationAlgorithm::Lcc => naive_lcc(g).into_iter().map(RefValue::Float).collect(),
    };
    Ok(Reference::from_pairs(
        g.ids.iter().copied().zip(values).collect(),
    ))
}

pub fn queue_bfs(g: &RawGraph, s: usize) -> Vec<Option<usize>> {
    let adj = g.out_lists();
    let mut depth = vec![None; g.len()];
    depth[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        let du = depth[u].unwrap();
        for &v in &adj[u] {
            if depth[v].is_none() {
                depth[v] = Some(du + 1);
                q.push_back(v);
            }
        }
    }
    depth
}

pub fn bellman_ford(g: &RawGraph, s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.len()];
    dist[s] = 0.0;
    for _ in 0..g.len() {
        let mut changed = false;
        for &(a, b, w) in &g.edges {
            if dist[a] + w < dist[b] {
                dist[b] = dist[a] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Power iteration on an explicit transition matrix, kept in f32 so a
/// 10K-vertex matrix fits in memory; sums accumulate in f64.
pub fn dense_pagerank(g: &RawGraph, damping: f64, iterations: usize) -> Vec<f64> {
    let n = g.len();
    let mut out_deg = vec![0usize; n];
    for &(a, _, _) in &g.edges {
        out_deg[a] += 1;
    }
    // row i holds the probability of stepping j -> i
    let mut m = vec![0f32; n * n];
    for &(a, b, _) in &g.edges {
        m[b * n + a] += (1.0 / out_deg[a] as f64) as f32;
    }
    let uniform = (1.0 / n as f64) as f32;
    for (j, d) in out_deg.iter().enumerate() {
        if *d == 0 {
            for i in 0..n {
                m[i * n + j] = uniform;
            }
        }
    }
    let mut r = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let next: Vec<f64> = (0..n)
            .map(|i| {
                let row = &m[i * n..(i + 1) * n];
                let s: f64 = row.iter().zip(&r).map(|(a, b)| *a as f64 * b).sum();
                (1.0 - damping) / n as f64 + damping * s
            })
            .collect();
        r = next;
    }
    r
}

/// Component label = smallest external id in the component.
pub fn flood_wcc(g: &RawGraph) -> Vec<u64> {
    let n = g.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut label = vec![u64::MAX; n];
    for s in 0..n {
        if label[s] != u64::MAX {
            continue;
        }
        let mut members = vec![s];
        let mut stack = vec![s];
        label[s] = 0;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if label[v] == u64::MAX {
                    label[v] = 0;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        let min = members.iter().map(|&v| g.ids[v]).min().unwrap();
        for v in members {
            label[v] = min;
        }
    }
    label
}

/// Reachability bitsets from every vertex; u and v share a component iff
/// each reaches the other.
pub fn closure_scc(g: &RawGraph) -> Vec<u64> {
    let n = g.len();
    let words = n.div_ceil(64);
    let adj = g.out_lists();
    let mut reach = vec![0u64; n * words];
    for s in 0..n {
        let row = &mut reach[s * words..(s + 1) * words];
        row[s / 64] |= 1 << (s % 64);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if row[v / 64] & (1 << (v % 64)) == 0 {
                    row[v / 64] |= 1 << (v % 64);
                    stack.push(v);
                }
            }
        }
    }
    let has = |a: usize, b: usize| reach[a * words + b / 64] & (1 << (b % 64)) != 0;
    let mut label = vec![u64::MAX; n];
    for u in 0..n {
        if label[u] != u64::MAX {
            continue;
        }
        let members: Vec<usize> = (u..n).filter(|&v| has(u, v) && has(v, u)).collect();
        let min = members.iter().map(|&v| g.ids[v]).min().unwrap();
        for v in members {
            label[v] = min;
        }
    }
    label
}

/// Synchronous label propagation replayed with hash-map counting; labels
/// start as external ids, neighbors are counted over in- and out-edges
/// with multiplicity, ties go to the smallest label.
pub fn replay_cdlp(g: &RawGraph, iterations: usize) -> Vec<u64> {
    let n = g.len();
    let mut nbrs = vec![Vec::new(); n];
    if g.directed {
        for &(a, b, _) in &g.edges {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    } else {
        for &(a, b, _) in &g.edges {
            nbrs[a].push(b);
        }
    }
    let mut labels = g.ids.clone();
    for _ in 0..iterations {
        let mut next = labels.clone();
        for v in 0..n {
            let mut counts: HashMap<u64, usize> = HashMap::new();
            for &u in &nbrs[v] {
                *counts.entry(labels[u]).or_default() += 1;
            }
            if let Some((&l, _)) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))) {
                next[v] = l;
            }
        }
        labels = next;
    }
    labels
}

/// Ordered neighbour pairs (u, w) joined by an edge u -> w, over |N|(|N|-1),
/// where N is the set of distinct in- and out-neighbours other than v.
pub fn naive_lcc(g: &RawGraph) -> Vec<f64> {
    let n = g.len();
    let mut edge = std::collections::HashSet::new();
    let mut nbrs = vec![std::collections::BTreeSet::new(); n];
    for &(a, b, _) in &g.edges {
        edge.insert((a, b));
        if a != b {
            nbrs[a].insert(b);
            nbrs[b].insert(a);
        }
    }
    (0..n)
        .map(|v| {
            let k = nbrs[v].len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for &u in &nbrs[v] {
                for &w in &nbrs[v] {
                    if u != w && edge.contains(&(u, w)) {
                        links += 1;
                    }
                }
            }
            links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}
