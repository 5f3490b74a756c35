use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BenchError, BenchResult};
use crate::query::{Engine, Params};
use crate::store::{GraphStore, NodeId, PropertyValue};

/// Peak resident set size (`VmHWM`) in KiB, where the platform reports it.
pub fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|rest| rest.trim().trim_end_matches("kB").trim().parse().ok())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestReport {
    pub nodes: usize,
    pub edges: usize,
    pub node_secs: f64,
    pub edge_secs: f64,
    pub nodes_per_sec: f64,
    pub edges_per_sec: f64,
    pub vm_hwm_kb: Option<u64>,
}

fn rate(n: usize, secs: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 / secs.max(f64::MIN_POSITIVE)
    }
}

/// Creates `n` nodes with one integer property, then `m` uniformly random
/// edges, timing each phase.
pub fn bench_ingest(n: usize, m: usize, seed: u64) -> BenchResult<(GraphStore, IngestReport)> {
    if n == 0 && m > 0 {
        return Err(BenchError::InvalidParameter(
            "edges need at least one node".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = GraphStore::new();
    let start = Instant::now();
    for i in 0..n {
        g.create_node(&["Node"], [("id", PropertyValue::Int(i as i64))])?;
    }
    let node_secs = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let none: [(&str, PropertyValue); 0] = [];
    for _ in 0..m {
        let a = NodeId(rng.random_range(0..n as u64));
        let b = NodeId(rng.random_range(0..n as u64));
        g.create_edge(a, b, "LINK", none.clone())?;
    }
    let edge_secs = start.elapsed().as_secs_f64();
    let report = IngestReport {
        nodes: n,
        edges: m,
        node_secs,
        edge_secs,
        nodes_per_sec: rate(n, node_secs),
        edges_per_sec: rate(m, edge_secs),
        vm_hwm_kb: peak_memory_kb(),
    };
    Ok((g, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OltpReport {
    pub nodes: usize,
    pub queries: usize,
    pub rows: usize,
    pub elapsed_secs: f64,
    pub queries_per_sec: f64,
    pub plans: u64,
}

/// Point lookups through a unique index followed by a 1-hop expansion,
/// all sharing one cached plan.
pub fn bench_oltp(nodes: usize, queries: usize, seed: u64) -> BenchResult<OltpReport> {
    if nodes == 0 {
        return Err(BenchError::InvalidParameter(
            "oltp needs at least one node".into(),
        ));
    }
    let (mut g, _) = bench_ingest(nodes, nodes * 5, seed)?;
    g.create_index("Node", &["id"], true)?;
    let engine = Engine::new(g.into_shared());
    let text = "MATCH (a:Node {id: $id})-[:LINK]->(b) RETURN b.id";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut rows = 0;
    let start = Instant::now();
    for _ in 0..queries {
        let id = rng.random_range(0..nodes as i64);
        let params = Params::from([("id".to_owned(), PropertyValue::Int(id))]);
        rows += engine.run(text, &params)?.len();
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(OltpReport {
        nodes,
        queries,
        rows,
        elapsed_secs: elapsed,
        queries_per_sec: rate(queries, elapsed),
        plans: engine.counters().plans,
    })
}
