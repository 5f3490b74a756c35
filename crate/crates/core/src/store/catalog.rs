//! Planner statistics maintained incrementally by the store.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::index::IndexDescriptor;
use super::value::{IndexKey, KeyId, LabelId, NodeId, RelTypeId};

/// Values retained per (label, key) for distinct-value estimation.
pub const RESERVOIR_SIZE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct TripleKey {
    pub src: LabelId,
    pub rel: RelTypeId,
    pub dst: LabelId,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct TripleAcc {
    pub count: u64,
    pub sources: HashMap<NodeId, u32>,
    pub targets: HashMap<NodeId, u32>,
}

fn bump(map: &mut HashMap<NodeId, u32>, id: NodeId) {
    *map.entry(id).or_insert(0) += 1;
}

fn drop_one(map: &mut HashMap<NodeId, u32>, id: NodeId) {
    if let Some(c) = map.get_mut(&id) {
        *c -= 1;
        if *c == 0 {
            map.remove(&id);
        }
    }
}

impl TripleAcc {
    pub fn add(&mut self, src: NodeId, dst: NodeId) {
        self.count += 1;
        bump(&mut self.sources, src);
        bump(&mut self.targets, dst);
    }

    pub fn remove(&mut self, src: NodeId, dst: NodeId) {
        self.count -= 1;
        drop_one(&mut self.sources, src);
        drop_one(&mut self.targets, dst);
    }
}

/// Algorithm-R reservoir over inserted property values.
#[derive(Debug, Clone)]
pub(crate) struct Reservoir {
    seen: u64,
    sample: Vec<IndexKey>,
}

impl Reservoir {
    fn new() -> Self {
        Reservoir {
            seen: 0,
            sample: Vec::new(),
        }
    }

    fn offer(&mut self, key: IndexKey, rng: &mut ChaCha8Rng) {
        self.seen += 1;
        if self.sample.len() < RESERVOIR_SIZE {
            self.sample.push(key);
        } else {
            let j = rng.random_range(0..self.seen);
            if (j as usize) < RESERVOIR_SIZE {
                self.sample[j as usize] = key;
            }
        }
    }

    /// Exact while the reservoir holds every value; otherwise the GEE
    /// estimator `sqrt(N/n)·f1 + Σ_{j≥2} f_j`.
    fn estimate(&self) -> DistinctEstimate {
        let mut freq: HashMap<&IndexKey, u64> = HashMap::new();
        for k in &self.sample {
            *freq.entry(k).or_insert(0) += 1;
        }
        let distinct_in_sample = freq.len() as f64;
        let n = self.sample.len() as f64;
        let estimate = if self.seen as usize <= RESERVOIR_SIZE || n == 0.0 {
            distinct_in_sample
        } else {
            let f1 = freq.values().filter(|&&c| c == 1).count() as f64;
            let rest = distinct_in_sample - f1;
            ((self.seen as f64 / n).sqrt() * f1 + rest).min(self.seen as f64)
        };
        DistinctEstimate {
            estimate,
            sample_size: self.sample.len(),
            values_seen: self.seen,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistinctEstimate {
    pub estimate: f64,
    pub sample_size: usize,
    pub values_seen: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TripleStats {
    pub count: u64,
    pub distinct_sources: u64,
    pub distinct_targets: u64,
}

#[derive(Debug)]
pub(crate) struct CatalogState {
    pub label_counts: Vec<u64>,
    pub type_counts: Vec<u64>,
    pub triples: HashMap<TripleKey, TripleAcc>,
    samples: HashMap<(LabelId, KeyId), Reservoir>,
    rng: ChaCha8Rng,
    pub ddl_version: u64,
}

impl Default for CatalogState {
    fn default() -> Self {
        CatalogState {
            label_counts: Vec::new(),
            type_counts: Vec::new(),
            triples: HashMap::new(),
            samples: HashMap::new(),
            rng: ChaCha8Rng::seed_from_u64(0x5eed),
            ddl_version: 0,
        }
    }
}

impl Clone for CatalogState {
    fn clone(&self) -> Self {
        CatalogState {
            label_counts: self.label_counts.clone(),
            type_counts: self.type_counts.clone(),
            triples: self.triples.clone(),
            samples: self.samples.clone(),
            rng: self.rng.clone(),
            ddl_version: self.ddl_version,
        }
    }
}

impl CatalogState {
    pub fn label_delta(&mut self, label: LabelId, delta: i64) {
        if self.label_counts.len() <= label.index() {
            self.label_counts.resize(label.index() + 1, 0);
        }
        let c = &mut self.label_counts[label.index()];
        *c = (*c as i64 + delta) as u64;
    }

    pub fn type_delta(&mut self, rel: RelTypeId, delta: i64) {
        if self.type_counts.len() <= rel.index() {
            self.type_counts.resize(rel.index() + 1, 0);
        }
        let c = &mut self.type_counts[rel.index()];
        *c = (*c as i64 + delta) as u64;
    }

    pub fn sample(&mut self, label: LabelId, key: KeyId, value: IndexKey) {
        let res = self
            .samples
            .entry((label, key))
            .or_insert_with(Reservoir::new);
        res.offer(value, &mut self.rng);
    }

    pub fn distinct(&self, label: LabelId, key: KeyId) -> Option<DistinctEstimate> {
        self.samples.get(&(label, key)).map(Reservoir::estimate)
    }

    pub fn sample_keys(&self) -> impl Iterator<Item = &(LabelId, KeyId)> {
        self.samples.keys()
    }
}

/// Version stamp used to decide whether cached plans are stale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CatalogVersion {
    pub ddl: u64,
    pub nodes: u64,
    pub edges: u64,
}

impl CatalogVersion {
    /// True when no DDL happened and both counts stayed within a factor of
    /// two of the planned-at values.
    pub fn compatible_with(&self, current: &CatalogVersion) -> bool {
        fn within(a: u64, b: u64) -> bool {
            let (a, b) = (a.max(1) as f64, b.max(1) as f64);
            a / b <= 2.0 && b / a <= 2.0
        }
        self.ddl == current.ddl
            && within(self.nodes, current.nodes)
            && within(self.edges, current.edges)
    }
}

/// Immutable statistics snapshot handed to the planner.
#[derive(Debug, Clone, Default, Serialize)]
pub struct GraphCatalog {
    pub version: CatalogVersion,
    pub node_count: u64,
    pub edge_count: u64,
    pub label_counts: HashMap<String, u64>,
    pub type_counts: HashMap<String, u64>,
    #[serde(serialize_with = "ser_triples")]
    pub triples: HashMap<(String, String, String), TripleStats>,
    #[serde(serialize_with = "ser_pairs")]
    pub distinct: HashMap<(String, String), DistinctEstimate>,
    pub indexes: Vec<IndexDescriptor>,
}

fn ser_triples<S: serde::Serializer>(
    m: &HashMap<(String, String, String), TripleStats>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut v: Vec<_> = m
        .iter()
        .map(|((a, b, c), t)| (format!("({a})-[{b}]->({c})"), t))
        .collect();
    v.sort_by(|x, y| x.0.cmp(&y.0));
    s.collect_map(v)
}

fn ser_pairs<S: serde::Serializer>(
    m: &HashMap<(String, String), DistinctEstimate>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut v: Vec<_> = m
        .iter()
        .map(|((a, b), t)| (format!("{a}.{b}"), t))
        .collect();
    v.sort_by(|x, y| x.0.cmp(&y.0));
    s.collect_map(v)
}

impl GraphCatalog {
    pub fn label_count(&self, label: &str) -> u64 {
        self.label_counts.get(label).copied().unwrap_or(0)
    }

    pub fn type_count(&self, rel: &str) -> u64 {
        self.type_counts.get(rel).copied().unwrap_or(0)
    }

    pub fn triple(&self, src: &str, rel: &str, dst: &str) -> TripleStats {
        self.triples
            .get(&(src.to_owned(), rel.to_owned(), dst.to_owned()))
            .copied()
            .unwrap_or_default()
    }

    /// Aggregates triple statistics over every triple matching the known
    /// parts; `None` acts as a wildcard.
    pub fn triple_sum(
        &self,
        src: Option<&str>,
        rel: Option<&str>,
        dst: Option<&str>,
    ) -> TripleStats {
        let mut out = TripleStats::default();
        for ((s, r, d), t) in &self.triples {
            if src.is_some_and(|x| x != s)
                || rel.is_some_and(|x| x != r)
                || dst.is_some_and(|x| x != d)
            {
                continue;
            }
            out.count += t.count;
            out.distinct_sources += t.distinct_sources;
            out.distinct_targets += t.distinct_targets;
        }
        out
    }

    pub fn distinct_values(&self, label: &str, key: &str) -> Option<DistinctEstimate> {
        self.distinct
            .get(&(label.to_owned(), key.to_owned()))
            .copied()
    }

    pub fn indexes_on(&self, label: &str) -> impl Iterator<Item = &IndexDescriptor> {
        let label = label.to_owned();
        self.indexes.iter().filter(move |d| d.label == label)
    }
}
