//! Exact k-nearest-neighbour search over vector properties.
//!
//! [`VectorIndexFlat`] keeps every vector of one property in a row-major
//! `f32` matrix and answers queries by full scan. Scores are computed in
//! `f64`. Results are ordered best first and ties go to the smaller
//! [`NodeId`].

use std::collections::HashMap;
use std::io::BufRead;
use std::str::FromStr;
use std::sync::Arc;

use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::store::{GraphStore, NodeId, PropertyValue, StoreError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VectorError {
    #[error("vector has dimension {found}, index expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector index is empty")]
    EmptyIndex,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("unknown metric {0:?} (expected cosine, l2 or dot)")]
    UnknownMetric(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Store(#[from] StoreError),
}

pub type VectorResult<T> = Result<T, VectorError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Cosine,
    L2,
    Dot,
}

impl Metric {
    /// Whether a larger score ranks first.
    pub fn higher_is_better(self) -> bool {
        !matches!(self, Metric::L2)
    }
}

impl FromStr for Metric {
    type Err = VectorError;
    fn from_str(s: &str) -> VectorResult<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cosine" => Ok(Metric::Cosine),
            "l2" | "euclidean" => Ok(Metric::L2),
            "dot" | "dot_product" => Ok(Metric::Dot),
            _ => Err(VectorError::UnknownMetric(s.to_owned())),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Metric::Cosine => "cosine",
            Metric::L2 => "l2",
            Metric::Dot => "dot",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub node: NodeId,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct VectorIndexFlat {
    key: String,
    dim: usize,
    data: Vec<f32>,
    nodes: Vec<NodeId>,
    norms: Vec<f64>,
}

fn dot64(a: &[f32], b: &[f32]) -> f64 {
    a.iter().zip(b).map(|(x, y)| *x as f64 * *y as f64).sum()
}

fn norm64(a: &[f32]) -> f64 {
    dot64(a, a).sqrt()
}

impl VectorIndexFlat {
    pub fn new(key: impl Into<String>, dim: usize) -> Self {
        Self {
            key: key.into(),
            dim,
            data: Vec::new(),
            nodes: Vec::new(),
            norms: Vec::new(),
        }
    }

    /// Collects every live node (optionally restricted to `label`) whose
    /// `key` property is a vector. The first vector fixes the dimension.
    pub fn build(store: &GraphStore, label: Option<&str>, key: &str) -> VectorResult<Self> {
        let mut index: Option<Self> = None;
        let ids: Vec<NodeId> = match label {
            Some(l) => match store.label_id(l) {
                Some(lid) => store.nodes_with_label(lid).collect(),
                None => Vec::new(),
            },
            None => store.nodes().collect(),
        };
        for id in ids {
            if let Some(PropertyValue::Vector(v)) = store.node_unchecked(id).property(key) {
                index
                    .get_or_insert_with(|| Self::new(key, v.len()))
                    .insert(id, v)?;
            }
        }
        Ok(index.unwrap_or_else(|| Self::new(key, 0)))
    }

    pub fn insert(&mut self, node: NodeId, vector: &[f32]) -> VectorResult<()> {
        if vector.len() != self.dim {
            return Err(VectorError::DimensionMismatch {
                expected: self.dim,
                found: vector.len(),
            });
        }
        self.data.extend_from_slice(vector);
        self.nodes.push(node);
        self.norms.push(norm64(vector));
        Ok(())
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Score of stored row `i` against `query`.
    fn score(&self, i: usize, query: &[f32], query_norm: f64, metric: Metric) -> f64 {
        let row = self.row(i);
        match metric {
            Metric::Dot => dot64(row, query),
            Metric::Cosine => {
                let denom = self.norms[i] * query_norm;
                if denom == 0.0 {
                    0.0
                } else {
                    dot64(row, query) / denom
                }
            }
            Metric::L2 => row
                .iter()
                .zip(query)
                .map(|(a, b)| {
                    let d = *a as f64 - *b as f64;
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
        }
    }

    pub fn knn(&self, query: &[f32], k: usize, metric: Metric) -> VectorResult<Vec<Hit>> {
        if k == 0 {
            return Err(VectorError::InvalidK);
        }
        if self.is_empty() {
            return Err(VectorError::EmptyIndex);
        }
        if query.len() != self.dim {
            return Err(VectorError::DimensionMismatch {
                expected: self.dim,
                found: query.len(),
            });
        }
        let qn = norm64(query);
        let mut hits: Vec<Hit> = (0..self.len())
            .into_par_iter()
            .map(|i| Hit {
                node: self.nodes[i],
                score: self.score(i, query, qn, metric),
            })
            .collect();
        let order = |a: &Hit, b: &Hit| {
            let by_score = if metric.higher_is_better() {
                b.score.total_cmp(&a.score)
            } else {
                a.score.total_cmp(&b.score)
            };
            by_score.then(a.node.cmp(&b.node))
        };
        let k = k.min(hits.len());
        if k < hits.len() {
            hits.select_nth_unstable_by(k - 1, order);
            hits.truncate(k);
        }
        hits.sort_by(order);
        Ok(hits)
    }
}

/// Cache of flat indexes keyed by `(label, key)`, rebuilt when the store has
/// been mutated since the cached copy was built.
#[derive(Debug, Default)]
pub struct VectorIndexRegistry {
    entries: RwLock<HashMap<(Option<String>, String), (u64, Arc<VectorIndexFlat>)>>,
}

impl VectorIndexRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        store: &GraphStore,
        label: Option<&str>,
        key: &str,
    ) -> VectorResult<Arc<VectorIndexFlat>> {
        let id = (label.map(str::to_owned), key.to_owned());
        let version = store.mutation_count();
        if let Some((v, idx)) = self.entries.read().get(&id) {
            if *v == version {
                return Ok(Arc::clone(idx));
            }
        }
        let fresh = Arc::new(VectorIndexFlat::build(store, label, key)?);
        self.entries
            .write()
            .insert(id, (version, Arc::clone(&fresh)));
        Ok(fresh)
    }
}

/// Parses `external_id, v0, v1, ...` lines. Blank lines and lines starting
/// with `#` are skipped; every row must have the same dimension.
pub fn parse_vector_csv(reader: impl BufRead) -> VectorResult<Vec<(u64, Vec<f32>)>> {
    let mut rows = Vec::new();
    let mut dim = None;
    for (n, line) in reader.lines().enumerate() {
        let line_no = n + 1;
        let line = line.map_err(|e| VectorError::Store(StoreError::Io(e.to_string())))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut fields = t.split(',').map(str::trim);
        let parse_err = |message: String| VectorError::Parse {
            line: line_no,
            message,
        };
        let ext: u64 = fields
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|e| parse_err(format!("bad external id: {e}")))?;
        let v: Vec<f32> = fields
            .map(|f| {
                f.parse::<f32>()
                    .map_err(|e| parse_err(format!("bad component {f:?}: {e}")))
            })
            .collect::<VectorResult<_>>()?;
        match dim {
            None => dim = Some(v.len()),
            Some(d) if d != v.len() => {
                return Err(VectorError::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                })
            }
            _ => {}
        }
        rows.push((ext, v));
    }
    Ok(rows)
}

/// Loads a vector CSV into the `key` property of the nodes whose external
/// ids match. Returns the number of nodes updated.
pub fn load_vector_csv(
    store: &mut GraphStore,
    reader: impl BufRead,
    key: &str,
) -> VectorResult<usize> {
    let rows = parse_vector_csv(reader)?;
    let by_ext: HashMap<u64, NodeId> = store
        .nodes()
        .map(|id| (store.node_unchecked(id).external_id(), id))
        .collect();
    let mut updated = 0;
    for (ext, v) in rows {
        let node = *by_ext.get(&ext).ok_or_else(|| VectorError::Parse {
            line: 0,
            message: format!("no node with external id {ext}"),
        })?;
        store.set_property(node, key, PropertyValue::Vector(v))?;
        updated += 1;
    }
    Ok(updated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(rows: &[&[f32]]) -> VectorIndexFlat {
        let mut idx = VectorIndexFlat::new("emb", rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            idx.insert(NodeId(i as u64), r).unwrap();
        }
        idx
    }

    #[test]
    fn exact_match_first() {
        let idx = index(&[&[1.0, 0.0], &[0.6, 0.8], &[0.0, 1.0]]);
        let hits = idx.knn(&[0.6, 0.8], 2, Metric::Cosine).unwrap();
        assert_eq!(hits[0].node, NodeId(1));
        assert!((hits[0].score - 1.0).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_and_zero_vectors() {
        let idx = index(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let hits = idx.knn(&[0.0, 1.0], 2, Metric::Cosine).unwrap();
        assert_eq!(
            hits.iter().map(|h| h.score).collect::<Vec<_>>(),
            vec![0.0, 0.0]
        );
        // equal scores: ascending node id
        assert_eq!(hits[0].node, NodeId(0));
        let z = idx.knn(&[0.0, 0.0], 1, Metric::Cosine).unwrap();
        assert_eq!(z[0].score, 0.0);
    }

    #[test]
    fn l2_ascending_and_k_clamped() {
        let idx = index(&[&[0.0], &[5.0], &[1.0]]);
        let hits = idx.knn(&[0.2], 10, Metric::L2).unwrap();
        assert_eq!(
            hits.iter().map(|h| h.node.0).collect::<Vec<_>>(),
            vec![0, 2, 1]
        );
    }

    #[test]
    fn errors() {
        let idx = index(&[&[1.0, 2.0]]);
        assert_eq!(
            idx.knn(&[1.0], 1, Metric::Dot),
            Err(VectorError::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            idx.knn(&[1.0, 2.0], 0, Metric::Dot),
            Err(VectorError::InvalidK)
        );
        assert_eq!(
            VectorIndexFlat::new("x", 2).knn(&[1.0, 2.0], 1, Metric::Dot),
            Err(VectorError::EmptyIndex)
        );
        assert!("manhattan".parse::<Metric>().is_err());
    }

    #[test]
    fn csv_roundtrip_into_store() {
        let mut store = GraphStore::new();
        let a = store
            .create_node(&["Doc"], Vec::<(String, PropertyValue)>::new())
            .unwrap();
        store.set_external_id(a, 42).unwrap();
        let n = load_vector_csv(&mut store, "# header\n42, 0.5, 1.5\n".as_bytes(), "emb").unwrap();
        assert_eq!(n, 1);
        let idx = VectorIndexFlat::build(&store, Some("Doc"), "emb").unwrap();
        assert_eq!(idx.row(0), &[0.5, 1.5]);
        assert!(parse_vector_csv("1,1,2\n2,1\n".as_bytes()).is_err());
    }

    #[test]
    fn registry_rebuilds_after_mutation() {
        let mut store = GraphStore::new();
        store
            .create_node(&["Doc"], [("emb", PropertyValue::Vector(vec![1.0]))])
            .unwrap();
        let reg = VectorIndexRegistry::new();
        assert_eq!(reg.get(&store, Some("Doc"), "emb").unwrap().len(), 1);
        store
            .create_node(&["Doc"], [("emb", PropertyValue::Vector(vec![2.0]))])
            .unwrap();
        assert_eq!(reg.get(&store, Some("Doc"), "emb").unwrap().len(), 2);
    }
}
