//! Cost constants and cardinality estimation.

use serde::{Deserialize, Serialize};

use super::ast::{CmpOp, EdgeDir};
use crate::store::{GraphCatalog, IndexDescriptor};

/// Per-row operator costs and default selectivities.
///
/// Row producers (scans, seeks) are charged per row produced; every other
/// operator per input row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostModel {
    pub scan_row: f64,
    pub expand_row: f64,
    pub expand_into_row: f64,
    pub filter_row: f64,
    /// Multiplied by `log2(rows)` per row.
    pub sort_row: f64,
    pub index_seek_row: f64,
    pub project_row: f64,
    pub aggregate_row: f64,
    pub eq_selectivity: f64,
    pub range_selectivity: f64,
    pub ne_selectivity: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            scan_row: 1.0,
            expand_row: 2.0,
            expand_into_row: 2.0,
            filter_row: 0.5,
            sort_row: 1.0,
            index_seek_row: 0.1,
            project_row: 0.1,
            aggregate_row: 0.5,
            eq_selectivity: 0.1,
            range_selectivity: 0.3,
            ne_selectivity: 0.9,
        }
    }
}

/// Catalog plus the exact distinct-key counts of the live indexes.
#[derive(Debug, Clone, Default)]
pub struct Statistics {
    pub catalog: GraphCatalog,
    pub index_keys: Vec<(String, usize)>,
}

/// Applies the floor of one row to estimates over non-empty input.
pub fn floor(input: f64, est: f64) -> f64 {
    if input > 0.0 {
        est.max(1.0)
    } else {
        0.0
    }
}

impl Statistics {
    pub fn new(catalog: GraphCatalog, index_keys: Vec<(String, usize)>) -> Self {
        Statistics {
            catalog,
            index_keys,
        }
    }

    pub fn node_count(&self) -> f64 {
        self.catalog.node_count as f64
    }

    /// Rows produced by scanning `label` (all nodes when `None`).
    pub fn scan(&self, label: Option<&str>) -> f64 {
        match label {
            Some(l) => self.catalog.label_count(l) as f64,
            None => self.node_count(),
        }
    }

    fn distinct(&self, label: &str, key: &str) -> Option<f64> {
        self.catalog
            .distinct_values(label, key)
            .map(|d| d.estimate.max(1.0))
    }

    pub fn is_indexed(&self, label: &str, key: &str) -> bool {
        self.catalog
            .indexes_on(label)
            .any(|d| d.keys.iter().any(|k| k == key))
    }

    /// Fraction of rows that pass `var.key op value` for a var of `label`.
    pub fn selectivity(&self, model: &CostModel, label: Option<&str>, key: &str, op: CmpOp) -> f64 {
        match op {
            CmpOp::Eq => match label {
                Some(l) if self.is_indexed(l, key) => match self.distinct(l, key) {
                    Some(d) => 1.0 / d,
                    None => model.eq_selectivity,
                },
                _ => model.eq_selectivity,
            },
            CmpOp::Ne => model.ne_selectivity,
            _ => model.range_selectivity,
        }
    }

    /// Rows per input row returned by an equality seek on `index`.
    pub fn seek(&self, index: &IndexDescriptor) -> f64 {
        let count = self.catalog.label_count(&index.label) as f64;
        if index.unique {
            return count.min(1.0);
        }
        let distinct = self
            .index_keys
            .iter()
            .find(|(n, _)| *n == index.name)
            .map(|(_, d)| *d as f64)
            .unwrap_or(1.0)
            .max(1.0);
        count / distinct
    }

    /// Average fan-out of expanding from a `from` node along `rel` to a
    /// `to` node. Unknown source labels fall back to the global average.
    pub fn expand_factor(
        &self,
        from: Option<&str>,
        rel: Option<&str>,
        to: Option<&str>,
        dir: EdgeDir,
    ) -> f64 {
        let one = |src: Option<&str>, dst: Option<&str>, outgoing: bool| {
            let t = if outgoing {
                self.catalog.triple_sum(src, rel, dst)
            } else {
                self.catalog.triple_sum(dst, rel, src)
            };
            match src {
                Some(_) => {
                    let sources = if outgoing {
                        t.distinct_sources
                    } else {
                        t.distinct_targets
                    };
                    t.count as f64 / sources.max(1) as f64
                }
                None => t.count as f64 / self.node_count().max(1.0),
            }
        };
        match dir {
            EdgeDir::Out => one(from, to, true),
            EdgeDir::In => one(from, to, false),
            EdgeDir::Both => one(from, to, true) + one(from, to, false),
        }
    }

    /// Probability that a bound `(from, to)` pair is connected.
    pub fn into_factor(
        &self,
        from: Option<&str>,
        rel: Option<&str>,
        to: Option<&str>,
        dir: EdgeDir,
    ) -> f64 {
        let one = |src: Option<&str>, dst: Option<&str>| {
            let t = self.catalog.triple_sum(src, rel, dst);
            let s = if src.is_some() {
                t.distinct_sources as f64
            } else {
                self.node_count()
            };
            let d = if dst.is_some() {
                t.distinct_targets as f64
            } else {
                self.node_count()
            };
            (t.count as f64 / (s * d).max(1.0)).min(1.0)
        };
        match dir {
            EdgeDir::Out => one(from, to),
            EdgeDir::In => one(to, from),
            EdgeDir::Both => (one(from, to) + one(to, from)).min(1.0),
        }
    }

    /// Fraction of nodes carrying `label`.
    pub fn label_fraction(&self, label: &str) -> f64 {
        let n = self.node_count();
        if n <= 0.0 {
            return 0.0;
        }
        self.catalog.label_count(label) as f64 / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::TripleStats;

    fn fixture() -> Statistics {
        let mut c = GraphCatalog {
            node_count: 1500,
            edge_count: 3000,
            ..Default::default()
        };
        c.label_counts.insert("Person".into(), 1000);
        c.label_counts.insert("City".into(), 500);
        c.triples.insert(
            ("Person".into(), "KNOWS".into(), "Person".into()),
            TripleStats {
                count: 2000,
                distinct_sources: 800,
                distinct_targets: 900,
            },
        );
        c.triples.insert(
            ("Person".into(), "LIVES_IN".into(), "City".into()),
            TripleStats {
                count: 1000,
                distinct_sources: 1000,
                distinct_targets: 400,
            },
        );
        Statistics::new(c, Vec::new())
    }

    #[test]
    fn scans_and_selectivities() {
        let s = fixture();
        let m = CostModel::default();
        assert_eq!(s.scan(Some("Person")), 1000.0);
        assert_eq!(s.scan(None), 1500.0);
        assert_eq!(
            s.scan(Some("Person")) * s.selectivity(&m, Some("Person"), "age", CmpOp::Eq),
            100.0
        );
        assert_eq!(s.selectivity(&m, Some("Person"), "age", CmpOp::Lt), 0.3);
    }

    #[test]
    fn expand_factors() {
        let s = fixture();
        assert_eq!(
            s.expand_factor(Some("Person"), Some("KNOWS"), Some("Person"), EdgeDir::Out),
            2.5
        );
        assert_eq!(
            s.expand_factor(Some("Person"), Some("KNOWS"), Some("Person"), EdgeDir::In),
            2000.0 / 900.0
        );
        assert_eq!(
            s.expand_factor(None, Some("LIVES_IN"), None, EdgeDir::Out),
            1000.0 / 1500.0
        );
        assert_eq!(
            s.into_factor(Some("Person"), Some("KNOWS"), Some("Person"), EdgeDir::Out),
            2000.0 / (800.0 * 900.0)
        );
        assert_eq!(floor(10.0, 0.2), 1.0);
        assert_eq!(floor(0.0, 0.2), 0.0);
    }
}
