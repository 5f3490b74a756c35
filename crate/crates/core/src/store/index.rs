//! Composite secondary indexes and unique constraints.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::value::{IndexKey, KeyId, LabelId, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexDescriptor {
    pub name: String,
    pub label: String,
    pub keys: Vec<String>,
    pub unique: bool,
}

impl IndexDescriptor {
    pub fn new(label: &str, keys: &[&str], unique: bool) -> Self {
        let prefix = if unique { "uniq" } else { "idx" };
        IndexDescriptor {
            name: format!("{prefix}_{label}_{}", keys.join("_")),
            label: label.to_owned(),
            keys: keys.iter().map(|k| (*k).to_owned()).collect(),
            unique,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PropertyIndex {
    pub desc: IndexDescriptor,
    pub label: LabelId,
    pub keys: Vec<KeyId>,
    map: BTreeMap<Vec<IndexKey>, BTreeSet<NodeId>>,
}

impl PropertyIndex {
    pub fn new(desc: IndexDescriptor, label: LabelId, keys: Vec<KeyId>) -> Self {
        PropertyIndex {
            desc,
            label,
            keys,
            map: BTreeMap::new(),
        }
    }

    /// True when inserting `tuple` for `node` would break uniqueness.
    pub fn conflicts(&self, tuple: &[IndexKey], node: NodeId) -> bool {
        self.desc.unique
            && self
                .map
                .get(tuple)
                .is_some_and(|s| s.iter().any(|&other| other != node))
    }

    pub fn insert(&mut self, tuple: Vec<IndexKey>, node: NodeId) {
        self.map.entry(tuple).or_default().insert(node);
    }

    pub fn remove(&mut self, tuple: &[IndexKey], node: NodeId) {
        if let Some(set) = self.map.get_mut(tuple) {
            set.remove(&node);
            if set.is_empty() {
                self.map.remove(tuple);
            }
        }
    }

    pub fn lookup(&self, tuple: &[IndexKey]) -> Vec<NodeId> {
        self.map
            .get(tuple)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    pub fn distinct_keys(&self) -> usize {
        self.map.len()
    }
}
