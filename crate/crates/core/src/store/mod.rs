//! Mutable in-memory property graph.
//!
//! Nodes and edges live in contiguous arenas addressed directly by their
//! dense ids. Adjacency lists stay sorted by `(type, neighbor, edge)` so edge
//! existence is a binary search. Node properties are kept twice: a per-node
//! map (row access) and per-label columns (columnar access).

mod bulk;
mod catalog;
mod columns;
mod dump;
mod index;
mod value;

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use thiserror::Error;

pub use bulk::{load_graphalytics, ExternalIdMap, LoadOptions};
pub use catalog::{CatalogVersion, DistinctEstimate, GraphCatalog, TripleStats, RESERVOIR_SIZE};
pub use columns::{Column, ColumnStore, LabelColumns};
pub use dump::{EdgeDump, NodeDump, StoreDump};
pub use index::IndexDescriptor;
pub use value::{
    compare_values, EdgeId, IndexKey, KeyId, LabelId, NodeId, PropertyValue, RelTypeId, ValueTag,
};

use catalog::{CatalogState, TripleKey};
use index::PropertyIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StoreError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("a node needs at least one label")]
    MissingLabel,
    #[error("unique constraint {index} violated by key {key}")]
    UniqueViolation { index: String, key: String },
    #[error("type mismatch on :{label}({key}): column holds {expected}, got {found}")]
    TypeMismatch {
        label: String,
        key: String,
        expected: ValueTag,
        found: ValueTag,
    },
    #[error("unknown index {0}")]
    UnknownIndex(String),
    #[error("index {0} already exists")]
    DuplicateIndex(String),
    #[error("key tuple has {found} values, index expects {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("{file} line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type StoreResult<T> = Result<T, StoreError>;

/// Store handle shared between readers and a single writer.
pub type SharedStore = Arc<RwLock<GraphStore>>;

#[derive(Debug, Default, Clone)]
struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    fn get(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    fn intern(&mut self, name: &str) -> u32 {
        if let Some(id) = self.ids.get(name) {
            return *id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }
}

#[derive(Debug, Clone)]
pub struct NodeRecord {
    labels: Vec<LabelId>,
    slots: Vec<u32>,
    props: HashMap<String, PropertyValue>,
    live: bool,
    external: u64,
}

impl NodeRecord {
    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn properties(&self) -> &HashMap<String, PropertyValue> {
        &self.props
    }

    pub fn property(&self, key: &str) -> Option<&PropertyValue> {
        self.props.get(key)
    }

    pub fn is_live(&self) -> bool {
        self.live
    }

    pub fn external_id(&self) -> u64 {
        self.external
    }

    /// Column position of this node under `label`.
    #[inline]
    pub fn slot(&self, label: LabelId) -> Option<u32> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.slots[i])
    }

    pub fn has_label(&self, label: LabelId) -> bool {
        self.labels.contains(&label)
    }
}

#[derive(Debug, Clone)]
pub struct EdgeRecord {
    pub src: NodeId,
    pub dst: NodeId,
    pub rel: RelTypeId,
    props: Vec<(String, PropertyValue)>,
    live: bool,
}

impl EdgeRecord {
    pub fn property(&self, key: &str) -> Option<&PropertyValue> {
        self.props.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn properties(&self) -> &[(String, PropertyValue)] {
        &self.props
    }

    pub fn is_live(&self) -> bool {
        self.live
    }
}

/// One sorted adjacency entry. Field order defines the sort order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdjEntry {
    pub rel: RelTypeId,
    pub neighbor: NodeId,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Outgoing,
    Incoming,
}

#[derive(Debug, Default, Clone)]
pub struct GraphStore {
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
    out_adj: Vec<Vec<AdjEntry>>,
    in_adj: Vec<Vec<AdjEntry>>,
    labels: Interner,
    rels: Interner,
    keys: Interner,
    columns: ColumnStore,
    catalog: CatalogState,
    indexes: Vec<PropertyIndex>,
    live_nodes: u64,
    live_edges: u64,
    mutations: u64,
}

fn insert_sorted(list: &mut Vec<AdjEntry>, entry: AdjEntry) {
    let pos = list.partition_point(|e| *e < entry);
    list.insert(pos, entry);
}

fn remove_sorted(list: &mut Vec<AdjEntry>, entry: AdjEntry) {
    if let Ok(pos) = list.binary_search(&entry) {
        list.remove(pos);
    }
}

impl GraphStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_shared(self) -> SharedStore {
        Arc::new(RwLock::new(self))
    }

    // ---- names -------------------------------------------------------

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.labels.get(name).map(LabelId)
    }

    pub fn rel_type_id(&self, name: &str) -> Option<RelTypeId> {
        self.rels.get(name).map(RelTypeId)
    }

    pub fn key_id(&self, name: &str) -> Option<KeyId> {
        self.keys.get(name).map(KeyId)
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        self.labels.name(id.0)
    }

    pub fn rel_type_name(&self, id: RelTypeId) -> &str {
        self.rels.name(id.0)
    }

    pub fn key_name(&self, id: KeyId) -> &str {
        self.keys.name(id.0)
    }

    pub fn rel_type_ids(&self) -> impl Iterator<Item = RelTypeId> {
        (0..self.rels.names.len() as u32).map(RelTypeId)
    }

    pub fn label_ids(&self) -> impl Iterator<Item = LabelId> {
        (0..self.labels.names.len() as u32).map(LabelId)
    }

    // ---- counts ------------------------------------------------------

    pub fn node_count(&self) -> u64 {
        self.live_nodes
    }

    pub fn edge_count(&self) -> u64 {
        self.live_edges
    }

    /// Arena length, including tombstones.
    pub fn node_capacity(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    /// Bumped on every successful mutation.
    pub fn mutation_count(&self) -> u64 {
        self.mutations
    }

    // ---- node access ---------------------------------------------------

    pub fn node(&self, id: NodeId) -> StoreResult<&NodeRecord> {
        match self.nodes.get(id.index()) {
            Some(n) if n.live => Ok(n),
            _ => Err(StoreError::UnknownNode(id)),
        }
    }

    pub fn is_live(&self, id: NodeId) -> bool {
        self.nodes.get(id.index()).is_some_and(|n| n.live)
    }

    /// Unchecked arena access for executor hot paths; `id` must be live.
    #[inline]
    pub fn node_unchecked(&self, id: NodeId) -> &NodeRecord {
        &self.nodes[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> StoreResult<&EdgeRecord> {
        match self.edges.get(id.index()) {
            Some(e) if e.live => Ok(e),
            _ => Err(StoreError::UnknownEdge(id)),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.live)
            .map(|(i, _)| NodeId(i as u64))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeRecord)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.live)
            .map(|(i, e)| (EdgeId(i as u64), e))
    }

    /// Live members of `label` in ascending id order.
    pub fn nodes_with_label(&self, label: LabelId) -> impl Iterator<Item = NodeId> + '_ {
        self.columns
            .label(label)
            .map(|lc| lc.members())
            .unwrap_or(&[])
            .iter()
            .copied()
            .filter(move |&id| self.nodes[id.index()].live)
    }

    pub fn columns(&self) -> &ColumnStore {
        &self.columns
    }

    pub fn external_id(&self, id: NodeId) -> StoreResult<u64> {
        self.node(id).map(|n| n.external)
    }

    pub fn set_external_id(&mut self, id: NodeId, external: u64) -> StoreResult<()> {
        self.node(id)?;
        self.nodes[id.index()].external = external;
        Ok(())
    }

    // ---- adjacency -----------------------------------------------------

    pub fn adjacency(&self, node: NodeId, dir: Direction) -> &[AdjEntry] {
        let lists = match dir {
            Direction::Outgoing => &self.out_adj,
            Direction::Incoming => &self.in_adj,
        };
        lists.get(node.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Entries of one relationship type; a contiguous run of the sorted list.
    pub fn adjacency_of_type(&self, node: NodeId, dir: Direction, rel: RelTypeId) -> &[AdjEntry] {
        let list = self.adjacency(node, dir);
        let lo = list.partition_point(|e| e.rel < rel);
        let hi = lo + list[lo..].partition_point(|e| e.rel == rel);
        &list[lo..hi]
    }

    pub fn degree(&self, node: NodeId, dir: Direction) -> usize {
        self.adjacency(node, dir).len()
    }

    pub fn edge_exists(&self, src: NodeId, dst: NodeId, rel: &str) -> StoreResult<bool> {
        self.node(src)?;
        Ok(match self.rel_type_id(rel) {
            Some(r) => self.probe_edge(src, dst, r, Direction::Outgoing).0,
            None => false,
        })
    }

    /// Binary search for `(rel, other)` in `node`'s adjacency list.
    /// Returns whether an entry exists and the number of key comparisons.
    #[inline]
    pub fn probe_edge(
        &self,
        node: NodeId,
        other: NodeId,
        rel: RelTypeId,
        dir: Direction,
    ) -> (bool, u32) {
        let list = self.adjacency(node, dir);
        let key = (rel, other);
        let (mut lo, mut hi) = (0usize, list.len());
        let mut comparisons = 0u32;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            comparisons += 1;
            let e = &list[mid];
            if (e.rel, e.neighbor) < key {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        comparisons += 1;
        let found = lo < list.len() && list[lo].rel == rel && list[lo].neighbor == other;
        (found, comparisons)
    }

    /// Probe across every relationship type present.
    pub fn probe_edge_any(&self, node: NodeId, other: NodeId, dir: Direction) -> (bool, u32) {
        let mut total = 0;
        for rel in self.rel_type_ids() {
            let (found, c) = self.probe_edge(node, other, rel, dir);
            total += c;
            if found {
                return (true, total);
            }
        }
        (false, total)
    }

    // ---- properties ----------------------------------------------------

    /// Columnar read of `key` for `node` under `label`.
    pub fn resolve_property(
        &self,
        node: NodeId,
        label: &str,
        key: &str,
    ) -> StoreResult<PropertyValue> {
        let rec = self.node(node)?;
        let (Some(l), Some(k)) = (self.label_id(label), self.key_id(key)) else {
            return Ok(PropertyValue::Null);
        };
        Ok(match rec.slot(l) {
            Some(pos) => self.columns.get(l, k, pos).clone(),
            None => PropertyValue::Null,
        })
    }

    /// Columnar read via interned ids; no copying.
    #[inline]
    pub fn resolve_column(&self, node: NodeId, label: LabelId, key: KeyId) -> &PropertyValue {
        const NULL: PropertyValue = PropertyValue::Null;
        match self.nodes[node.index()].slot(label) {
            Some(pos) => self.columns.get(label, key, pos),
            None => &NULL,
        }
    }

    fn check_tags<'a>(
        &self,
        labels: &[LabelId],
        props: impl Iterator<Item = (&'a str, &'a PropertyValue)>,
    ) -> StoreResult<()> {
        for (key, value) in props {
            let (Some(found), Some(k)) = (value.tag(), self.key_id(key)) else {
                continue;
            };
            for &l in labels {
                if let Some(expected) = self.columns.tag(l, k) {
                    if expected != found {
                        return Err(StoreError::TypeMismatch {
                            label: self.label_name(l).to_owned(),
                            key: key.to_owned(),
                            expected,
                            found,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn index_tuple(
        &self,
        idx: &PropertyIndex,
        props: &HashMap<String, PropertyValue>,
    ) -> Option<Vec<IndexKey>> {
        idx.keys
            .iter()
            .map(|k| props.get(self.key_name(*k)).and_then(IndexKey::from_value))
            .collect()
    }

    fn check_unique(
        &self,
        labels: &[LabelId],
        props: &HashMap<String, PropertyValue>,
        node: NodeId,
    ) -> StoreResult<()> {
        for idx in self
            .indexes
            .iter()
            .filter(|i| i.desc.unique && labels.contains(&i.label))
        {
            if let Some(tuple) = self.index_tuple(idx, props) {
                if idx.conflicts(&tuple, node) {
                    return Err(StoreError::UniqueViolation {
                        index: idx.desc.name.clone(),
                        key: format!("{tuple:?}"),
                    });
                }
            }
        }
        Ok(())
    }

    // ---- mutation ------------------------------------------------------

    /// Creates a node. Validation (types, uniqueness) runs before any state
    /// changes, so a failed call leaves the store untouched.
    pub fn create_node<S, I>(&mut self, labels: &[&str], props: I) -> StoreResult<NodeId>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, PropertyValue)>,
    {
        if labels.is_empty() {
            return Err(StoreError::MissingLabel);
        }
        let mut props_map: HashMap<String, PropertyValue> = HashMap::new();
        for (k, v) in props {
            let k = k.into();
            if v.is_null() {
                props_map.remove(&k);
            } else {
                props_map.insert(k, v);
            }
        }
        let mut known: Vec<LabelId> = labels.iter().filter_map(|l| self.label_id(l)).collect();
        known.dedup();
        let id = NodeId(self.nodes.len() as u64);
        self.check_tags(&known, props_map.iter().map(|(k, v)| (k.as_str(), v)))?;
        self.check_unique(&known, &props_map, id)?;

        let mut label_ids: Vec<LabelId> = Vec::with_capacity(labels.len());
        for l in labels {
            let lid = LabelId(self.labels.intern(l));
            if !label_ids.contains(&lid) {
                label_ids.push(lid);
            }
        }
        let mut slots = Vec::with_capacity(label_ids.len());
        for &l in &label_ids {
            let pos = self.columns.add_member(l, id);
            slots.push(pos);
            self.catalog.label_delta(l, 1);
        }
        for (k, v) in &props_map {
            let kid = KeyId(self.keys.intern(k));
            for (&l, &pos) in label_ids.iter().zip(&slots) {
                self.columns.set(l, kid, pos, v.clone());
                if let Some(ik) = IndexKey::from_value(v) {
                    self.catalog.sample(l, kid, ik);
                }
            }
        }
        for i in 0..self.indexes.len() {
            if !label_ids.contains(&self.indexes[i].label) {
                continue;
            }
            if let Some(t) = self.index_tuple(&self.indexes[i], &props_map) {
                self.indexes[i].insert(t, id);
            }
        }
        self.nodes.push(NodeRecord {
            labels: label_ids,
            slots,
            props: props_map,
            live: true,
            external: id.0,
        });
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.live_nodes += 1;
        self.mutations += 1;
        Ok(id)
    }

    pub fn create_edge<S, I>(
        &mut self,
        src: NodeId,
        dst: NodeId,
        rel: &str,
        props: I,
    ) -> StoreResult<EdgeId>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, PropertyValue)>,
    {
        self.node(src)?;
        self.node(dst)?;
        let rel = RelTypeId(self.rels.intern(rel));
        let id = EdgeId(self.edges.len() as u64);
        let props: Vec<(String, PropertyValue)> = props
            .into_iter()
            .map(|(k, v)| (k.into(), v))
            .filter(|(_, v)| !v.is_null())
            .collect();
        self.edges.push(EdgeRecord {
            src,
            dst,
            rel,
            props,
            live: true,
        });
        insert_sorted(
            &mut self.out_adj[src.index()],
            AdjEntry {
                rel,
                neighbor: dst,
                edge: id,
            },
        );
        insert_sorted(
            &mut self.in_adj[dst.index()],
            AdjEntry {
                rel,
                neighbor: src,
                edge: id,
            },
        );
        self.catalog.type_delta(rel, 1);
        for &l1 in &self.nodes[src.index()].labels {
            for &l2 in &self.nodes[dst.index()].labels {
                self.catalog
                    .triples
                    .entry(TripleKey {
                        src: l1,
                        rel,
                        dst: l2,
                    })
                    .or_default()
                    .add(src, dst);
            }
        }
        self.live_edges += 1;
        self.mutations += 1;
        Ok(id)
    }

    pub fn set_property(
        &mut self,
        node: NodeId,
        key: &str,
        value: PropertyValue,
    ) -> StoreResult<()> {
        let rec = self.node(node)?;
        let labels = rec.labels.clone();
        self.check_tags(&labels, std::iter::once((key, &value)))?;
        let mut next = rec.props.clone();
        if value.is_null() {
            next.remove(key);
        } else {
            next.insert(key.to_owned(), value.clone());
        }
        self.check_unique(&labels, &next, node)?;

        let kid = KeyId(self.keys.intern(key));
        let old = std::mem::take(&mut self.nodes[node.index()].props);
        for i in 0..self.indexes.len() {
            if !labels.contains(&self.indexes[i].label) || !self.indexes[i].keys.contains(&kid) {
                continue;
            }
            if let Some(t) = self.index_tuple(&self.indexes[i], &old) {
                self.indexes[i].remove(&t, node);
            }
            if let Some(t) = self.index_tuple(&self.indexes[i], &next) {
                self.indexes[i].insert(t, node);
            }
        }
        let slots = self.nodes[node.index()].slots.clone();
        for (&l, &pos) in labels.iter().zip(&slots) {
            self.columns.set(l, kid, pos, value.clone());
            if let Some(ik) = IndexKey::from_value(&value) {
                self.catalog.sample(l, kid, ik);
            }
        }
        self.nodes[node.index()].props = next;
        self.mutations += 1;
        Ok(())
    }

    pub fn delete_edge(&mut self, id: EdgeId) -> StoreResult<()> {
        let e = self.edge(id)?.clone();
        remove_sorted(
            &mut self.out_adj[e.src.index()],
            AdjEntry {
                rel: e.rel,
                neighbor: e.dst,
                edge: id,
            },
        );
        remove_sorted(
            &mut self.in_adj[e.dst.index()],
            AdjEntry {
                rel: e.rel,
                neighbor: e.src,
                edge: id,
            },
        );
        self.catalog.type_delta(e.rel, -1);
        for &l1 in &self.nodes[e.src.index()].labels {
            for &l2 in &self.nodes[e.dst.index()].labels {
                let key = TripleKey {
                    src: l1,
                    rel: e.rel,
                    dst: l2,
                };
                if let Some(acc) = self.catalog.triples.get_mut(&key) {
                    acc.remove(e.src, e.dst);
                    if acc.count == 0 {
                        self.catalog.triples.remove(&key);
                    }
                }
            }
        }
        self.edges[id.index()].live = false;
        self.live_edges -= 1;
        self.mutations += 1;
        Ok(())
    }

    /// Tombstones a node and all incident edges. The id is never reused.
    pub fn delete_node(&mut self, id: NodeId) -> StoreResult<()> {
        self.node(id)?;
        let mut incident: Vec<EdgeId> = self.out_adj[id.index()]
            .iter()
            .chain(self.in_adj[id.index()].iter())
            .map(|e| e.edge)
            .collect();
        incident.sort();
        incident.dedup();
        for e in incident {
            self.delete_edge(e)?;
        }
        let props = std::mem::take(&mut self.nodes[id.index()].props);
        let labels = self.nodes[id.index()].labels.clone();
        for i in 0..self.indexes.len() {
            if labels.contains(&self.indexes[i].label) {
                if let Some(t) = self.index_tuple(&self.indexes[i], &props) {
                    self.indexes[i].remove(&t, id);
                }
            }
        }
        let slots = self.nodes[id.index()].slots.clone();
        for (&l, &pos) in labels.iter().zip(&slots) {
            for k in props.keys() {
                if let Some(kid) = self.key_id(k) {
                    self.columns.set(l, kid, pos, PropertyValue::Null);
                }
            }
            self.catalog.label_delta(l, -1);
        }
        self.nodes[id.index()].live = false;
        self.live_nodes -= 1;
        self.mutations += 1;
        Ok(())
    }

    // ---- indexes -------------------------------------------------------

    /// Builds an index over existing data. A unique index fails without side
    /// effects if the data already holds a duplicate tuple.
    pub fn create_index(
        &mut self,
        label: &str,
        keys: &[&str],
        unique: bool,
    ) -> StoreResult<IndexDescriptor> {
        let desc = IndexDescriptor::new(label, keys, unique);
        if self.indexes.iter().any(|i| i.desc.name == desc.name) {
            return Err(StoreError::DuplicateIndex(desc.name));
        }
        let lid = LabelId(self.labels.intern(label));
        let kids: Vec<KeyId> = keys.iter().map(|k| KeyId(self.keys.intern(k))).collect();
        let mut idx = PropertyIndex::new(desc.clone(), lid, kids);
        let members: Vec<NodeId> = self.nodes_with_label(lid).collect();
        for node in members {
            if let Some(t) = self.index_tuple(&idx, &self.nodes[node.index()].props) {
                if idx.conflicts(&t, node) {
                    return Err(StoreError::UniqueViolation {
                        index: desc.name,
                        key: format!("{t:?}"),
                    });
                }
                idx.insert(t, node);
            }
        }
        self.indexes.push(idx);
        self.catalog.ddl_version += 1;
        self.mutations += 1;
        Ok(desc)
    }

    pub fn drop_index(&mut self, name: &str) -> StoreResult<IndexDescriptor> {
        let pos = self
            .indexes
            .iter()
            .position(|i| i.desc.name == name)
            .ok_or_else(|| StoreError::UnknownIndex(name.to_owned()))?;
        let idx = self.indexes.remove(pos);
        self.catalog.ddl_version += 1;
        self.mutations += 1;
        Ok(idx.desc)
    }

    pub fn indexes(&self) -> Vec<IndexDescriptor> {
        self.indexes.iter().map(|i| i.desc.clone()).collect()
    }

    /// Ascending ids of nodes whose indexed keys equal `tuple`.
    pub fn lookup_index(
        &self,
        desc: &IndexDescriptor,
        tuple: &[PropertyValue],
    ) -> StoreResult<Vec<NodeId>> {
        let idx = self
            .indexes
            .iter()
            .find(|i| i.desc.name == desc.name)
            .ok_or_else(|| StoreError::UnknownIndex(desc.name.clone()))?;
        if tuple.len() != idx.keys.len() {
            return Err(StoreError::ArityMismatch {
                expected: idx.keys.len(),
                found: tuple.len(),
            });
        }
        let keys: Option<Vec<IndexKey>> = tuple.iter().map(IndexKey::from_value).collect();
        Ok(keys.map(|k| idx.lookup(&k)).unwrap_or_default())
    }

    /// Exact number of distinct key tuples held by an index.
    pub fn index_distinct_keys(&self, name: &str) -> Option<usize> {
        self.indexes
            .iter()
            .find(|i| i.desc.name == name)
            .map(PropertyIndex::distinct_keys)
    }

    // ---- statistics ----------------------------------------------------

    pub fn catalog_version(&self) -> CatalogVersion {
        CatalogVersion {
            ddl: self.catalog.ddl_version,
            nodes: self.live_nodes,
            edges: self.live_edges,
        }
    }

    pub fn catalog_snapshot(&self) -> GraphCatalog {
        let name_l = |l: LabelId| self.label_name(l).to_owned();
        let mut label_counts = HashMap::new();
        for (i, &c) in self.catalog.label_counts.iter().enumerate() {
            if c > 0 {
                label_counts.insert(name_l(LabelId(i as u32)), c);
            }
        }
        let mut type_counts = HashMap::new();
        for (i, &c) in self.catalog.type_counts.iter().enumerate() {
            if c > 0 {
                type_counts.insert(self.rel_type_name(RelTypeId(i as u32)).to_owned(), c);
            }
        }
        let triples = self
            .catalog
            .triples
            .iter()
            .filter(|(_, acc)| acc.count > 0)
            .map(|(k, acc)| {
                (
                    (
                        name_l(k.src),
                        self.rel_type_name(k.rel).to_owned(),
                        name_l(k.dst),
                    ),
                    TripleStats {
                        count: acc.count,
                        distinct_sources: acc.sources.len() as u64,
                        distinct_targets: acc.targets.len() as u64,
                    },
                )
            })
            .collect();
        let distinct = self
            .catalog
            .sample_keys()
            .filter_map(|&(l, k)| {
                self.catalog
                    .distinct(l, k)
                    .map(|e| ((name_l(l), self.key_name(k).to_owned()), e))
            })
            .collect();
        GraphCatalog {
            version: self.catalog_version(),
            node_count: self.live_nodes,
            edge_count: self.live_edges,
            label_counts,
            type_counts,
            triples,
            distinct,
            indexes: self.indexes(),
        }
    }
}
