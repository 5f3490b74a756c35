//! Plain serde snapshot of a store, used by the CLI data directory.
//!
//! This is an interchange format, not a durability mechanism: restoring
//! replays creates in id order, which reproduces ids exactly as long as the
//! dump holds no tombstones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GraphStore, IndexDescriptor, NodeId, PropertyValue, StoreResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDump {
    pub id: u64,
    pub external: u64,
    pub labels: Vec<String>,
    pub properties: BTreeMap<String, PropertyValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDump {
    pub src: u64,
    pub dst: u64,
    #[serde(rename = "type")]
    pub rel: String,
    pub properties: BTreeMap<String, PropertyValue>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StoreDump {
    pub nodes: Vec<NodeDump>,
    pub edges: Vec<EdgeDump>,
    pub indexes: Vec<IndexDescriptor>,
}

impl GraphStore {
    pub fn dump(&self) -> StoreDump {
        let nodes = self
            .nodes()
            .map(|id| {
                let n = self.node_unchecked(id);
                NodeDump {
                    id: id.0,
                    external: n.external_id(),
                    labels: n
                        .labels()
                        .iter()
                        .map(|l| self.label_name(*l).to_owned())
                        .collect(),
                    properties: n
                        .properties()
                        .iter()
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect(),
                }
            })
            .collect();
        let edges = self
            .edges()
            .map(|(_, e)| EdgeDump {
                src: e.src.0,
                dst: e.dst.0,
                rel: self.rel_type_name(e.rel).to_owned(),
                properties: e.properties().iter().cloned().collect(),
            })
            .collect();
        StoreDump {
            nodes,
            edges,
            indexes: self.indexes(),
        }
    }

    /// Rebuilds a store from a dump. Node ids are remapped densely in dump
    /// order.
    pub fn restore(dump: &StoreDump) -> StoreResult<GraphStore> {
        let mut store = GraphStore::new();
        let mut remap = std::collections::HashMap::new();
        for n in &dump.nodes {
            let labels: Vec<&str> = n.labels.iter().map(String::as_str).collect();
            let id = store.create_node(&labels, n.properties.clone())?;
            store.set_external_id(id, n.external)?;
            remap.insert(n.id, id);
        }
        for e in &dump.edges {
            let src = remap.get(&e.src).copied().unwrap_or(NodeId(e.src));
            let dst = remap.get(&e.dst).copied().unwrap_or(NodeId(e.dst));
            store.create_edge(src, dst, &e.rel, e.properties.clone())?;
        }
        for d in &dump.indexes {
            let keys: Vec<&str> = d.keys.iter().map(String::as_str).collect();
            store.create_index(&d.label, &keys, d.unique)?;
        }
        Ok(store)
    }
}
