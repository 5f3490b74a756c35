//! Graphalytics-style vertex/edge file loader.
//!
//! Vertex file: one decimal external id per line. Edge file: `src dst` or
//! `src dst weight`, whitespace separated. Blank lines and lines starting
//! with `#` are skipped.

use std::collections::HashMap;
use std::io::BufRead;

use super::{GraphStore, NodeId, PropertyValue, StoreError, StoreResult};

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub directed: bool,
    pub weighted: bool,
    pub label: String,
    pub rel_type: String,
    pub weight_key: String,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            directed: true,
            weighted: false,
            label: "Vertex".to_owned(),
            rel_type: "EDGE".to_owned(),
            weight_key: "weight".to_owned(),
        }
    }
}

/// Bidirectional mapping between file ids and dense store ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExternalIdMap {
    to_internal: HashMap<u64, NodeId>,
    to_external: Vec<u64>,
}

impl ExternalIdMap {
    pub fn internal(&self, external: u64) -> Option<NodeId> {
        self.to_internal.get(&external).copied()
    }

    pub fn external(&self, internal: NodeId) -> Option<u64> {
        self.to_external.get(internal.index()).copied()
    }

    pub fn len(&self) -> usize {
        self.to_external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_external.is_empty()
    }

    fn push(&mut self, external: u64, internal: NodeId) {
        self.to_internal.insert(external, internal);
        self.to_external.push(external);
    }
}

fn parse_err(file: &str, line: usize, message: impl Into<String>) -> StoreError {
    StoreError::Parse {
        file: file.to_owned(),
        line,
        message: message.into(),
    }
}

fn content_lines<R: BufRead>(
    reader: R,
    file: &'static str,
) -> impl Iterator<Item = StoreResult<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(move |(i, line)| match line {
            Err(e) => Some(Err(parse_err(file, i + 1, e.to_string()))),
            Ok(l) => {
                let t = l.trim();
                if t.is_empty() || t.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, t.to_owned())))
                }
            }
        })
}

/// Loads a vertex file and an edge file into a fresh store. Undirected
/// inputs store each edge in both directions (self-loops once).
pub fn load_graphalytics<V: BufRead, E: BufRead>(
    vertices: V,
    edges: E,
    opts: &LoadOptions,
) -> StoreResult<(GraphStore, ExternalIdMap)> {
    let mut store = GraphStore::new();
    let mut map = ExternalIdMap::default();
    let labels = [opts.label.as_str()];
    for line in content_lines(vertices, "vertex file") {
        let (no, text) = line?;
        let ext: u64 = text
            .parse()
            .map_err(|_| parse_err("vertex file", no, format!("bad vertex id {text:?}")))?;
        if map.internal(ext).is_some() {
            return Err(parse_err(
                "vertex file",
                no,
                format!("duplicate vertex id {ext}"),
            ));
        }
        let id = store.create_node(&labels, std::iter::empty::<(String, PropertyValue)>())?;
        store.set_external_id(id, ext)?;
        map.push(ext, id);
    }
    for line in content_lines(edges, "edge file") {
        let (no, text) = line?;
        let mut parts = text.split_whitespace();
        let mut id_field = |what: &str| -> StoreResult<NodeId> {
            let tok = parts
                .next()
                .ok_or_else(|| parse_err("edge file", no, format!("missing {what}")))?;
            let ext: u64 = tok
                .parse()
                .map_err(|_| parse_err("edge file", no, format!("bad {what} {tok:?}")))?;
            map.internal(ext)
                .ok_or_else(|| parse_err("edge file", no, format!("unknown vertex {ext}")))
        };
        let src = id_field("source")?;
        let dst = id_field("target")?;
        let weight = match parts.next() {
            Some(tok) => Some(
                tok.parse::<f64>()
                    .map_err(|_| parse_err("edge file", no, format!("bad weight {tok:?}")))?,
            ),
            None if opts.weighted => return Err(parse_err("edge file", no, "missing weight")),
            None => None,
        };
        if parts.next().is_some() {
            return Err(parse_err("edge file", no, "too many fields"));
        }
        let props: Vec<(String, PropertyValue)> = match weight {
            Some(w) if opts.weighted => vec![(opts.weight_key.clone(), PropertyValue::Float(w))],
            _ => Vec::new(),
        };
        store.create_edge(src, dst, &opts.rel_type, props.clone())?;
        if !opts.directed && src != dst {
            store.create_edge(dst, src, &opts.rel_type, props)?;
        }
    }
    Ok((store, map))
}
