//! Immutable compressed-sparse-row snapshot of a store.
//!
//! A [`GraphView`] is built once per analytics call and never mutated, so it
//! can be shared across threads freely. Vertex `v` owns the half-open range
//! `out_offsets[v]..out_offsets[v + 1]` of `out_targets` (and `weights`).

use std::borrow::Cow;

use thiserror::Error;

use crate::store::{Direction, GraphStore, NodeId, PropertyValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CsrError {
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("reverse adjacency was not built for this view")]
    ReverseNotBuilt,
    #[error("weight property {key} on edge {edge} is not numeric")]
    TypeMismatch { key: String, edge: u64 },
}

/// Which part of the store a projection includes.
#[derive(Debug, Clone, Default)]
pub struct Projection {
    pub label: Option<String>,
    pub rel_type: Option<String>,
    pub weight_key: Option<String>,
    pub build_reverse: bool,
}

/// Borrowed-or-owned adjacency in one direction.
#[derive(Debug, Clone)]
pub struct Adjacency<'a> {
    offsets: Cow<'a, [usize]>,
    targets: Cow<'a, [u32]>,
    weights: Option<Cow<'a, [f64]>>,
}

impl Adjacency<'_> {
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn weights(&self, v: usize) -> Option<&[f64]> {
        self.weights
            .as_ref()
            .map(|w| &w[self.offsets[v]..self.offsets[v + 1]])
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphView {
    vertex_count: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    weights: Option<Vec<f64>>,
    in_offsets: Option<Vec<usize>>,
    in_targets: Option<Vec<u32>>,
    in_weights: Option<Vec<f64>>,
    node_ids: Vec<NodeId>,
    external_ids: Vec<u64>,
}

/// Counting-sort transpose of a CSR.
fn transpose(
    n: usize,
    offsets: &[usize],
    targets: &[u32],
    weights: Option<&[f64]>,
) -> (Vec<usize>, Vec<u32>, Option<Vec<f64>>) {
    let mut in_off = vec![0usize; n + 1];
    for &t in targets {
        in_off[t as usize + 1] += 1;
    }
    for i in 0..n {
        in_off[i + 1] += in_off[i];
    }
    let mut cursor = in_off.clone();
    let mut in_t = vec![0u32; targets.len()];
    let mut in_w = weights.map(|_| vec![0f64; targets.len()]);
    for u in 0..n {
        for e in offsets[u]..offsets[u + 1] {
            let t = targets[e] as usize;
            let slot = cursor[t];
            cursor[t] += 1;
            in_t[slot] = u as u32;
            if let (Some(iw), Some(w)) = (in_w.as_mut(), weights) {
                iw[slot] = w[e];
            }
        }
    }
    // sources visited in ascending order, so each slice is already sorted
    (in_off, in_t, in_w)
}

impl GraphView {
    /// Builds a view from an explicit edge list over vertices `0..n`.
    /// External ids default to the vertex index.
    pub fn from_edges(
        n: usize,
        edges: &[(u32, u32)],
        weights: Option<&[f64]>,
        build_reverse: bool,
    ) -> GraphView {
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| (edges[i].0, edges[i].1, i));
        let mut out_offsets = vec![0usize; n + 1];
        for &(s, _) in edges {
            out_offsets[s as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<u32> = order.iter().map(|&i| edges[i].1).collect();
        let weights = weights.map(|w| order.iter().map(|&i| w[i]).collect::<Vec<f64>>());
        let mut view = GraphView {
            vertex_count: n,
            out_offsets,
            out_targets,
            weights,
            in_offsets: None,
            in_targets: None,
            in_weights: None,
            node_ids: (0..n as u64).map(NodeId).collect(),
            external_ids: (0..n as u64).collect(),
        };
        if build_reverse {
            view.build_reverse();
        }
        view
    }

    pub fn with_external_ids(mut self, external: Vec<u64>) -> GraphView {
        assert_eq!(
            external.len(),
            self.vertex_count,
            "one external id per vertex"
        );
        self.external_ids = external;
        self
    }

    pub fn build_reverse(&mut self) {
        if self.in_offsets.is_some() {
            return;
        }
        let (o, t, w) = transpose(
            self.vertex_count,
            &self.out_offsets,
            &self.out_targets,
            self.weights.as_deref(),
        );
        self.in_offsets = Some(o);
        self.in_targets = Some(t);
        self.in_weights = w;
    }

    /// Projects the filtered subgraph of `store`. Included vertices are
    /// ordered by ascending store id; parallel edges are kept.
    pub fn project(store: &GraphStore, p: &Projection) -> Result<GraphView, CsrError> {
        let label = match &p.label {
            Some(l) => match store.label_id(l) {
                Some(id) => Some(id),
                None => {
                    return Ok(GraphView::from_edges(
                        0,
                        &[],
                        p.weight_key.as_ref().map(|_| &[][..]),
                        p.build_reverse,
                    ))
                }
            },
            None => None,
        };
        let rel = match &p.rel_type {
            Some(r) => match store.rel_type_id(r) {
                Some(id) => Some(id),
                None => {
                    // no edges of that type: all vertices, no edges
                    Some(crate::store::RelTypeId(u32::MAX))
                }
            },
            None => None,
        };
        let node_ids: Vec<NodeId> = match label {
            Some(l) => store.nodes_with_label(l).collect(),
            None => store.nodes().collect(),
        };
        let mut index_of = vec![u32::MAX; store.node_capacity()];
        for (i, id) in node_ids.iter().enumerate() {
            index_of[id.index()] = i as u32;
        }
        let n = node_ids.len();
        let mut out_offsets = Vec::with_capacity(n + 1);
        out_offsets.push(0usize);
        let mut out_targets = Vec::new();
        let mut weights: Option<Vec<f64>> = p.weight_key.as_ref().map(|_| Vec::new());
        let mut scratch: Vec<(u32, u64, f64)> = Vec::new();
        for &id in &node_ids {
            scratch.clear();
            let entries = match rel {
                Some(r) => store.adjacency_of_type(id, Direction::Outgoing, r),
                None => store.adjacency(id, Direction::Outgoing),
            };
            for e in entries {
                let t = index_of[e.neighbor.index()];
                if t == u32::MAX {
                    continue;
                }
                let w = match &p.weight_key {
                    Some(key) => {
                        let rec = store.edge(e.edge).expect("adjacency references live edge");
                        match rec.property(key) {
                            None | Some(PropertyValue::Null) => 1.0,
                            Some(v) => v.as_f64().ok_or_else(|| CsrError::TypeMismatch {
                                key: key.clone(),
                                edge: e.edge.0,
                            })?,
                        }
                    }
                    None => 1.0,
                };
                scratch.push((t, e.edge.0, w));
            }
            scratch.sort_by_key(|&(t, e, _)| (t, e));
            out_targets.extend(scratch.iter().map(|s| s.0));
            if let Some(ws) = weights.as_mut() {
                ws.extend(scratch.iter().map(|s| s.2));
            }
            out_offsets.push(out_targets.len());
        }
        let external_ids = node_ids
            .iter()
            .map(|&id| store.node_unchecked(id).external_id())
            .collect();
        let mut view = GraphView {
            vertex_count: n,
            out_offsets,
            out_targets,
            weights,
            in_offsets: None,
            in_targets: None,
            in_weights: None,
            node_ids,
            external_ids,
        };
        if p.build_reverse {
            view.build_reverse();
        }
        Ok(view)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn out_offsets(&self) -> &[usize] {
        &self.out_offsets
    }

    pub fn out_targets(&self) -> &[u32] {
        &self.out_targets
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn has_reverse(&self) -> bool {
        self.in_offsets.is_some()
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// Edge weights of `v`'s out-edges, or `None` for an unweighted view.
    #[inline]
    pub fn out_weights(&self, v: usize) -> Option<&[f64]> {
        self.weights
            .as_ref()
            .map(|w| &w[self.out_offsets[v]..self.out_offsets[v + 1]])
    }

    /// Weight of edge slot `e`; unweighted views read 1.0.
    #[inline]
    pub fn weight(&self, e: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[e])
    }

    pub fn in_neighbors(&self, v: usize) -> Result<&[u32], CsrError> {
        let (o, t) = self
            .in_offsets
            .as_ref()
            .zip(self.in_targets.as_ref())
            .ok_or(CsrError::ReverseNotBuilt)?;
        Ok(&t[o[v]..o[v + 1]])
    }

    pub fn outbound(&self) -> Adjacency<'_> {
        Adjacency {
            offsets: Cow::Borrowed(&self.out_offsets),
            targets: Cow::Borrowed(&self.out_targets),
            weights: self.weights.as_deref().map(Cow::Borrowed),
        }
    }

    /// Reverse adjacency, borrowed when built and computed otherwise.
    pub fn inbound(&self) -> Adjacency<'_> {
        match (&self.in_offsets, &self.in_targets) {
            (Some(o), Some(t)) => Adjacency {
                offsets: Cow::Borrowed(o),
                targets: Cow::Borrowed(t),
                weights: self.in_weights.as_deref().map(Cow::Borrowed),
            },
            _ => {
                let (o, t, w) = transpose(
                    self.vertex_count,
                    &self.out_offsets,
                    &self.out_targets,
                    self.weights.as_deref(),
                );
                Adjacency {
                    offsets: Cow::Owned(o),
                    targets: Cow::Owned(t),
                    weights: w.map(Cow::Owned),
                }
            }
        }
    }

    pub fn degree(&self, v: usize, dir: Direction) -> Result<usize, CsrError> {
        if v >= self.vertex_count {
            return Err(CsrError::OutOfRange(v));
        }
        match dir {
            Direction::Outgoing => Ok(self.out_offsets[v + 1] - self.out_offsets[v]),
            Direction::Incoming => {
                let o = self.in_offsets.as_ref().ok_or(CsrError::ReverseNotBuilt)?;
                Ok(o[v + 1] - o[v])
            }
        }
    }

    pub fn node_id(&self, v: usize) -> NodeId {
        self.node_ids[v]
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    pub fn external_id(&self, v: usize) -> u64 {
        self.external_ids[v]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    /// View index of a store id, by binary search over the sorted id map.
    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.node_ids.binary_search(&id).ok()
    }

    /// Every edge as `(source, target)` view indices, in CSR order.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count)
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&t| (u as u32, t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::PropertyValue as PV;

    fn empty() -> Vec<(String, PV)> {
        Vec::new()
    }

    #[test]
    fn empty_store_projection() {
        let s = GraphStore::new();
        let v = GraphView::project(&s, &Projection::default()).unwrap();
        assert_eq!(v.vertex_count(), 0);
        assert_eq!(v.out_offsets(), &[0]);
    }

    #[test]
    fn three_cycle_offsets() {
        let mut s = GraphStore::new();
        let ids: Vec<_> = (0..3)
            .map(|_| s.create_node(&["V"], empty()).unwrap())
            .collect();
        for i in 0..3 {
            s.create_edge(ids[i], ids[(i + 1) % 3], "E", empty())
                .unwrap();
        }
        let v = GraphView::project(
            &s,
            &Projection {
                build_reverse: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(v.out_offsets(), &[0, 1, 2, 3]);
        assert_eq!(v.in_neighbors(0).unwrap(), &[2]);
    }

    #[test]
    fn degree_errors_and_star() {
        let v = GraphView::from_edges(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], None, false);
        assert_eq!(v.degree(0, Direction::Outgoing), Ok(5));
        assert_eq!(v.degree(6, Direction::Outgoing), Ok(0));
        assert_eq!(
            v.degree(7, Direction::Outgoing),
            Err(CsrError::OutOfRange(7))
        );
        assert_eq!(
            v.degree(1, Direction::Incoming),
            Err(CsrError::ReverseNotBuilt)
        );
        let total: usize = (0..7)
            .map(|u| v.degree(u, Direction::Outgoing).unwrap())
            .sum();
        assert_eq!(total, v.edge_count());
    }

    #[test]
    fn weights_default_and_type_check() {
        let mut s = GraphStore::new();
        let a = s.create_node(&["V"], empty()).unwrap();
        let b = s.create_node(&["V"], empty()).unwrap();
        s.create_edge(a, b, "E", vec![("w", PV::Float(2.5))])
            .unwrap();
        s.create_edge(b, a, "E", empty()).unwrap();
        let p = Projection {
            weight_key: Some("w".into()),
            ..Default::default()
        };
        let v = GraphView::project(&s, &p).unwrap();
        assert_eq!(v.weights(), Some(&[2.5, 1.0][..]));
        s.create_edge(a, a, "E", vec![("w", PV::from("heavy"))])
            .unwrap();
        assert!(matches!(
            GraphView::project(&s, &p),
            Err(CsrError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn filters_label_and_type() {
        let mut s = GraphStore::new();
        let a = s.create_node(&["A"], empty()).unwrap();
        let b = s.create_node(&["B"], empty()).unwrap();
        let c = s.create_node(&["A"], empty()).unwrap();
        s.create_edge(a, b, "R", empty()).unwrap();
        s.create_edge(a, c, "R", empty()).unwrap();
        s.create_edge(a, c, "S", empty()).unwrap();
        let v = GraphView::project(
            &s,
            &Projection {
                label: Some("A".into()),
                rel_type: Some("R".into()),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(v.vertex_count(), 2);
        assert_eq!(v.node_ids(), &[a, c]);
        assert_eq!(v.edge_pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        let v = GraphView::project(
            &s,
            &Projection {
                rel_type: Some("NONE".into()),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((v.vertex_count(), v.edge_count()), (3, 0));
    }
}
