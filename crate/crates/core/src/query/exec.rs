//! Pull-based, batch-at-a-time execution of a [`PlanNode`] pipeline.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::ast::{AggFn, CmpOp, EdgeDir, Expr, Operand, ReturnExpr};
use super::planner::{PhysicalOp, PlanNode, Predicate, ProjectItem, SortKey};
use super::value::{GroupKey, NodeValue, Value};
use super::{Params, QueryError};
use crate::store::{
    compare_values, AdjEntry, Direction, EdgeId, GraphStore, KeyId, LabelId, NodeId, PropertyValue,
    RelTypeId,
};
use crate::vector::VectorIndexRegistry;

/// Maximum rows in one batch.
pub const BATCH_SIZE: usize = 1024;

/// How node values travel through the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Materialization {
    /// Every node value is a full copy of its properties.
    FullClone,
    /// Node ids; properties read from the per-node map.
    NodeRefOnly,
    /// Node ids; properties read from label columns.
    #[default]
    NodeRefColumnar,
}

impl Materialization {
    pub const ALL: [Materialization; 3] = [
        Materialization::FullClone,
        Materialization::NodeRefOnly,
        Materialization::NodeRefColumnar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Materialization::FullClone => "full-clone",
            Materialization::NodeRefOnly => "node-ref",
            Materialization::NodeRefColumnar => "node-ref-columnar",
        }
    }
}

impl FromStr for Materialization {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, QueryError> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "fullclone" | "full" | "clone" => Ok(Materialization::FullClone),
            "noderef" | "noderefonly" | "ref" => Ok(Materialization::NodeRefOnly),
            "noderefcolumnar" | "columnar" | "columnstore" => Ok(Materialization::NodeRefColumnar),
            _ => Err(QueryError::Semantic(format!(
                "unknown materialization mode {s:?}"
            ))),
        }
    }
}

/// Column-oriented block of rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Batch {
    pub columns: Vec<Vec<Value>>,
    pub len: usize,
}

impl Batch {
    fn with_width(width: usize) -> Batch {
        Batch {
            columns: (0..width).map(|_| Vec::with_capacity(BATCH_SIZE)).collect(),
            len: 0,
        }
    }

    /// Zero-width single row: the input of a leaf operator.
    fn unit() -> Batch {
        Batch {
            columns: Vec::new(),
            len: 1,
        }
    }

    fn row(&self, i: usize) -> Vec<Value> {
        self.columns.iter().map(|c| c[i].clone()).collect()
    }

    fn from_rows(rows: &mut impl Iterator<Item = Vec<Value>>, width: usize) -> Option<Batch> {
        let mut b = Batch::with_width(width);
        for row in rows.by_ref() {
            for (c, v) in row.into_iter().enumerate() {
                b.columns[c].push(v);
            }
            b.len += 1;
            if b.len == BATCH_SIZE {
                break;
            }
        }
        (b.len > 0).then_some(b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorProfile {
    pub operator: String,
    pub detail: String,
    pub estimated_rows: f64,
    pub rows: u64,
    pub batches: u64,
    pub max_batch: usize,
    /// Time spent in this operator alone.
    pub self_us: f64,
    /// Time including its input.
    pub total_us: f64,
}

/// Per-operator counters, root first.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ProfileReport {
    pub operators: Vec<OperatorProfile>,
    /// Adjacency comparisons made by ExpandInto.
    pub expand_into_comparisons: u64,
    pub expand_into_probes: u64,
}

impl ProfileReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (depth, o) in self.operators.iter().enumerate() {
            s.push_str(&format!(
                "{:indent$}{} [{}] rows={} batches={} time={:.1}us\n",
                "",
                o.operator,
                o.detail,
                o.rows,
                o.batches,
                o.self_us,
                indent = depth * 2
            ));
        }
        s
    }
}

pub struct ExecContext<'a> {
    pub store: &'a GraphStore,
    pub params: &'a Params,
    pub mode: Materialization,
    pub vectors: &'a VectorIndexRegistry,
}

type Res<T> = Result<T, QueryError>;

trait Operator {
    fn next(&mut self) -> Res<Option<Batch>>;
}

#[derive(Default, Clone, Copy)]
struct OpStat {
    rows: u64,
    batches: u64,
    max_batch: usize,
    nanos: u128,
}

struct Profiled<'a> {
    inner: Box<dyn Operator + 'a>,
    slot: usize,
    stats: Rc<RefCell<Vec<OpStat>>>,
}

impl Operator for Profiled<'_> {
    fn next(&mut self) -> Res<Option<Batch>> {
        let t = Instant::now();
        let r = self.inner.next();
        let elapsed = t.elapsed().as_nanos();
        let mut stats = self.stats.borrow_mut();
        let s = &mut stats[self.slot];
        s.nanos += elapsed;
        if let Ok(Some(b)) = &r {
            debug_assert!(b.len <= BATCH_SIZE && b.columns.iter().all(|c| c.len() == b.len));
            s.rows += b.len as u64;
            s.batches += 1;
            s.max_batch = s.max_batch.max(b.len);
        }
        r
    }
}

const NULL: PropertyValue = PropertyValue::Null;

fn materialize(store: &GraphStore, id: NodeId) -> NodeValue {
    let rec = store.node_unchecked(id);
    NodeValue {
        id,
        labels: rec
            .labels()
            .iter()
            .map(|l| store.label_name(*l).to_owned())
            .collect(),
        properties: rec.properties().clone(),
    }
}

fn node_value(store: &GraphStore, mode: Materialization, id: NodeId) -> Value {
    match mode {
        Materialization::FullClone => Value::Node(Box::new(materialize(store, id))),
        _ => Value::NodeRef(id),
    }
}

/// Output form of a node column: always fully materialized.
fn output_node(store: &GraphStore, v: &Value) -> Value {
    match v {
        Value::NodeRef(id) => Value::Node(Box::new(materialize(store, *id))),
        other => other.clone(),
    }
}

#[derive(Clone)]
struct PropAccess {
    col: usize,
    key: String,
    key_id: Option<KeyId>,
    hint: Option<LabelId>,
}

impl PropAccess {
    #[inline]
    fn get<'v>(
        &self,
        store: &'v GraphStore,
        mode: Materialization,
        v: &'v Value,
    ) -> &'v PropertyValue {
        match v {
            Value::Node(n) => n.properties.get(&self.key).unwrap_or(&NULL),
            Value::NodeRef(id) => match mode {
                Materialization::NodeRefColumnar => {
                    let Some(key) = self.key_id else { return &NULL };
                    let rec = store.node_unchecked(*id);
                    if let Some(h) = self.hint {
                        if let Some(pos) = rec.slot(h) {
                            return store.columns().get(h, key, pos);
                        }
                    }
                    match rec.labels().first() {
                        Some(&l) => store.resolve_column(*id, l, key),
                        None => &NULL,
                    }
                }
                _ => store
                    .node_unchecked(*id)
                    .property(&self.key)
                    .unwrap_or(&NULL),
            },
            Value::EdgeRef(e) => match store.edge(*e) {
                Ok(rec) => rec.property(&self.key).unwrap_or(&NULL),
                Err(_) => &NULL,
            },
            _ => &NULL,
        }
    }
}

fn kind(v: &PropertyValue) -> String {
    v.tag().map_or_else(|| "null".to_owned(), |t| t.to_string())
}

/// `lhs op rhs` with null comparisons false and incompatible types an error.
pub fn compare(lhs: &PropertyValue, op: CmpOp, rhs: &PropertyValue) -> Res<bool> {
    if lhs.is_null() || rhs.is_null() {
        return Ok(false);
    }
    if let (PropertyValue::Vector(a), PropertyValue::Vector(b)) = (lhs, rhs) {
        return match op {
            CmpOp::Eq => Ok(a == b),
            CmpOp::Ne => Ok(a != b),
            _ => Err(QueryError::TypeMismatch(
                "vectors only support = and <>".into(),
            )),
        };
    }
    match compare_values(lhs, rhs) {
        Some(o) => Ok(op.holds(o)),
        None if lhs.as_f64().is_some() && rhs.as_f64().is_some() => Ok(false),
        None => Err(QueryError::TypeMismatch(format!(
            "cannot compare {} with {}",
            kind(lhs),
            kind(rhs)
        ))),
    }
}

fn resolve(op: &Operand, params: &Params) -> Res<PropertyValue> {
    match op {
        Operand::Literal(v) => Ok(v.clone()),
        Operand::Param(p) => params
            .get(p)
            .cloned()
            .ok_or_else(|| QueryError::MissingParameter(p.clone())),
    }
}

#[derive(Clone, Default)]
struct Schema {
    names: Vec<String>,
    hints: Vec<Option<LabelId>>,
}

impl Schema {
    fn col(&self, var: &str) -> Res<usize> {
        self.names.iter().position(|n| n == var).ok_or_else(|| {
            QueryError::Planning(format!("variable {var} is not bound at this point"))
        })
    }

    fn push(&mut self, name: &str, hint: Option<LabelId>) {
        self.names.push(name.to_owned());
        self.hints.push(hint);
    }

    fn access(&self, store: &GraphStore, var: &str, key: &str) -> Res<PropAccess> {
        let col = self.col(var)?;
        Ok(PropAccess {
            col,
            key: key.to_owned(),
            key_id: store.key_id(key),
            hint: self.hints[col],
        })
    }
}

fn node_id(v: &Value) -> Res<Option<NodeId>> {
    match v {
        Value::Null => Ok(None),
        other => other
            .node_id()
            .map(Some)
            .ok_or_else(|| QueryError::TypeMismatch("expected a node".into())),
    }
}

// ---- row-extending operators -------------------------------------------

#[derive(Clone, Copy)]
struct Ext {
    node: NodeId,
    edge: Option<EdgeId>,
    score: f64,
}

trait Extender {
    fn extend(&mut self, batch: &Batch, row: usize, out: &mut Vec<Ext>) -> Res<()>;
}

#[derive(Clone, Copy)]
struct Emit {
    node: bool,
    edge: bool,
    score: bool,
}

struct ExtendOp<'a, E> {
    input: Option<Box<dyn Operator + 'a>>,
    leaf_done: bool,
    done: bool,
    ext: E,
    emit: Emit,
    width_in: usize,
    cur: Option<Batch>,
    row: usize,
    buf: Vec<Ext>,
    pos: usize,
    store: &'a GraphStore,
    mode: Materialization,
}

impl<'a, E: Extender> ExtendOp<'a, E> {
    fn new(
        input: Option<Box<dyn Operator + 'a>>,
        width_in: usize,
        ext: E,
        emit: Emit,
        ctx: &ExecContext<'a>,
    ) -> Self {
        ExtendOp {
            input,
            leaf_done: false,
            done: false,
            ext,
            emit,
            width_in,
            cur: None,
            row: 0,
            buf: Vec::new(),
            pos: 0,
            store: ctx.store,
            mode: ctx.mode,
        }
    }

    fn advance(&mut self) -> Res<bool> {
        loop {
            if let Some(cur) = &self.cur {
                if self.row + 1 < cur.len {
                    self.row += 1;
                    self.buf.clear();
                    self.pos = 0;
                    self.ext.extend(cur, self.row, &mut self.buf)?;
                    return Ok(true);
                }
            }
            let next = match &mut self.input {
                Some(input) => input.next()?,
                None if !self.leaf_done => {
                    self.leaf_done = true;
                    Some(Batch::unit())
                }
                None => None,
            };
            match next {
                Some(b) => {
                    self.cur = Some(b);
                    self.buf.clear();
                    self.pos = 0;
                    let cur = self.cur.as_ref().expect("just set");
                    if cur.len == 0 {
                        continue;
                    }
                    self.row = 0;
                    self.ext.extend(cur, 0, &mut self.buf)?;
                    return Ok(true);
                }
                None => {
                    self.cur = None;
                    self.done = true;
                    return Ok(false);
                }
            }
        }
    }
}

impl<E: Extender> Operator for ExtendOp<'_, E> {
    fn next(&mut self) -> Res<Option<Batch>> {
        if self.done {
            return Ok(None);
        }
        let width = self.width_in
            + self.emit.node as usize
            + self.emit.edge as usize
            + self.emit.score as usize;
        let mut out = Batch::with_width(width);
        loop {
            if let Some(cur) = &self.cur {
                while self.pos < self.buf.len() && out.len < BATCH_SIZE {
                    let e = self.buf[self.pos];
                    self.pos += 1;
                    for c in 0..self.width_in {
                        out.columns[c].push(cur.columns[c][self.row].clone());
                    }
                    let mut c = self.width_in;
                    if self.emit.node {
                        out.columns[c].push(node_value(self.store, self.mode, e.node));
                        c += 1;
                    }
                    if self.emit.edge {
                        out.columns[c].push(e.edge.map_or(Value::Null, Value::EdgeRef));
                        c += 1;
                    }
                    if self.emit.score {
                        out.columns[c].push(Value::Float(e.score));
                    }
                    out.len += 1;
                }
            }
            if out.len >= BATCH_SIZE || !self.advance()? {
                break;
            }
        }
        Ok((out.len > 0).then_some(out))
    }
}

/// Emits the same node list for every input row.
struct FixedNodes(Vec<NodeId>);

impl Extender for FixedNodes {
    fn extend(&mut self, _: &Batch, _: usize, out: &mut Vec<Ext>) -> Res<()> {
        out.extend(self.0.iter().map(|&node| Ext {
            node,
            edge: None,
            score: 0.0,
        }));
        Ok(())
    }
}

struct Scored(Vec<(NodeId, f64)>);

impl Extender for Scored {
    fn extend(&mut self, _: &Batch, _: usize, out: &mut Vec<Ext>) -> Res<()> {
        out.extend(self.0.iter().map(|&(node, score)| Ext {
            node,
            edge: None,
            score,
        }));
        Ok(())
    }
}

/// Relationship type filter: `Any`, one known type, or a type absent from
/// the store (matches nothing).
#[derive(Clone, Copy)]
enum RelFilter {
    Any,
    Is(RelTypeId),
    Never,
}

fn rel_filter(store: &GraphStore, rel: &Option<String>) -> RelFilter {
    match rel {
        None => RelFilter::Any,
        Some(r) => store.rel_type_id(r).map_or(RelFilter::Never, RelFilter::Is),
    }
}

fn adjacency<'s>(
    store: &'s GraphStore,
    node: NodeId,
    dir: Direction,
    rel: RelFilter,
) -> &'s [AdjEntry] {
    match rel {
        RelFilter::Any => store.adjacency(node, dir),
        RelFilter::Is(r) => store.adjacency_of_type(node, dir, r),
        RelFilter::Never => &[],
    }
}

struct ExpandAllExt<'a> {
    store: &'a GraphStore,
    from: usize,
    rel: RelFilter,
    dir: EdgeDir,
    /// `Some(None)`: a label the store has never seen.
    to_label: Option<Option<LabelId>>,
}

impl Extender for ExpandAllExt<'_> {
    fn extend(&mut self, batch: &Batch, row: usize, out: &mut Vec<Ext>) -> Res<()> {
        let Some(id) = node_id(&batch.columns[self.from][row])? else {
            return Ok(());
        };
        let label = match self.to_label {
            Some(None) => return Ok(()),
            Some(Some(l)) => Some(l),
            None => None,
        };
        let store = self.store;
        let mut take = |entries: &[AdjEntry], skip_loops: bool| {
            for e in entries {
                if skip_loops && e.neighbor == id {
                    continue;
                }
                if label.is_some_and(|l| !store.node_unchecked(e.neighbor).has_label(l)) {
                    continue;
                }
                out.push(Ext {
                    node: e.neighbor,
                    edge: Some(e.edge),
                    score: 0.0,
                });
            }
        };
        match self.dir {
            EdgeDir::Out => take(adjacency(store, id, Direction::Outgoing, self.rel), false),
            EdgeDir::In => take(adjacency(store, id, Direction::Incoming, self.rel), false),
            EdgeDir::Both => {
                take(adjacency(store, id, Direction::Outgoing, self.rel), false);
                take(adjacency(store, id, Direction::Incoming, self.rel), true);
            }
        }
        Ok(())
    }
}

/// Appends every entry of `list` equal to `(rel, other)`; one lower-bound
/// search plus a forward scan over the run.
fn probe_run(
    list: &[AdjEntry],
    rel: RelTypeId,
    other: NodeId,
    comparisons: &mut u64,
    out: &mut Vec<Ext>,
) {
    let key = (rel, other);
    let (mut lo, mut hi) = (0usize, list.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        *comparisons += 1;
        if (list[mid].rel, list[mid].neighbor) < key {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    loop {
        *comparisons += 1;
        match list.get(lo) {
            Some(e) if e.rel == rel && e.neighbor == other => {
                out.push(Ext {
                    node: other,
                    edge: Some(e.edge),
                    score: 0.0,
                });
                lo += 1;
            }
            _ => break,
        }
    }
}

struct ExpandIntoExt<'a> {
    store: &'a GraphStore,
    from: usize,
    to: usize,
    rel: RelFilter,
    dir: EdgeDir,
    comparisons: Rc<Cell<u64>>,
    probes: Rc<Cell<u64>>,
}

impl ExpandIntoExt<'_> {
    /// Edges `a -> b`, searching whichever endpoint list is shorter.
    fn directed(&self, a: NodeId, b: NodeId, cmp: &mut u64, out: &mut Vec<Ext>) {
        let s = self.store;
        let (list_owner, other, dir) =
            if s.degree(a, Direction::Outgoing) <= s.degree(b, Direction::Incoming) {
                (a, b, Direction::Outgoing)
            } else {
                (b, a, Direction::Incoming)
            };
        let list = s.adjacency(list_owner, dir);
        let mut found = Vec::new();
        match self.rel {
            RelFilter::Never => {}
            RelFilter::Is(r) => probe_run(list, r, other, cmp, &mut found),
            RelFilter::Any => {
                let mut i = 0;
                while i < list.len() {
                    let r = list[i].rel;
                    let run = list[i..].partition_point(|e| e.rel == r);
                    probe_run(&list[i..i + run], r, other, cmp, &mut found);
                    i += run;
                }
            }
        }
        out.extend(found.into_iter().map(|e| Ext { node: b, ..e }));
    }
}

impl Extender for ExpandIntoExt<'_> {
    fn extend(&mut self, batch: &Batch, row: usize, out: &mut Vec<Ext>) -> Res<()> {
        let (Some(a), Some(b)) = (
            node_id(&batch.columns[self.from][row])?,
            node_id(&batch.columns[self.to][row])?,
        ) else {
            return Ok(());
        };
        let mut cmp = 0;
        match self.dir {
            EdgeDir::Out => self.directed(a, b, &mut cmp, out),
            EdgeDir::In => self.directed(b, a, &mut cmp, out),
            EdgeDir::Both => {
                self.directed(a, b, &mut cmp, out);
                if a != b {
                    self.directed(b, a, &mut cmp, out);
                }
            }
        }
        self.comparisons.set(self.comparisons.get() + cmp);
        self.probes.set(self.probes.get() + 1);
        Ok(())
    }
}

// ---- filter / project ----------------------------------------------------

enum Check {
    Compare {
        access: PropAccess,
        op: CmpOp,
        rhs: PropertyValue,
    },
    HasLabel {
        col: usize,
        label: Option<LabelId>,
    },
    SameNode(usize, usize),
}

struct FilterOp<'a> {
    input: Box<dyn Operator + 'a>,
    checks: Vec<Check>,
    store: &'a GraphStore,
    mode: Materialization,
}

impl FilterOp<'_> {
    fn keep(&self, b: &Batch, i: usize) -> Res<bool> {
        for c in &self.checks {
            let ok = match c {
                Check::Compare { access, op, rhs } => compare(
                    access.get(self.store, self.mode, &b.columns[access.col][i]),
                    *op,
                    rhs,
                )?,
                Check::HasLabel { col, label } => match (node_id(&b.columns[*col][i])?, label) {
                    (Some(id), Some(l)) => self.store.node_unchecked(id).has_label(*l),
                    _ => false,
                },
                Check::SameNode(x, y) => {
                    let (a, b2) = (node_id(&b.columns[*x][i])?, node_id(&b.columns[*y][i])?);
                    a.is_some() && a == b2
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Operator for FilterOp<'_> {
    fn next(&mut self) -> Res<Option<Batch>> {
        while let Some(mut b) = self.input.next()? {
            let mut mask = Vec::with_capacity(b.len);
            for i in 0..b.len {
                mask.push(self.keep(&b, i)?);
            }
            let kept = mask.iter().filter(|k| **k).count();
            if kept == 0 {
                continue;
            }
            if kept < b.len {
                for col in &mut b.columns {
                    let mut i = 0;
                    col.retain(|_| {
                        i += 1;
                        mask[i - 1]
                    });
                }
                b.len = kept;
            }
            return Ok(Some(b));
        }
        Ok(None)
    }
}

#[derive(Clone)]
enum Eval {
    Prop(PropAccess),
    Node(usize),
    Column(usize),
}

impl Eval {
    fn compile(schema: &Schema, store: &GraphStore, e: &Expr) -> Res<Eval> {
        match e {
            Expr::Prop(v, k) => Ok(Eval::Prop(schema.access(store, v, k)?)),
            Expr::Var(v) => Ok(Eval::Node(schema.col(v)?)),
        }
    }

    /// Value as returned to the caller.
    fn output(&self, store: &GraphStore, mode: Materialization, b: &Batch, i: usize) -> Value {
        match self {
            Eval::Prop(a) => a.get(store, mode, &b.columns[a.col][i]).into(),
            Eval::Node(c) => output_node(store, &b.columns[*c][i]),
            Eval::Column(c) => b.columns[*c][i].clone(),
        }
    }

    /// Cheap value used for ordering and grouping.
    fn key(&self, store: &GraphStore, mode: Materialization, b: &Batch, i: usize) -> Value {
        match self {
            Eval::Prop(a) => a.get(store, mode, &b.columns[a.col][i]).into(),
            Eval::Node(c) => match &b.columns[*c][i] {
                Value::Node(n) => Value::NodeRef(n.id),
                other => other.clone(),
            },
            Eval::Column(c) => b.columns[*c][i].clone(),
        }
    }
}

struct ProjectOp<'a> {
    input: Box<dyn Operator + 'a>,
    items: Vec<Eval>,
    store: &'a GraphStore,
    mode: Materialization,
}

impl Operator for ProjectOp<'_> {
    fn next(&mut self) -> Res<Option<Batch>> {
        let Some(b) = self.input.next()? else {
            return Ok(None);
        };
        let columns = self
            .items
            .iter()
            .map(|e| {
                (0..b.len)
                    .map(|i| e.output(self.store, self.mode, &b, i))
                    .collect()
            })
            .collect();
        Ok(Some(Batch {
            columns,
            len: b.len,
        }))
    }
}

// ---- blocking operators ------------------------------------------------

enum AggState {
    Count(i64),
    Sum {
        int: i128,
        float: f64,
        any_float: bool,
    },
    Avg {
        int: i128,
        float: f64,
        n: u64,
    },
    Min(Option<Value>),
    Max(Option<Value>),
}

impl AggState {
    fn new(f: AggFn) -> AggState {
        match f {
            AggFn::Count => AggState::Count(0),
            AggFn::Sum => AggState::Sum {
                int: 0,
                float: 0.0,
                any_float: false,
            },
            AggFn::Avg => AggState::Avg {
                int: 0,
                float: 0.0,
                n: 0,
            },
            AggFn::Min => AggState::Min(None),
            AggFn::Max => AggState::Max(None),
        }
    }

    fn add(&mut self, v: Option<Value>) -> Res<()> {
        let Some(v) = v else {
            if let AggState::Count(c) = self {
                *c += 1;
            }
            return Ok(());
        };
        if v.is_null() {
            return Ok(());
        }
        let numeric = |v: &Value| QueryError::TypeMismatch(format!("expected a number, got {v}"));
        match self {
            AggState::Count(c) => *c += 1,
            AggState::Sum {
                int,
                float,
                any_float,
            } => match v {
                Value::Int(i) => *int += i as i128,
                Value::Float(f) => {
                    *float += f;
                    *any_float = true;
                }
                other => return Err(numeric(&other)),
            },
            AggState::Avg { int, float, n } => {
                match v {
                    Value::Int(i) => *int += i as i128,
                    Value::Float(f) => *float += f,
                    other => return Err(numeric(&other)),
                }
                *n += 1;
            }
            AggState::Min(cur) => {
                if cur
                    .as_ref()
                    .map_or(Ok(true), |c| extreme_cmp(&v, c).map(|o| o.is_lt()))?
                {
                    *cur = Some(v);
                }
            }
            AggState::Max(cur) => {
                if cur
                    .as_ref()
                    .map_or(Ok(true), |c| extreme_cmp(&v, c).map(|o| o.is_gt()))?
                {
                    *cur = Some(v);
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Value {
        match self {
            AggState::Count(c) => Value::Int(c),
            AggState::Sum {
                int,
                float,
                any_float,
            } => {
                if any_float {
                    Value::Float(float + int as f64)
                } else {
                    Value::Int(int as i64)
                }
            }
            AggState::Avg { n: 0, .. } => Value::Null,
            AggState::Avg { int, float, n } => Value::Float((int as f64 + float) / n as f64),
            AggState::Min(v) | AggState::Max(v) => v.unwrap_or(Value::Null),
        }
    }
}

fn extreme_cmp(a: &Value, b: &Value) -> Res<std::cmp::Ordering> {
    let as_prop = |v: &Value| -> Option<PropertyValue> {
        Some(match v {
            Value::Bool(x) => PropertyValue::Bool(*x),
            Value::Int(x) => PropertyValue::Int(*x),
            Value::Float(x) => PropertyValue::Float(*x),
            Value::String(x) => PropertyValue::String(x.clone()),
            _ => return None,
        })
    };
    match (as_prop(a), as_prop(b)) {
        (Some(x), Some(y)) => compare_values(&x, &y).ok_or_else(|| {
            QueryError::TypeMismatch(format!("cannot compare {} with {}", kind(&x), kind(&y)))
        }),
        _ => Ok(a.total_cmp(b)),
    }
}

enum AggItem {
    Key(Eval),
    Agg(AggFn, Option<Eval>),
}

struct AggregateOp<'a> {
    input: Box<dyn Operator + 'a>,
    items: Vec<AggItem>,
    store: &'a GraphStore,
    mode: Materialization,
    output: Option<std::vec::IntoIter<Vec<Value>>>,
}

impl AggregateOp<'_> {
    fn run(&mut self) -> Res<Vec<Vec<Value>>> {
        let mut index: HashMap<Vec<GroupKey>, usize> = HashMap::new();
        let mut groups: Vec<(Vec<Value>, Vec<AggState>)> = Vec::new();
        let has_keys = self.items.iter().any(|i| matches!(i, AggItem::Key(_)));
        let fresh = |items: &[AggItem]| -> Vec<AggState> {
            items
                .iter()
                .filter_map(|i| match i {
                    AggItem::Agg(f, _) => Some(AggState::new(*f)),
                    AggItem::Key(_) => None,
                })
                .collect()
        };
        if !has_keys {
            groups.push((Vec::new(), fresh(&self.items)));
        }
        while let Some(b) = self.input.next()? {
            for i in 0..b.len {
                let slot = if has_keys {
                    let keys: Vec<Value> = self
                        .items
                        .iter()
                        .filter_map(|it| match it {
                            AggItem::Key(e) => Some(e.key(self.store, self.mode, &b, i)),
                            AggItem::Agg(..) => None,
                        })
                        .collect();
                    let gk: Vec<GroupKey> = keys.iter().map(GroupKey::of).collect();
                    match index.get(&gk) {
                        Some(&s) => s,
                        None => {
                            index.insert(gk, groups.len());
                            groups.push((keys, fresh(&self.items)));
                            groups.len() - 1
                        }
                    }
                } else {
                    0
                };
                let states = &mut groups[slot].1;
                let mut a = 0;
                for it in &self.items {
                    if let AggItem::Agg(_, arg) = it {
                        let v = arg.as_ref().map(|e| e.key(self.store, self.mode, &b, i));
                        states[a].add(v)?;
                        a += 1;
                    }
                }
            }
        }
        Ok(groups
            .into_iter()
            .map(|(keys, states)| {
                let mut keys = keys.into_iter();
                let mut states = states.into_iter();
                self.items
                    .iter()
                    .map(|it| match it {
                        AggItem::Key(_) => {
                            output_node(self.store, &keys.next().expect("key per group"))
                        }
                        AggItem::Agg(..) => states.next().expect("state per aggregate").finish(),
                    })
                    .collect()
            })
            .collect())
    }
}

impl Operator for AggregateOp<'_> {
    fn next(&mut self) -> Res<Option<Batch>> {
        if self.output.is_none() {
            let rows = self.run()?;
            self.output = Some(rows.into_iter());
        }
        let width = self.items.len();
        Ok(Batch::from_rows(
            self.output.as_mut().expect("set above"),
            width,
        ))
    }
}

struct SortOp<'a> {
    input: Box<dyn Operator + 'a>,
    keys: Vec<(Eval, bool)>,
    limit: Option<usize>,
    width: usize,
    store: &'a GraphStore,
    mode: Materialization,
    output: Option<std::vec::IntoIter<Vec<Value>>>,
}

impl SortOp<'_> {
    fn run(&mut self) -> Res<Vec<Vec<Value>>> {
        let mut rows: Vec<(Vec<Value>, usize, Vec<Value>)> = Vec::new();
        while let Some(b) = self.input.next()? {
            for i in 0..b.len {
                let k = self
                    .keys
                    .iter()
                    .map(|(e, _)| e.key(self.store, self.mode, &b, i))
                    .collect();
                let seq = rows.len();
                rows.push((k, seq, b.row(i)));
            }
        }
        let keys = &self.keys;
        let order = |a: &(Vec<Value>, usize, Vec<Value>), b: &(Vec<Value>, usize, Vec<Value>)| {
            for ((x, y), (_, desc)) in a.0.iter().zip(&b.0).zip(keys) {
                let o = x.total_cmp(y);
                let o = if *desc { o.reverse() } else { o };
                if o.is_ne() {
                    return o;
                }
            }
            a.1.cmp(&b.1)
        };
        match self.limit {
            Some(k) if k < rows.len() => {
                if k == 0 {
                    rows.clear();
                } else {
                    rows.select_nth_unstable_by(k - 1, order);
                    rows.truncate(k);
                }
            }
            _ => {}
        }
        rows.sort_by(order);
        Ok(rows.into_iter().map(|r| r.2).collect())
    }
}

impl Operator for SortOp<'_> {
    fn next(&mut self) -> Res<Option<Batch>> {
        if self.output.is_none() {
            let rows = self.run()?;
            self.output = Some(rows.into_iter());
        }
        Ok(Batch::from_rows(
            self.output.as_mut().expect("set above"),
            self.width,
        ))
    }
}

struct LimitOp<'a> {
    input: Box<dyn Operator + 'a>,
    left: usize,
}

impl Operator for LimitOp<'_> {
    fn next(&mut self) -> Res<Option<Batch>> {
        if self.left == 0 {
            return Ok(None);
        }
        let Some(mut b) = self.input.next()? else {
            return Ok(None);
        };
        if b.len > self.left {
            for c in &mut b.columns {
                c.truncate(self.left);
            }
            b.len = self.left;
        }
        self.left -= b.len;
        Ok(Some(b))
    }
}

// ---- build ---------------------------------------------------------------

struct Builder<'c, 'a> {
    ctx: &'c ExecContext<'a>,
    stats: Rc<RefCell<Vec<OpStat>>>,
    comparisons: Rc<Cell<u64>>,
    probes: Rc<Cell<u64>>,
}

impl<'a> Builder<'_, 'a> {
    fn label(&self, name: &str) -> Option<LabelId> {
        self.ctx.store.label_id(name)
    }

    fn build(&self, node: &PlanNode, slot: usize) -> Res<(Box<dyn Operator + 'a>, Schema)> {
        let (input, mut schema) = match &node.input {
            Some(child) => {
                let (op, s) = self.build(child, slot + 1)?;
                (Some(op), s)
            }
            None => (None, Schema::default()),
        };
        let ctx = self.ctx;
        let store = ctx.store;
        let width_in = schema.names.len();
        let node_only = Emit {
            node: true,
            edge: false,
            score: false,
        };
        let need = |input: Option<Box<dyn Operator + 'a>>| {
            input.ok_or_else(|| QueryError::Planning(format!("{} needs an input", node.op.name())))
        };
        let op: Box<dyn Operator + 'a> = match &node.op {
            PhysicalOp::NodeScan { var } => {
                schema.push(var, None);
                let nodes = store.nodes().collect();
                Box::new(ExtendOp::new(
                    input,
                    width_in,
                    FixedNodes(nodes),
                    node_only,
                    ctx,
                ))
            }
            PhysicalOp::LabelScan { var, label } => {
                let l = self.label(label);
                schema.push(var, l);
                let nodes = l
                    .map(|l| store.nodes_with_label(l).collect())
                    .unwrap_or_default();
                Box::new(ExtendOp::new(
                    input,
                    width_in,
                    FixedNodes(nodes),
                    node_only,
                    ctx,
                ))
            }
            PhysicalOp::IndexSeek { var, index, values } => {
                schema.push(var, self.label(&index.label));
                let tuple: Vec<PropertyValue> = values
                    .iter()
                    .map(|v| resolve(v, ctx.params))
                    .collect::<Res<_>>()?;
                let nodes = if tuple.iter().any(PropertyValue::is_null) {
                    Vec::new()
                } else {
                    store.lookup_index(index, &tuple)?
                };
                Box::new(ExtendOp::new(
                    input,
                    width_in,
                    FixedNodes(nodes),
                    node_only,
                    ctx,
                ))
            }
            PhysicalOp::VectorSearch {
                var,
                score,
                label,
                key,
                query,
                k,
                metric,
            } => {
                let q = match resolve(query, ctx.params)? {
                    PropertyValue::Vector(v) => v,
                    other => {
                        return Err(QueryError::TypeMismatch(format!(
                            "query vector expected, got {other}"
                        )))
                    }
                };
                let k = match resolve(k, ctx.params)? {
                    PropertyValue::Int(k) if k > 0 => k as usize,
                    other => {
                        return Err(QueryError::TypeMismatch(format!(
                            "k must be a positive integer, got {other}"
                        )))
                    }
                };
                let index = ctx.vectors.get(store, Some(label), key)?;
                let hits = if index.is_empty() {
                    Vec::new()
                } else {
                    index.knn(&q, k, *metric)?
                };
                schema.push(var, self.label(label));
                if let Some(s) = score {
                    schema.push(s, None);
                }
                let emit = Emit {
                    node: true,
                    edge: false,
                    score: score.is_some(),
                };
                let scored = Scored(hits.into_iter().map(|h| (h.node, h.score)).collect());
                Box::new(ExtendOp::new(input, width_in, scored, emit, ctx))
            }
            PhysicalOp::ExpandAll {
                from,
                edge,
                to,
                rel_type,
                dir,
                to_label,
            } => {
                let from = schema.col(from)?;
                let ext = ExpandAllExt {
                    store,
                    from,
                    rel: rel_filter(store, rel_type),
                    dir: *dir,
                    to_label: to_label.as_ref().map(|l| self.label(l)),
                };
                schema.push(to, to_label.as_ref().and_then(|l| self.label(l)));
                if let Some(e) = edge {
                    schema.push(e, None);
                }
                let emit = Emit {
                    node: true,
                    edge: edge.is_some(),
                    score: false,
                };
                Box::new(ExtendOp::new(Some(need(input)?), width_in, ext, emit, ctx))
            }
            PhysicalOp::ExpandInto {
                from,
                edge,
                to,
                rel_type,
                dir,
            } => {
                let ext = ExpandIntoExt {
                    store,
                    from: schema.col(from)?,
                    to: schema.col(to)?,
                    rel: rel_filter(store, rel_type),
                    dir: *dir,
                    comparisons: Rc::clone(&self.comparisons),
                    probes: Rc::clone(&self.probes),
                };
                if let Some(e) = edge {
                    schema.push(e, None);
                }
                let emit = Emit {
                    node: false,
                    edge: edge.is_some(),
                    score: false,
                };
                Box::new(ExtendOp::new(Some(need(input)?), width_in, ext, emit, ctx))
            }
            PhysicalOp::Filter { predicates } => {
                let checks = predicates
                    .iter()
                    .map(|p| {
                        Ok(match p {
                            Predicate::Compare(c) => Check::Compare {
                                access: schema.access(store, &c.var, &c.key)?,
                                op: c.op,
                                rhs: resolve(&c.rhs, ctx.params)?,
                            },
                            Predicate::HasLabel { var, label } => Check::HasLabel {
                                col: schema.col(var)?,
                                label: self.label(label),
                            },
                            Predicate::SameNode { left, right } => {
                                Check::SameNode(schema.col(left)?, schema.col(right)?)
                            }
                        })
                    })
                    .collect::<Res<_>>()?;
                Box::new(FilterOp {
                    input: need(input)?,
                    checks,
                    store,
                    mode: ctx.mode,
                })
            }
            PhysicalOp::Project { items } => {
                let evals = items
                    .iter()
                    .map(|(_, item)| match item {
                        ProjectItem::Column(c) => Ok(Eval::Column(schema.col(c)?)),
                        ProjectItem::Expr(e) => self.eval(&schema, e, node),
                    })
                    .collect::<Res<_>>()?;
                let names = items.iter().map(|(n, _)| n.clone()).collect();
                schema = Schema {
                    hints: vec![None; items.len()],
                    names,
                };
                Box::new(ProjectOp {
                    input: need(input)?,
                    items: evals,
                    store,
                    mode: ctx.mode,
                })
            }
            PhysicalOp::Aggregate { items } => {
                let compiled = items
                    .iter()
                    .map(|(_, e)| {
                        Ok(match e {
                            ReturnExpr::Expr(x) => AggItem::Key(self.eval(&schema, x, node)?),
                            ReturnExpr::Agg(f, arg) => AggItem::Agg(
                                *f,
                                arg.as_ref()
                                    .map(|x| self.eval(&schema, x, node))
                                    .transpose()?,
                            ),
                        })
                    })
                    .collect::<Res<_>>()?;
                let names = items.iter().map(|(n, _)| n.clone()).collect();
                schema = Schema {
                    hints: vec![None; items.len()],
                    names,
                };
                Box::new(AggregateOp {
                    input: need(input)?,
                    items: compiled,
                    store,
                    mode: ctx.mode,
                    output: None,
                })
            }
            PhysicalOp::Sort { keys, limit } => {
                let keys = keys
                    .iter()
                    .map(|(k, desc)| {
                        let e = match k {
                            SortKey::Column(c) => Eval::Column(schema.col(c)?),
                            SortKey::Expr(e) => self.eval(&schema, e, node)?,
                        };
                        Ok((e, *desc))
                    })
                    .collect::<Res<_>>()?;
                Box::new(SortOp {
                    input: need(input)?,
                    keys,
                    limit: limit.map(|l| l as usize),
                    width: width_in,
                    store,
                    mode: ctx.mode,
                    output: None,
                })
            }
            PhysicalOp::Limit { count } => Box::new(LimitOp {
                input: need(input)?,
                left: *count as usize,
            }),
            PhysicalOp::Create { .. } => {
                return Err(QueryError::Planning(
                    "Create runs through the engine's write path".into(),
                ));
            }
        };
        Ok((
            Box::new(Profiled {
                inner: op,
                slot,
                stats: Rc::clone(&self.stats),
            }),
            schema,
        ))
    }

    /// Node variables compile to node evaluations, everything else (edges,
    /// scores) is read as a plain column.
    fn eval(&self, schema: &Schema, e: &Expr, plan: &PlanNode) -> Res<Eval> {
        match e {
            Expr::Var(v) if !is_node_var(v, plan) => Ok(Eval::Column(schema.col(v)?)),
            e => Eval::compile(schema, self.ctx.store, e),
        }
    }
}

/// True when some operator below `plan` binds `var` as a node.
fn is_node_var(var: &str, plan: &PlanNode) -> bool {
    plan.operators().iter().any(|n| match &n.op {
        PhysicalOp::NodeScan { var: v }
        | PhysicalOp::LabelScan { var: v, .. }
        | PhysicalOp::IndexSeek { var: v, .. }
        | PhysicalOp::VectorSearch { var: v, .. } => v == var,
        PhysicalOp::ExpandAll { to, .. } => to == var,
        _ => false,
    })
}

/// Output of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub profile: ProfileReport,
}

/// Runs `plan`, handing each output batch to `sink`.
pub fn execute_with(
    plan: &PlanNode,
    ctx: &ExecContext<'_>,
    sink: &mut dyn FnMut(Batch),
) -> Res<(Vec<String>, ProfileReport)> {
    let ops = plan.operators();
    let builder = Builder {
        ctx,
        stats: Rc::new(RefCell::new(vec![OpStat::default(); ops.len()])),
        comparisons: Rc::new(Cell::new(0)),
        probes: Rc::new(Cell::new(0)),
    };
    let (mut root, schema) = builder.build(plan, 0)?;
    while let Some(b) = root.next()? {
        sink(b);
    }
    drop(root);
    let stats = builder.stats.borrow();
    let operators = ops
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let s = stats[i];
            let child = stats.get(i + 1).map_or(0, |c| c.nanos);
            OperatorProfile {
                operator: n.op.name().to_owned(),
                detail: n.op.detail(),
                estimated_rows: n.rows,
                rows: s.rows,
                batches: s.batches,
                max_batch: s.max_batch,
                self_us: s.nanos.saturating_sub(child) as f64 / 1000.0,
                total_us: s.nanos as f64 / 1000.0,
            }
        })
        .collect();
    let profile = ProfileReport {
        operators,
        expand_into_comparisons: builder.comparisons.get(),
        expand_into_probes: builder.probes.get(),
    };
    Ok((schema.names, profile))
}

/// Runs `plan` and collects its rows.
pub fn execute(plan: &PlanNode, ctx: &ExecContext<'_>) -> Res<Execution> {
    let mut rows: Vec<Vec<Value>> = Vec::new();
    let (columns, profile) = execute_with(plan, ctx, &mut |b| {
        let start = rows.len();
        rows.extend((0..b.len).map(|_| Vec::with_capacity(b.columns.len())));
        for col in b.columns {
            for (r, v) in col.into_iter().enumerate() {
                rows[start + r].push(v);
            }
        }
    })?;
    Ok(Execution {
        columns,
        rows,
        profile,
    })
}
