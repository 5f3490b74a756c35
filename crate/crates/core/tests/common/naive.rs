//! Naive reference executor for the query engine. It enumerates every
//! assignment of nodes and edges to pattern variables and filters afterwards,
//! sharing nothing with the planner or the operators.

use std::cmp::Ordering;
use std::collections::HashMap;

use strata::query::ast::{AggFn, CmpOp, EdgeDir, Expr, Operand, Query, ReturnExpr};
use strata::query::{NodeValue, Params, Value};
use strata::store::{EdgeId, GraphStore, NodeId, PropertyValue};

#[derive(Clone, Copy, Debug)]
enum Bound {
    Node(NodeId),
    Edge(EdgeId),
}

type Binding = HashMap<String, Bound>;

pub struct NaiveResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

fn operand(op: &Operand, params: &Params) -> PropertyValue {
    match op {
        Operand::Literal(v) => v.clone(),
        Operand::Param(p) => params.get(p).cloned().expect("parameter bound"),
    }
}

fn num(v: &PropertyValue) -> Option<f64> {
    match v {
        PropertyValue::Int(i) => Some(*i as f64),
        PropertyValue::Float(f) => Some(*f),
        _ => None,
    }
}

/// False when either side is null. Panics on incomparable types, which
/// generated queries avoid.
fn holds(lhs: &PropertyValue, op: CmpOp, rhs: &PropertyValue) -> bool {
    use PropertyValue as P;
    let ord = match (lhs, rhs) {
        (P::Null, _) | (_, P::Null) => return false,
        (P::Int(a), P::Int(b)) => a.cmp(b),
        (a, b) if num(a).is_some() && num(b).is_some() => {
            num(a).unwrap().partial_cmp(&num(b).unwrap()).unwrap()
        }
        (P::String(a), P::String(b)) => a.cmp(b),
        (P::Bool(a), P::Bool(b)) => a.cmp(b),
        (a, b) => panic!("incomparable {a:?} {b:?}"),
    };
    match op {
        CmpOp::Eq => ord == Ordering::Equal,
        CmpOp::Ne => ord != Ordering::Equal,
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Gt => ord == Ordering::Greater,
        CmpOp::Ge => ord != Ordering::Less,
    }
}

fn property(store: &GraphStore, b: Bound, key: &str) -> PropertyValue {
    match b {
        Bound::Node(n) => store
            .node(n)
            .unwrap()
            .property(key)
            .cloned()
            .unwrap_or_default(),
        Bound::Edge(e) => store
            .edge(e)
            .unwrap()
            .property(key)
            .cloned()
            .unwrap_or_default(),
    }
}

fn full_node(store: &GraphStore, id: NodeId) -> Value {
    let rec = store.node(id).unwrap();
    Value::Node(Box::new(NodeValue {
        id,
        labels: rec
            .labels()
            .iter()
            .map(|l| store.label_name(*l).to_owned())
            .collect(),
        properties: rec.properties().clone(),
    }))
}

fn eval(store: &GraphStore, b: &Binding, e: &Expr) -> Value {
    match e {
        Expr::Var(v) => match b[v] {
            Bound::Node(n) => full_node(store, n),
            Bound::Edge(id) => Value::EdgeRef(id),
        },
        Expr::Prop(v, k) => Value::from(property(store, b[v], k)),
    }
}

fn has_labels(store: &GraphStore, id: NodeId, labels: &[&str]) -> bool {
    let rec = store.node(id).unwrap();
    labels.iter().all(|l| {
        store
            .label_id(l)
            .is_some_and(|lid| rec.labels().contains(&lid))
    })
}

/// Left-to-right nested loops: each pattern binds its first node by scanning
/// every node, then follows edges by scanning every edge.
fn assignments(store: &GraphStore, q: &Query) -> Vec<Binding> {
    let mut labels: HashMap<&str, Vec<&str>> = HashMap::new();
    for p in &q.patterns {
        for n in &p.nodes {
            let entry = labels.entry(&n.var).or_default();
            if let Some(l) = &n.label {
                entry.push(l);
            }
        }
    }
    let all_nodes: Vec<NodeId> = store.nodes().collect();
    let all_edges: Vec<(EdgeId, NodeId, NodeId, String)> = store
        .edges()
        .map(|(id, e)| (id, e.src, e.dst, store.rel_type_name(e.rel).to_owned()))
        .collect();
    let bind = |b: &Binding, var: &str, id: NodeId| -> Option<Binding> {
        match b.get(var) {
            Some(Bound::Node(x)) => (*x == id).then(|| b.clone()),
            Some(Bound::Edge(_)) => unreachable!(),
            None => has_labels(store, id, &labels[var]).then(|| {
                let mut nb = b.clone();
                nb.insert(var.to_owned(), Bound::Node(id));
                nb
            }),
        }
    };

    let mut partial = vec![Binding::new()];
    for p in &q.patterns {
        let first = &p.nodes[0].var;
        partial = partial
            .iter()
            .flat_map(|b| all_nodes.iter().filter_map(|&id| bind(b, first, id)))
            .collect();
        for (k, e) in p.edges.iter().enumerate() {
            let (from, to) = (&p.nodes[k].var, &p.nodes[k + 1].var);
            let mut next = Vec::new();
            for b in &partial {
                let Bound::Node(a) = b[from] else {
                    unreachable!()
                };
                for (id, s, d, rel) in &all_edges {
                    if e.rel_type.as_ref().is_some_and(|t| t != rel) {
                        continue;
                    }
                    let other = match e.dir {
                        EdgeDir::Out => (*s == a).then_some(*d),
                        EdgeDir::In => (*d == a).then_some(*s),
                        EdgeDir::Both if *s == a => Some(*d),
                        EdgeDir::Both => (*d == a).then_some(*s),
                    };
                    let Some(other) = other else { continue };
                    if let Some(mut nb) = bind(b, to, other) {
                        if let Some(v) = &e.var {
                            nb.insert(v.clone(), Bound::Edge(*id));
                        }
                        next.push(nb);
                    }
                }
            }
            partial = next;
        }
    }
    partial
}

fn aggregate(f: AggFn, vals: &[Value]) -> Value {
    let present: Vec<&Value> = vals.iter().filter(|v| !v.is_null()).collect();
    match f {
        AggFn::Count => Value::Int(present.len() as i64),
        AggFn::Sum => {
            if present.iter().all(|v| matches!(v, Value::Int(_))) {
                Value::Int(present.iter().map(|v| v.as_int().unwrap()).sum())
            } else {
                Value::Float(present.iter().map(|v| v.as_f64().unwrap()).sum())
            }
        }
        AggFn::Avg => {
            if present.is_empty() {
                Value::Null
            } else {
                Value::Float(
                    present.iter().map(|v| v.as_f64().unwrap()).sum::<f64>() / present.len() as f64,
                )
            }
        }
        AggFn::Min => present
            .iter()
            .min_by(|a, b| a.total_cmp(b))
            .map_or(Value::Null, |v| (*v).clone()),
        AggFn::Max => present
            .iter()
            .max_by(|a, b| a.total_cmp(b))
            .map_or(Value::Null, |v| (*v).clone()),
    }
}

/// Runs a normalized MATCH query without knn. Rows come out in ORDER BY order
/// when one is given and in arbitrary order otherwise.
pub fn run(store: &GraphStore, q: &Query, params: &Params) -> NaiveResult {
    assert!(q.knn.is_none());
    let bindings: Vec<Binding> = assignments(store, q)
        .into_iter()
        .filter(|b| {
            q.conditions.iter().all(|c| {
                holds(
                    &property(store, b[&c.var], &c.key),
                    c.op,
                    &operand(&c.rhs, params),
                )
            })
        })
        .collect();
    let columns: Vec<String> = q.returns.iter().map(|r| r.name()).collect();
    let aggregate_query = q.returns.iter().any(|r| r.expr.is_aggregate());

    // Sort keys are evaluated alongside each output row.
    let order_keys = |b: &Binding, row: &[Value]| -> Vec<Value> {
        q.order_by
            .iter()
            .map(|o| {
                match columns
                    .iter()
                    .position(|c| *c == o.expr.text() || matches!(&o.expr, Expr::Var(v) if v == c))
                {
                    Some(i) => row[i].clone(),
                    None => eval(store, b, &o.expr),
                }
            })
            .collect()
    };

    let mut keyed: Vec<(Vec<Value>, Vec<Value>)> = Vec::new();
    if aggregate_query {
        let mut groups: Vec<(Vec<Value>, Vec<Binding>)> = Vec::new();
        for b in bindings {
            let key: Vec<Value> = q
                .returns
                .iter()
                .filter_map(|r| match &r.expr {
                    ReturnExpr::Expr(e) => Some(eval(store, &b, e)),
                    ReturnExpr::Agg(..) => None,
                })
                .collect();
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(b),
                None => groups.push((key, vec![b])),
            }
        }
        if groups.is_empty() && q.returns.iter().all(|r| r.expr.is_aggregate()) {
            groups.push((Vec::new(), Vec::new()));
        }
        for (key, members) in groups {
            let mut key_iter = key.into_iter();
            let row: Vec<Value> = q
                .returns
                .iter()
                .map(|r| match &r.expr {
                    ReturnExpr::Expr(_) => key_iter.next().unwrap(),
                    ReturnExpr::Agg(_, None) => Value::Int(members.len() as i64),
                    ReturnExpr::Agg(f, Some(e)) => {
                        let vals: Vec<Value> = members.iter().map(|b| eval(store, b, e)).collect();
                        aggregate(*f, &vals)
                    }
                })
                .collect();
            let keys = q
                .order_by
                .iter()
                .map(|o| {
                    let i = columns
                        .iter()
                        .position(|c| {
                            *c == o.expr.text() || matches!(&o.expr, Expr::Var(v) if v == c)
                        })
                        .expect("aggregate ORDER BY names a column");
                    row[i].clone()
                })
                .collect();
            keyed.push((keys, row));
        }
    } else {
        for b in &bindings {
            let row: Vec<Value> = q
                .returns
                .iter()
                .map(|r| match &r.expr {
                    ReturnExpr::Expr(e) => eval(store, b, e),
                    ReturnExpr::Agg(..) => unreachable!(),
                })
                .collect();
            keyed.push((order_keys(b, &row), row));
        }
    }
    if !q.order_by.is_empty() {
        keyed.sort_by(|a, b| {
            for ((x, y), o) in a.0.iter().zip(&b.0).zip(&q.order_by) {
                let c = x.total_cmp(y);
                let c = if o.descending { c.reverse() } else { c };
                if c.is_ne() {
                    return c;
                }
            }
            Ordering::Equal
        });
    }
    let mut rows: Vec<Vec<Value>> = keyed.into_iter().map(|(_, r)| r).collect();
    if let Some(l) = q.limit {
        rows.truncate(l as usize);
    }
    NaiveResult { columns, rows }
}
