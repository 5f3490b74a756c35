//! Cost-based planner producing a linear operator pipeline.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::ast::*;
use super::cost::{floor, CostModel, Statistics};
use super::QueryError;
use crate::store::IndexDescriptor;
use crate::vector::Metric;

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Compare(Condition),
    HasLabel {
        var: String,
        label: String,
    },
    /// Both columns hold the same node.
    SameNode {
        left: String,
        right: String,
    },
}

impl Predicate {
    fn vars(&self) -> Vec<&str> {
        match self {
            Predicate::Compare(c) => vec![&c.var],
            Predicate::HasLabel { var, .. } => vec![var],
            Predicate::SameNode { left, right } => vec![left, right],
        }
    }

    fn text(&self) -> String {
        match self {
            Predicate::Compare(c) => format!(
                "{}.{} {} {}",
                c.var,
                c.key,
                c.op.symbol(),
                operand_text(&c.rhs)
            ),
            Predicate::HasLabel { var, label } => format!("{var}:{label}"),
            Predicate::SameNode { left, right } => format!("{left} = {right}"),
        }
    }
}

fn operand_text(o: &Operand) -> String {
    match o {
        Operand::Literal(v) => v.to_string(),
        Operand::Param(p) => format!("${p}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SortKey {
    Expr(Expr),
    Column(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectItem {
    Expr(Expr),
    Column(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhysicalOp {
    NodeScan {
        var: String,
    },
    LabelScan {
        var: String,
        label: String,
    },
    IndexSeek {
        var: String,
        index: IndexDescriptor,
        values: Vec<Operand>,
    },
    VectorSearch {
        var: String,
        score: Option<String>,
        label: String,
        key: String,
        query: Operand,
        k: Operand,
        metric: Metric,
    },
    ExpandAll {
        from: String,
        edge: Option<String>,
        to: String,
        rel_type: Option<String>,
        dir: EdgeDir,
        to_label: Option<String>,
    },
    ExpandInto {
        from: String,
        edge: Option<String>,
        to: String,
        rel_type: Option<String>,
        dir: EdgeDir,
    },
    Filter {
        predicates: Vec<Predicate>,
    },
    Project {
        items: Vec<(String, ProjectItem)>,
    },
    Aggregate {
        items: Vec<(String, ReturnExpr)>,
    },
    Sort {
        keys: Vec<(SortKey, bool)>,
        limit: Option<u64>,
    },
    Limit {
        count: u64,
    },
    Create {
        patterns: Vec<Pattern>,
    },
}

impl PhysicalOp {
    pub fn name(&self) -> &'static str {
        match self {
            PhysicalOp::NodeScan { .. } => "NodeScan",
            PhysicalOp::LabelScan { .. } => "LabelScan",
            PhysicalOp::IndexSeek { .. } => "IndexSeek",
            PhysicalOp::VectorSearch { .. } => "VectorSearch",
            PhysicalOp::ExpandAll { .. } => "ExpandAll",
            PhysicalOp::ExpandInto { .. } => "ExpandInto",
            PhysicalOp::Filter { .. } => "Filter",
            PhysicalOp::Project { .. } => "Project",
            PhysicalOp::Aggregate { .. } => "Aggregate",
            PhysicalOp::Sort { .. } => "Sort",
            PhysicalOp::Limit { .. } => "Limit",
            PhysicalOp::Create { .. } => "Create",
        }
    }

    pub fn detail(&self) -> String {
        let arrow =
            |from: &str, edge: &Option<String>, to: &str, rel: &Option<String>, dir: EdgeDir| {
                let inner = format!(
                    "{}{}",
                    edge.as_deref().unwrap_or(""),
                    rel.as_ref().map(|r| format!(":{r}")).unwrap_or_default()
                );
                match dir {
                    EdgeDir::Out => format!("({from})-[{inner}]->({to})"),
                    EdgeDir::In => format!("({from})<-[{inner}]-({to})"),
                    EdgeDir::Both => format!("({from})-[{inner}]-({to})"),
                }
            };
        match self {
            PhysicalOp::NodeScan { var } => var.clone(),
            PhysicalOp::LabelScan { var, label } => format!("{var}:{label}"),
            PhysicalOp::IndexSeek { var, index, values } => format!(
                "{var}:{}({}) = ({})",
                index.label,
                index.keys.join(", "),
                values
                    .iter()
                    .map(operand_text)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            PhysicalOp::VectorSearch {
                var,
                label,
                key,
                metric,
                ..
            } => format!("{var}:{label}.{key} {metric}"),
            PhysicalOp::ExpandAll {
                from,
                edge,
                to,
                rel_type,
                dir,
                ..
            } => arrow(from, edge, to, rel_type, *dir),
            PhysicalOp::ExpandInto {
                from,
                edge,
                to,
                rel_type,
                dir,
            } => arrow(from, edge, to, rel_type, *dir),
            PhysicalOp::Filter { predicates } => predicates
                .iter()
                .map(Predicate::text)
                .collect::<Vec<_>>()
                .join(" AND "),
            PhysicalOp::Project { items } => items
                .iter()
                .map(|(n, _)| n.as_str())
                .collect::<Vec<_>>()
                .join(", "),
            PhysicalOp::Aggregate { items } => items
                .iter()
                .map(|(n, _)| n.as_str())
                .collect::<Vec<_>>()
                .join(", "),
            PhysicalOp::Sort { keys, limit } => {
                let k: Vec<String> = keys
                    .iter()
                    .map(|(k, desc)| {
                        let t = match k {
                            SortKey::Expr(e) => e.text(),
                            SortKey::Column(c) => c.clone(),
                        };
                        if *desc {
                            format!("{t} DESC")
                        } else {
                            t
                        }
                    })
                    .collect();
                match limit {
                    Some(l) => format!("{} top {l}", k.join(", ")),
                    None => k.join(", "),
                }
            }
            PhysicalOp::Limit { count } => count.to_string(),
            PhysicalOp::Create { patterns } => format!("{} pattern(s)", patterns.len()),
        }
    }
}

/// One operator with its estimates. `cost` covers the whole subtree.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanNode {
    pub op: PhysicalOp,
    pub input: Option<Box<PlanNode>>,
    pub rows: f64,
    pub cost: f64,
}

impl PlanNode {
    /// Root first.
    pub fn operators(&self) -> Vec<&PlanNode> {
        let mut out = vec![self];
        let mut cur = self;
        while let Some(next) = cur.input.as_deref() {
            out.push(next);
            cur = next;
        }
        out
    }

    pub fn index_seeks(&self) -> usize {
        self.operators()
            .iter()
            .filter(|n| matches!(n.op, PhysicalOp::IndexSeek { .. }))
            .count()
    }

    /// Indented tree rendering used by EXPLAIN.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (depth, n) in self.operators().iter().enumerate() {
            let _ = writeln!(
                s,
                "{:indent$}{} [{}] rows={:.1} cost={:.1}",
                "",
                n.op.name(),
                n.op.detail(),
                n.rows,
                n.cost,
                indent = depth * 2
            );
        }
        s
    }

    fn from_ops(ops: Vec<(PhysicalOp, f64, f64)>) -> Option<PlanNode> {
        let mut node: Option<PlanNode> = None;
        let mut total = 0.0;
        for (op, rows, cost) in ops {
            total += cost;
            node = Some(PlanNode {
                op,
                input: node.map(Box::new),
                rows,
                cost: total,
            });
        }
        node
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct PlannerOptions {
    pub pushdown: bool,
    pub reorder: bool,
    pub expand_into: bool,
    pub use_indexes: bool,
    /// Pattern counts above this are ordered greedily.
    pub exhaustive_limit: usize,
    pub cost: CostModel,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions {
            pushdown: true,
            reorder: true,
            expand_into: true,
            use_indexes: true,
            exhaustive_limit: 6,
            cost: CostModel::default(),
        }
    }
}

#[derive(Clone)]
struct Chain {
    ops: Vec<(PhysicalOp, f64, f64)>,
    rows: f64,
    cost: f64,
    bound: HashSet<String>,
    guaranteed: HashMap<String, String>,
    pending: Vec<Predicate>,
    seeks: usize,
    tmp: usize,
}

impl Chain {
    fn encoding(&self) -> String {
        format!("{:?}", self.ops.iter().map(|o| &o.0).collect::<Vec<_>>())
    }

    /// Lower cost wins; ties prefer more seeks, then the smaller encoding.
    fn better_than(&self, other: &Chain) -> bool {
        let eps = 1e-9 * self.cost.abs().max(other.cost.abs()).max(1.0);
        if (self.cost - other.cost).abs() > eps {
            return self.cost < other.cost;
        }
        if self.seeks != other.seeks {
            return self.seeks > other.seeks;
        }
        self.encoding() < other.encoding()
    }
}

struct Planner<'a> {
    stats: &'a Statistics,
    opts: &'a PlannerOptions,
    labels: HashMap<String, Vec<String>>,
}

fn pick<'c>(best: &mut Option<Chain>, candidate: Chain) {
    match best {
        Some(b) if !candidate.better_than(b) => {}
        _ => *best = Some(candidate),
    }
}

impl<'a> Planner<'a> {
    fn label_hint(&self, chain: &Chain, var: &str) -> Option<String> {
        chain
            .guaranteed
            .get(var)
            .cloned()
            .or_else(|| self.labels.get(var).and_then(|l| l.first().cloned()))
    }

    fn push(&self, chain: &mut Chain, op: PhysicalOp, rows: f64, cost: f64) {
        chain.rows = rows;
        chain.cost += cost;
        chain.ops.push((op, rows, cost));
    }

    fn filter(&self, chain: &mut Chain, predicates: Vec<Predicate>) {
        if predicates.is_empty() {
            return;
        }
        let m = &self.opts.cost;
        let mut sel = 1.0;
        for p in &predicates {
            sel *= match p {
                Predicate::Compare(c) => self.stats.selectivity(
                    m,
                    self.label_hint(chain, &c.var).as_deref(),
                    &c.key,
                    c.op,
                ),
                Predicate::HasLabel { label, .. } => self.stats.label_fraction(label),
                Predicate::SameNode { .. } => 1.0 / self.stats.node_count().max(1.0),
            };
        }
        let rows_in = chain.rows;
        self.push(
            chain,
            PhysicalOp::Filter { predicates },
            floor(rows_in, rows_in * sel),
            rows_in * m.filter_row,
        );
    }

    /// Places every pending predicate whose variables are bound.
    fn place_ready(&self, chain: &mut Chain) {
        if !self.opts.pushdown {
            return;
        }
        let (ready, rest): (Vec<_>, Vec<_>) = std::mem::take(&mut chain.pending)
            .into_iter()
            .partition(|p| p.vars().iter().all(|v| chain.bound.contains(*v)));
        chain.pending = rest;
        self.filter(chain, ready);
    }

    fn bind(&self, chain: &mut Chain, var: &str, guaranteed: Option<&str>) {
        chain.bound.insert(var.to_owned());
        if let Some(g) = guaranteed {
            chain.guaranteed.insert(var.to_owned(), g.to_owned());
        }
        for l in self.labels.get(var).into_iter().flatten() {
            if Some(l.as_str()) != guaranteed {
                chain.pending.push(Predicate::HasLabel {
                    var: var.to_owned(),
                    label: l.clone(),
                });
            }
        }
    }

    fn smallest_label(&self, var: &str) -> Option<String> {
        self.labels.get(var).and_then(|ls| {
            ls.iter()
                .min_by(|a, b| {
                    self.stats
                        .scan(Some(a))
                        .total_cmp(&self.stats.scan(Some(b)))
                        .then(a.cmp(b))
                })
                .cloned()
        })
    }

    fn scan(&self, chain: &mut Chain, var: &str) {
        let m = &self.opts.cost;
        let rows_in = chain.rows;
        let mut best_seek: Option<(f64, IndexDescriptor, Vec<usize>)> = None;
        if self.opts.use_indexes {
            for label in self.labels.get(var).into_iter().flatten() {
                for index in self.stats.catalog.indexes_on(label) {
                    let picks: Option<Vec<usize>> = index
                        .keys
                        .iter()
                        .map(|k| {
                            chain.pending.iter().position(|p| {
                                matches!(p, Predicate::Compare(c) if c.var == var && c.key == *k && c.op == CmpOp::Eq)
                            })
                        })
                        .collect();
                    let Some(picks) = picks else { continue };
                    let est = self.stats.seek(index);
                    let replace = match &best_seek {
                        None => true,
                        Some((e, d, _)) => {
                            est < *e
                                || (est == *e && index.keys.len() > d.keys.len())
                                || (est == *e
                                    && index.keys.len() == d.keys.len()
                                    && index.name < d.name)
                        }
                    };
                    if replace {
                        best_seek = Some((est, index.clone(), picks));
                    }
                }
            }
        }
        let label = self.smallest_label(var);
        let scan_rows = self.stats.scan(label.as_deref());
        match best_seek {
            Some((est, index, picks)) if est <= scan_rows => {
                let values = picks
                    .iter()
                    .map(|&i| match &chain.pending[i] {
                        Predicate::Compare(c) => c.rhs.clone(),
                        _ => unreachable!("seek picks are comparisons"),
                    })
                    .collect();
                let mut picks = picks;
                picks.sort_unstable();
                picks.dedup();
                for i in picks.into_iter().rev() {
                    chain.pending.remove(i);
                }
                let rows = floor(rows_in, rows_in * est);
                let label = index.label.clone();
                self.push(
                    chain,
                    PhysicalOp::IndexSeek {
                        var: var.to_owned(),
                        index,
                        values,
                    },
                    rows,
                    rows * m.index_seek_row,
                );
                chain.seeks += 1;
                self.bind(chain, var, Some(&label));
            }
            _ => {
                let rows = if scan_rows > 0.0 {
                    floor(rows_in, rows_in * scan_rows)
                } else {
                    0.0
                };
                let op = match &label {
                    Some(l) => PhysicalOp::LabelScan {
                        var: var.to_owned(),
                        label: l.clone(),
                    },
                    None => PhysicalOp::NodeScan {
                        var: var.to_owned(),
                    },
                };
                self.push(chain, op, rows, rows * m.scan_row);
                self.bind(chain, var, label.as_deref());
            }
        }
        self.place_ready(chain);
    }

    fn expand(&self, chain: &mut Chain, from: &str, edge: &EdgePattern, to: &str, dir: EdgeDir) {
        let m = &self.opts.cost;
        let rows_in = chain.rows;
        let from_label = self.label_hint(chain, from);
        let rel = edge.rel_type.clone();
        if chain.bound.contains(to) {
            let to_label = self.label_hint(chain, to);
            let f = self.stats.into_factor(
                from_label.as_deref(),
                rel.as_deref(),
                to_label.as_deref(),
                dir,
            );
            let rows = floor(rows_in, rows_in * f);
            if self.opts.expand_into {
                let op = PhysicalOp::ExpandInto {
                    from: from.to_owned(),
                    edge: edge.var.clone(),
                    to: to.to_owned(),
                    rel_type: rel,
                    dir,
                };
                self.push(chain, op, rows, rows_in * m.expand_into_row);
            } else {
                chain.tmp += 1;
                let tmp = format!("#chk{}", chain.tmp);
                let fan =
                    self.stats
                        .expand_factor(from_label.as_deref(), rel.as_deref(), None, dir);
                let mid = floor(rows_in, rows_in * fan);
                let op = PhysicalOp::ExpandAll {
                    from: from.to_owned(),
                    edge: edge.var.clone(),
                    to: tmp.clone(),
                    rel_type: rel,
                    dir,
                    to_label: None,
                };
                self.push(chain, op, mid, rows_in * m.expand_row);
                let pred = Predicate::SameNode {
                    left: tmp,
                    right: to.to_owned(),
                };
                self.push(
                    chain,
                    PhysicalOp::Filter {
                        predicates: vec![pred],
                    },
                    rows,
                    mid * m.filter_row,
                );
            }
        } else {
            let to_label = self.smallest_label(to);
            let f = self.stats.expand_factor(
                from_label.as_deref(),
                rel.as_deref(),
                to_label.as_deref(),
                dir,
            );
            let rows = floor(rows_in, rows_in * f);
            let op = PhysicalOp::ExpandAll {
                from: from.to_owned(),
                edge: edge.var.clone(),
                to: to.to_owned(),
                rel_type: rel,
                dir,
                to_label: to_label.clone(),
            };
            self.push(chain, op, rows, rows_in * m.expand_row);
            self.bind(chain, to, to_label.as_deref());
        }
        if let Some(e) = &edge.var {
            chain.bound.insert(e.clone());
        }
        self.place_ready(chain);
    }

    fn pattern_from(&self, mut chain: Chain, p: &Pattern, start: usize) -> Chain {
        let var = |i: usize| p.nodes[i].var.as_str();
        if !chain.bound.contains(var(start)) {
            self.scan(&mut chain, var(start));
        }
        for i in start..p.edges.len() {
            self.expand(&mut chain, var(i), &p.edges[i], var(i + 1), p.edges[i].dir);
        }
        for i in (1..=start).rev() {
            self.expand(
                &mut chain,
                var(i),
                &p.edges[i - 1],
                var(i - 1),
                p.edges[i - 1].dir.reversed(),
            );
        }
        chain
    }

    fn add_pattern(&self, chain: &Chain, p: &Pattern) -> Chain {
        if let Some(start) = p.nodes.iter().position(|n| chain.bound.contains(&n.var)) {
            return self.pattern_from(chain.clone(), p, start);
        }
        if !self.opts.reorder {
            return self.pattern_from(chain.clone(), p, 0);
        }
        let mut best = None;
        for start in 0..p.nodes.len() {
            pick(&mut best, self.pattern_from(chain.clone(), p, start));
        }
        best.expect("pattern has at least one node")
    }

    fn orders(&self, base: &Chain, patterns: &[Pattern]) -> Chain {
        let n = patterns.len();
        if !self.opts.reorder || n <= 1 {
            return patterns
                .iter()
                .fold(base.clone(), |c, p| self.add_pattern(&c, p));
        }
        if n > self.opts.exhaustive_limit {
            let mut chain = base.clone();
            let mut left: Vec<usize> = (0..n).collect();
            while !left.is_empty() {
                let mut best: Option<(Chain, usize)> = None;
                for (slot, &i) in left.iter().enumerate() {
                    let c = self.add_pattern(&chain, &patterns[i]);
                    if best.as_ref().is_none_or(|(b, _)| c.better_than(b)) {
                        best = Some((c, slot));
                    }
                }
                let (c, slot) = best.expect("non-empty");
                chain = c;
                left.remove(slot);
            }
            return chain;
        }
        let mut best = None;
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |order| {
            let c = order
                .iter()
                .fold(base.clone(), |c, &i| self.add_pattern(&c, &patterns[i]));
            pick(&mut best, c);
        });
        best.expect("at least one order")
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Plans a MATCH query.
pub fn plan(
    query: &Query,
    stats: &Statistics,
    opts: &PlannerOptions,
) -> Result<PlanNode, QueryError> {
    let mut labels: HashMap<String, Vec<String>> = HashMap::new();
    for p in &query.patterns {
        for n in &p.nodes {
            let entry = labels.entry(n.var.clone()).or_default();
            if let Some(l) = &n.label {
                if !entry.contains(l) {
                    entry.push(l.clone());
                }
            }
        }
    }
    let planner = Planner {
        stats,
        opts,
        labels,
    };
    let mut base = Chain {
        ops: Vec::new(),
        rows: 1.0,
        cost: 0.0,
        bound: HashSet::new(),
        guaranteed: HashMap::new(),
        pending: query
            .conditions
            .iter()
            .cloned()
            .map(Predicate::Compare)
            .collect(),
        seeks: 0,
        tmp: 0,
    };
    if let Some(k) = &query.knn {
        let metric: Metric = k.metric.parse()?;
        let rows = match &k.k {
            Operand::Literal(v) => v.as_f64().unwrap_or(10.0),
            Operand::Param(_) => 10.0,
        }
        .min(stats.scan(Some(&k.label)));
        let op = PhysicalOp::VectorSearch {
            var: k.node_var.clone(),
            score: k.score_var.clone(),
            label: k.label.clone(),
            key: k.key.clone(),
            query: k.query.clone(),
            k: k.k.clone(),
            metric,
        };
        planner.push(&mut base, op, rows, rows * opts.cost.scan_row);
        planner.bind(&mut base, &k.node_var, Some(&k.label));
        if let Some(s) = &k.score_var {
            base.bound.insert(s.clone());
        }
        planner.place_ready(&mut base);
    }
    let mut chain = planner.orders(&base, &query.patterns);
    let rest = std::mem::take(&mut chain.pending);
    if rest
        .iter()
        .any(|p| p.vars().iter().any(|v| !chain.bound.contains(*v)))
    {
        return Err(QueryError::Planning(
            "predicate references a variable no operator binds".into(),
        ));
    }
    planner.filter(&mut chain, rest);
    tail(&planner, &mut chain, query)?;
    PlanNode::from_ops(chain.ops).ok_or_else(|| QueryError::Planning("empty plan".into()))
}

fn tail(planner: &Planner, chain: &mut Chain, q: &Query) -> Result<(), QueryError> {
    let m = &planner.opts.cost;
    let sort_cost = |rows: f64| rows * rows.max(2.0).log2() * m.sort_row;
    if !q.is_aggregate() {
        if !q.order_by.is_empty() {
            let keys = q
                .order_by
                .iter()
                .map(|o| {
                    let expr = match &o.expr {
                        Expr::Var(v) => q
                            .returns
                            .iter()
                            .find(|r| r.alias.as_deref() == Some(v.as_str()))
                            .and_then(|r| match &r.expr {
                                ReturnExpr::Expr(e) => Some(e.clone()),
                                ReturnExpr::Agg(..) => None,
                            })
                            .unwrap_or_else(|| o.expr.clone()),
                        e => e.clone(),
                    };
                    (SortKey::Expr(expr), o.descending)
                })
                .collect();
            let rows_in = chain.rows;
            let rows = q.limit.map_or(rows_in, |l| rows_in.min(l as f64));
            planner.push(
                chain,
                PhysicalOp::Sort {
                    keys,
                    limit: q.limit,
                },
                rows,
                sort_cost(rows_in),
            );
        }
        if let Some(l) = q.limit {
            let rows = chain.rows.min(l as f64);
            planner.push(chain, PhysicalOp::Limit { count: l }, rows, 0.0);
        }
        let items = q
            .returns
            .iter()
            .map(|r| match &r.expr {
                ReturnExpr::Expr(e) => (r.name(), ProjectItem::Expr(e.clone())),
                ReturnExpr::Agg(..) => unreachable!("non-aggregate query"),
            })
            .collect();
        let rows = chain.rows;
        planner.push(
            chain,
            PhysicalOp::Project { items },
            rows,
            rows * m.project_row,
        );
        return Ok(());
    }
    let items: Vec<(String, ReturnExpr)> = q
        .returns
        .iter()
        .map(|r| (r.name(), r.expr.clone()))
        .collect();
    let grouped = items.iter().any(|(_, e)| !e.is_aggregate());
    let rows_in = chain.rows;
    let rows = if grouped {
        floor(rows_in, rows_in.sqrt())
    } else {
        1.0
    };
    planner.push(
        chain,
        PhysicalOp::Aggregate {
            items: items.clone(),
        },
        rows,
        rows_in * m.aggregate_row,
    );
    if !q.order_by.is_empty() {
        let mut keys = Vec::new();
        for o in &q.order_by {
            let text = o.expr.text();
            let col = items
                .iter()
                .find(|(name, e)| *name == text || e.text() == text)
                .map(|(name, _)| name.clone())
                .ok_or_else(|| {
                    QueryError::Semantic(format!(
                        "ORDER BY {text} must name a returned column in an aggregate query"
                    ))
                })?;
            keys.push((SortKey::Column(col), o.descending));
        }
        let rows_in = chain.rows;
        let rows = q.limit.map_or(rows_in, |l| rows_in.min(l as f64));
        planner.push(
            chain,
            PhysicalOp::Sort {
                keys,
                limit: q.limit,
            },
            rows,
            sort_cost(rows_in),
        );
    }
    if let Some(l) = q.limit {
        let rows = chain.rows.min(l as f64);
        planner.push(chain, PhysicalOp::Limit { count: l }, rows, 0.0);
    }
    let passthrough = items
        .iter()
        .map(|(n, _)| (n.clone(), ProjectItem::Column(n.clone())))
        .collect();
    let rows = chain.rows;
    planner.push(
        chain,
        PhysicalOp::Project { items: passthrough },
        rows,
        rows * m.project_row,
    );
    Ok(())
}
