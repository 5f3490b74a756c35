//! Normalized parse tree.

use std::fmt::Write as _;

use crate::store::PropertyValue;

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Query(Query),
    Create(Vec<Pattern>),
    CreateIndex {
        label: String,
        keys: Vec<String>,
        unique: bool,
    },
    DropIndex(IndexTarget),
    ShowIndexes,
    ShowConstraints,
    Solve {
        config: Literal,
        yields: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum IndexTarget {
    Name(String),
    On { label: String, keys: Vec<String> },
}

/// A MATCH ... RETURN query, optionally fed by a vector search.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Query {
    pub knn: Option<KnnSource>,
    pub patterns: Vec<Pattern>,
    pub conditions: Vec<Condition>,
    pub returns: Vec<ReturnItem>,
    pub order_by: Vec<OrderItem>,
    pub limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnSource {
    pub label: String,
    pub key: String,
    pub query: Operand,
    pub k: Operand,
    pub metric: String,
    pub node_var: String,
    pub score_var: Option<String>,
}

/// `nodes[i]` and `nodes[i + 1]` are joined by `edges[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub nodes: Vec<NodePattern>,
    pub edges: Vec<EdgePattern>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodePattern {
    pub var: String,
    pub label: Option<String>,
    /// Inline map; emptied by normalization for MATCH patterns.
    pub props: Vec<(String, Operand)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeDir {
    /// `-[]->`
    Out,
    /// `<-[]-`
    In,
    /// `-[]-`
    Both,
}

impl EdgeDir {
    pub fn reversed(self) -> EdgeDir {
        match self {
            EdgeDir::Out => EdgeDir::In,
            EdgeDir::In => EdgeDir::Out,
            EdgeDir::Both => EdgeDir::Both,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgePattern {
    pub var: Option<String>,
    pub rel_type: Option<String>,
    pub dir: EdgeDir,
    pub props: Vec<(String, Operand)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Eq => ord == Equal,
            CmpOp::Ne => ord != Equal,
            CmpOp::Lt => ord == Less,
            CmpOp::Le => ord != Greater,
            CmpOp::Gt => ord == Greater,
            CmpOp::Ge => ord != Less,
        }
    }

    pub fn is_range(self) -> bool {
        matches!(self, CmpOp::Lt | CmpOp::Le | CmpOp::Gt | CmpOp::Ge)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Literal(PropertyValue),
    Param(String),
}

/// `var.key op rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub var: String,
    pub key: String,
    pub op: CmpOp,
    pub rhs: Operand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggFn {
    Count,
    Sum,
    Avg,
    Min,
    Max,
}

impl AggFn {
    pub fn name(self) -> &'static str {
        match self {
            AggFn::Count => "count",
            AggFn::Sum => "sum",
            AggFn::Avg => "avg",
            AggFn::Min => "min",
            AggFn::Max => "max",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Prop(String, String),
}

impl Expr {
    pub fn var(&self) -> &str {
        match self {
            Expr::Var(v) | Expr::Prop(v, _) => v,
        }
    }

    pub fn text(&self) -> String {
        match self {
            Expr::Var(v) => v.clone(),
            Expr::Prop(v, k) => format!("{v}.{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ReturnExpr {
    Expr(Expr),
    /// `None` argument means `*`.
    Agg(AggFn, Option<Expr>),
}

impl ReturnExpr {
    pub fn text(&self) -> String {
        match self {
            ReturnExpr::Expr(e) => e.text(),
            ReturnExpr::Agg(f, None) => format!("{}(*)", f.name()),
            ReturnExpr::Agg(f, Some(e)) => format!("{}({})", f.name(), e.text()),
        }
    }

    pub fn is_aggregate(&self) -> bool {
        matches!(self, ReturnExpr::Agg(..))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnItem {
    pub expr: ReturnExpr,
    pub alias: Option<String>,
}

impl ReturnItem {
    /// Output column name.
    pub fn name(&self) -> String {
        self.alias.clone().unwrap_or_else(|| self.expr.text())
    }
}

/// Sort key: an expression or the name of a RETURN column.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderItem {
    pub expr: Expr,
    pub descending: bool,
}

/// Procedure argument literal.
#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Scalar(PropertyValue),
    List(Vec<Literal>),
    Map(Vec<(String, Literal)>),
    Param(String),
}

impl Literal {
    pub fn to_json(
        &self,
        params: &crate::query::Params,
    ) -> Result<serde_json::Value, crate::query::QueryError> {
        use serde_json::Value as J;
        Ok(match self {
            Literal::Scalar(p) => serde_json::to_value(p).unwrap_or(J::Null),
            Literal::List(items) => J::Array(
                items
                    .iter()
                    .map(|l| l.to_json(params))
                    .collect::<Result<_, _>>()?,
            ),
            Literal::Map(entries) => {
                let mut m = serde_json::Map::new();
                for (k, v) in entries {
                    m.insert(k.clone(), v.to_json(params)?);
                }
                J::Object(m)
            }
            Literal::Param(name) => serde_json::to_value(
                params
                    .get(name)
                    .ok_or_else(|| crate::query::QueryError::MissingParameter(name.clone()))?,
            )
            .unwrap_or(J::Null),
        })
    }
}

impl Query {
    pub fn is_aggregate(&self) -> bool {
        self.returns.iter().any(|r| r.expr.is_aggregate())
    }

    /// Replaces every condition literal by a generated parameter and returns
    /// the extracted values. Two queries that differ only in those literals
    /// abstract to the same tree.
    pub fn abstract_literals(&self) -> (Query, Vec<(String, PropertyValue)>) {
        let mut q = self.clone();
        let mut extracted = Vec::new();
        for (i, c) in q.conditions.iter_mut().enumerate() {
            if let Operand::Literal(v) = &c.rhs {
                let name = format!("#lit{i}");
                extracted.push((name.clone(), v.clone()));
                c.rhs = Operand::Param(name);
            }
        }
        if let Some(knn) = &mut q.knn {
            for (slot, op) in [("#knnq", &mut knn.query), ("#knnk", &mut knn.k)] {
                if let Operand::Literal(v) = op {
                    extracted.push((slot.to_owned(), v.clone()));
                    *op = Operand::Param(slot.to_owned());
                }
            }
        }
        (q, extracted)
    }

    /// Stable textual key of the tree, used for plan caching.
    pub fn cache_key(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{self:?}");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cond(v: i64) -> Condition {
        Condition {
            var: "n".into(),
            key: "id".into(),
            op: CmpOp::Eq,
            rhs: Operand::Literal(PropertyValue::Int(v)),
        }
    }

    #[test]
    fn abstraction_ignores_literal_values() {
        let a = Query {
            conditions: vec![cond(1)],
            ..Default::default()
        };
        let b = Query {
            conditions: vec![cond(2)],
            ..Default::default()
        };
        assert_ne!(a.cache_key(), b.cache_key());
        let (qa, la) = a.abstract_literals();
        let (qb, lb) = b.abstract_literals();
        assert_eq!(qa.cache_key(), qb.cache_key());
        assert_eq!(la[0].1, PropertyValue::Int(1));
        assert_eq!(lb[0].1, PropertyValue::Int(2));
    }

    #[test]
    fn cmp_ops() {
        use std::cmp::Ordering::*;
        assert!(CmpOp::Le.holds(Equal) && CmpOp::Le.holds(Less) && !CmpOp::Le.holds(Greater));
        assert!(CmpOp::Ne.holds(Less) && !CmpOp::Ne.holds(Equal));
    }
}
