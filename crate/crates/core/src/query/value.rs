use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::store::{EdgeId, NodeId, PropertyValue};

/// A node with its labels and properties copied out of the store.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeValue {
    pub id: NodeId,
    pub labels: Vec<String>,
    pub properties: HashMap<String, PropertyValue>,
}

/// Runtime value flowing through operators.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Value {
    #[default]
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    String(String),
    Vector(Vec<f32>),
    /// Reference only; properties are fetched on demand.
    NodeRef(NodeId),
    EdgeRef(EdgeId),
    /// Fully materialized node.
    Node(Box<NodeValue>),
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl From<PropertyValue> for Value {
    fn from(p: PropertyValue) -> Self {
        match p {
            PropertyValue::Null => Value::Null,
            PropertyValue::Bool(b) => Value::Bool(b),
            PropertyValue::Int(i) => Value::Int(i),
            PropertyValue::Float(f) => Value::Float(f),
            PropertyValue::String(s) => Value::String(s),
            PropertyValue::Vector(v) => Value::Vector(v),
        }
    }
}

impl From<&PropertyValue> for Value {
    fn from(p: &PropertyValue) -> Self {
        p.clone().into()
    }
}

impl Value {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::String(s) => Some(s),
            _ => None,
        }
    }

    /// Node id behind a reference or a materialized node.
    pub fn node_id(&self) -> Option<NodeId> {
        match self {
            Value::NodeRef(id) => Some(*id),
            Value::Node(n) => Some(n.id),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Bool(_) => 0,
            Value::Int(_) | Value::Float(_) => 1,
            Value::String(_) => 2,
            Value::Vector(_) => 3,
            Value::NodeRef(_) | Value::Node(_) => 4,
            Value::EdgeRef(_) => 5,
            Value::List(_) => 6,
            Value::Map(_) => 7,
            Value::Null => 8,
        }
    }

    /// Total order used by ORDER BY and result normalization: values of
    /// different kinds order by kind, numbers compare numerically, nulls last.
    pub fn total_cmp(&self, other: &Value) -> Ordering {
        use Value::*;
        match (self, other) {
            (Bool(a), Bool(b)) => a.cmp(b),
            (Int(a), Int(b)) => a.cmp(b),
            (Int(_) | Float(_), Int(_) | Float(_)) => {
                let (a, b) = (self.as_f64().unwrap(), other.as_f64().unwrap());
                a.total_cmp(&b).then_with(|| self.rank_int_first(other))
            }
            (String(a), String(b)) => a.cmp(b),
            (Vector(a), Vector(b)) => {
                for (x, y) in a.iter().zip(b) {
                    let o = x.total_cmp(y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                a.len().cmp(&b.len())
            }
            (NodeRef(_) | Node(_), NodeRef(_) | Node(_)) => self.node_id().cmp(&other.node_id()),
            (EdgeRef(a), EdgeRef(b)) => a.cmp(b),
            (List(a), List(b)) => {
                for (x, y) in a.iter().zip(b) {
                    let o = x.total_cmp(y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                a.len().cmp(&b.len())
            }
            (Map(a), Map(b)) => {
                for ((ka, va), (kb, vb)) in a.iter().zip(b) {
                    let o = ka.cmp(kb).then_with(|| va.total_cmp(vb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                a.len().cmp(&b.len())
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn rank_int_first(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Int(_), Value::Float(_)) => Ordering::Less,
            (Value::Float(_), Value::Int(_)) => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Null => s.serialize_none(),
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Int(i) => s.serialize_i64(*i),
            Value::Float(f) if f.is_finite() => s.serialize_f64(*f),
            Value::Float(f) => s.serialize_str(&f.to_string()),
            Value::String(v) => s.serialize_str(v),
            Value::Vector(v) => {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for x in v {
                    seq.serialize_element(x)?;
                }
                seq.end()
            }
            Value::NodeRef(id) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("id", &id.0)?;
                m.end()
            }
            Value::EdgeRef(id) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("edge", &id.0)?;
                m.end()
            }
            Value::Node(n) => {
                let mut props: Vec<(&String, &PropertyValue)> = n.properties.iter().collect();
                props.sort_by(|a, b| a.0.cmp(b.0));
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("id", &n.id.0)?;
                m.serialize_entry("labels", &n.labels)?;
                m.serialize_entry("properties", &OrderedProps(&props))?;
                m.end()
            }
            Value::List(items) => {
                let mut seq = s.serialize_seq(Some(items.len()))?;
                for x in items {
                    seq.serialize_element(x)?;
                }
                seq.end()
            }
            Value::Map(entries) => {
                let mut m = s.serialize_map(Some(entries.len()))?;
                for (k, v) in entries {
                    m.serialize_entry(k, v)?;
                }
                m.end()
            }
        }
    }
}

struct OrderedProps<'a>(&'a [(&'a String, &'a PropertyValue)]);

impl Serialize for OrderedProps<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("null"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x}"),
            Value::String(s) => f.write_str(s),
            Value::NodeRef(id) => write!(f, "{id}"),
            Value::EdgeRef(id) => write!(f, "{id}"),
            other => f.write_str(&other.to_json().to_string()),
        }
    }
}

/// Hashable identity of a value, used for grouping.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum GroupKey {
    Null,
    Bool(bool),
    Int(i64),
    Float(u64),
    Str(String),
    Vector(Vec<u32>),
    Node(NodeId),
    Edge(EdgeId),
    Other(String),
}

impl GroupKey {
    pub fn of(v: &Value) -> GroupKey {
        match v {
            Value::Null => GroupKey::Null,
            Value::Bool(b) => GroupKey::Bool(*b),
            Value::Int(i) => GroupKey::Int(*i),
            // integral floats group with the equal integer
            Value::Float(f) if f.fract() == 0.0 && f.abs() < 9.0e15 => GroupKey::Int(*f as i64),
            Value::Float(f) => GroupKey::Float(f.to_bits()),
            Value::String(s) => GroupKey::Str(s.clone()),
            Value::Vector(x) => GroupKey::Vector(x.iter().map(|f| f.to_bits()).collect()),
            Value::NodeRef(id) => GroupKey::Node(*id),
            Value::Node(n) => GroupKey::Node(n.id),
            Value::EdgeRef(e) => GroupKey::Edge(*e),
            other => GroupKey::Other(other.to_json().to_string()),
        }
    }
}
