//! Identifiers and property payloads.

use std::cmp::Ordering;
use std::fmt;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

/// Dense node identifier; doubles as the arena position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

/// Dense edge identifier; doubles as the arena position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

macro_rules! interned_id {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

interned_id!(LabelId);
interned_id!(RelTypeId);
interned_id!(KeyId);

/// A property payload stored on nodes and edges.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    #[default]
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    String(String),
    Vector(Vec<f32>),
}

/// The type tag shared by every value in one column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueTag {
    Bool,
    Int,
    Float,
    String,
    Vector(usize),
}

impl fmt::Display for ValueTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueTag::Bool => f.write_str("bool"),
            ValueTag::Int => f.write_str("int"),
            ValueTag::Float => f.write_str("float"),
            ValueTag::String => f.write_str("string"),
            ValueTag::Vector(d) => write!(f, "vector[{d}]"),
        }
    }
}

impl PropertyValue {
    pub fn tag(&self) -> Option<ValueTag> {
        match self {
            PropertyValue::Null => None,
            PropertyValue::Bool(_) => Some(ValueTag::Bool),
            PropertyValue::Int(_) => Some(ValueTag::Int),
            PropertyValue::Float(_) => Some(ValueTag::Float),
            PropertyValue::String(_) => Some(ValueTag::String),
            PropertyValue::Vector(v) => Some(ValueTag::Vector(v.len())),
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, PropertyValue::Null)
    }

    /// Numeric view used for weights and linear objectives.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            PropertyValue::Int(i) => Some(*i as f64),
            PropertyValue::Float(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            PropertyValue::String(s) => Some(s),
            _ => None,
        }
    }
}

impl From<i64> for PropertyValue {
    fn from(v: i64) -> Self {
        PropertyValue::Int(v)
    }
}

impl From<f64> for PropertyValue {
    fn from(v: f64) -> Self {
        PropertyValue::Float(v)
    }
}

impl From<bool> for PropertyValue {
    fn from(v: bool) -> Self {
        PropertyValue::Bool(v)
    }
}

impl From<&str> for PropertyValue {
    fn from(v: &str) -> Self {
        PropertyValue::String(v.to_owned())
    }
}

impl From<String> for PropertyValue {
    fn from(v: String) -> Self {
        PropertyValue::String(v)
    }
}

impl From<Vec<f32>> for PropertyValue {
    fn from(v: Vec<f32>) -> Self {
        PropertyValue::Vector(v)
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Null => f.write_str("null"),
            PropertyValue::Bool(b) => write!(f, "{b}"),
            PropertyValue::Int(i) => write!(f, "{i}"),
            PropertyValue::Float(x) => write!(f, "{x}"),
            PropertyValue::String(s) => write!(f, "{s:?}"),
            PropertyValue::Vector(v) => write!(f, "{v:?}"),
        }
    }
}

/// Totally ordered, hashable key form of a non-null property value.
///
/// Integral floats normalize to `Int` so that `3` and `3.0` address the same
/// index entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKey {
    Bool(bool),
    Int(i64),
    Float(OrderedFloat<f64>),
    Str(String),
    Vector(Vec<u32>),
}

impl IndexKey {
    pub fn from_value(value: &PropertyValue) -> Option<IndexKey> {
        Some(match value {
            PropertyValue::Null => return None,
            PropertyValue::Bool(b) => IndexKey::Bool(*b),
            PropertyValue::Int(i) => IndexKey::Int(*i),
            PropertyValue::Float(x) => {
                if x.fract() == 0.0 && x.abs() < 9.0e15 {
                    IndexKey::Int(*x as i64)
                } else {
                    IndexKey::Float(OrderedFloat(*x))
                }
            }
            PropertyValue::String(s) => IndexKey::Str(s.clone()),
            PropertyValue::Vector(v) => IndexKey::Vector(v.iter().map(|x| x.to_bits()).collect()),
        })
    }
}

/// Comparison under the engine's null semantics: `None` when either side is
/// null or the types are not comparable.
pub fn compare_values(a: &PropertyValue, b: &PropertyValue) -> Option<Ordering> {
    use PropertyValue::*;
    match (a, b) {
        (Null, _) | (_, Null) => None,
        (Int(x), Int(y)) => Some(x.cmp(y)),
        (Int(x), Float(y)) => (*x as f64).partial_cmp(y),
        (Float(x), Int(y)) => x.partial_cmp(&(*y as f64)),
        (Float(x), Float(y)) => x.partial_cmp(y),
        (String(x), String(y)) => Some(x.cmp(y)),
        (Bool(x), Bool(y)) => Some(x.cmp(y)),
        (Vector(x), Vector(y)) if x == y => Some(Ordering::Equal),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_never_compares() {
        assert_eq!(
            compare_values(&PropertyValue::Null, &PropertyValue::Null),
            None
        );
        assert_eq!(
            compare_values(&PropertyValue::Int(1), &PropertyValue::Null),
            None
        );
    }

    #[test]
    fn mixed_numeric_comparison() {
        assert_eq!(
            compare_values(&PropertyValue::Int(2), &PropertyValue::Float(2.5)),
            Some(Ordering::Less)
        );
        assert_eq!(
            IndexKey::from_value(&PropertyValue::Float(3.0)),
            IndexKey::from_value(&PropertyValue::Int(3))
        );
    }

    #[test]
    fn untagged_json_round_trip() {
        let vals = vec![
            PropertyValue::Null,
            PropertyValue::Bool(true),
            PropertyValue::Int(-4),
            PropertyValue::Float(1.5),
            PropertyValue::String("x".into()),
        ];
        let text = serde_json::to_string(&vals).unwrap();
        let back: Vec<PropertyValue> = serde_json::from_str(&text).unwrap();
        assert_eq!(vals, back);
    }
}
