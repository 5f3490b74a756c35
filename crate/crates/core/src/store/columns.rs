//! Columnar property storage, one dense column per (label, key).
//!
//! A node's position inside a label is assigned when it first receives that
//! label; positions are never reused, so tombstoned nodes keep their slot.

use std::collections::HashMap;

use super::value::{KeyId, LabelId, NodeId, PropertyValue, ValueTag};

#[derive(Debug, Clone, Default)]
pub struct Column {
    tag: Option<ValueTag>,
    values: Vec<PropertyValue>,
    present: Vec<u64>,
}

impl Column {
    fn with_len(len: usize) -> Self {
        Column {
            tag: None,
            values: vec![PropertyValue::Null; len],
            present: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub fn get(&self, pos: u32) -> &PropertyValue {
        &self.values[pos as usize]
    }

    #[inline]
    pub fn is_present(&self, pos: u32) -> bool {
        let p = pos as usize;
        self.present[p / 64] & (1u64 << (p % 64)) != 0
    }

    pub fn tag(&self) -> Option<ValueTag> {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn push_null(&mut self) {
        self.values.push(PropertyValue::Null);
        if self.present.len() * 64 < self.values.len() {
            self.present.push(0);
        }
    }

    fn set(&mut self, pos: u32, value: PropertyValue) {
        let p = pos as usize;
        let bit = 1u64 << (p % 64);
        if value.is_null() {
            self.present[p / 64] &= !bit;
        } else {
            if self.tag.is_none() {
                self.tag = value.tag();
            }
            self.present[p / 64] |= bit;
        }
        self.values[p] = value;
    }
}

#[derive(Debug, Clone, Default)]
pub struct LabelColumns {
    members: Vec<NodeId>,
    columns: HashMap<KeyId, Column>,
}

impl LabelColumns {
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn column(&self, key: KeyId) -> Option<&Column> {
        self.columns.get(&key)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ColumnStore {
    labels: Vec<LabelColumns>,
}

impl ColumnStore {
    pub(crate) fn ensure_label(&mut self, label: LabelId) {
        if self.labels.len() <= label.index() {
            self.labels
                .resize_with(label.index() + 1, LabelColumns::default);
        }
    }

    /// Appends a slot for `node` under `label` and returns its position.
    pub(crate) fn add_member(&mut self, label: LabelId, node: NodeId) -> u32 {
        self.ensure_label(label);
        let lc = &mut self.labels[label.index()];
        let pos = lc.members.len() as u32;
        lc.members.push(node);
        for col in lc.columns.values_mut() {
            col.push_null();
        }
        pos
    }

    pub fn label(&self, label: LabelId) -> Option<&LabelColumns> {
        self.labels.get(label.index())
    }

    pub fn column(&self, label: LabelId, key: KeyId) -> Option<&Column> {
        self.labels.get(label.index())?.columns.get(&key)
    }

    /// Tag currently fixed for (label, key), if any value was ever stored.
    pub fn tag(&self, label: LabelId, key: KeyId) -> Option<ValueTag> {
        self.column(label, key).and_then(Column::tag)
    }

    pub(crate) fn set(&mut self, label: LabelId, key: KeyId, pos: u32, value: PropertyValue) {
        self.ensure_label(label);
        let lc = &mut self.labels[label.index()];
        let len = lc.members.len();
        let col = lc
            .columns
            .entry(key)
            .or_insert_with(|| Column::with_len(len));
        col.set(pos, value);
    }

    pub fn get(&self, label: LabelId, key: KeyId, pos: u32) -> &PropertyValue {
        const NULL: PropertyValue = PropertyValue::Null;
        match self.column(label, key) {
            Some(col) => col.get(pos),
            None => &NULL,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn late_column_backfills_nulls() {
        let mut cs = ColumnStore::default();
        let l = LabelId(0);
        for i in 0..70 {
            cs.add_member(l, NodeId(i));
        }
        cs.set(l, KeyId(3), 65, PropertyValue::Int(9));
        let col = cs.column(l, KeyId(3)).unwrap();
        assert_eq!(col.len(), 70);
        assert!(col.is_present(65));
        assert!(!col.is_present(64));
        assert_eq!(cs.get(l, KeyId(3), 65), &PropertyValue::Int(9));
        assert_eq!(cs.get(l, KeyId(3), 0), &PropertyValue::Null);
        cs.add_member(l, NodeId(70));
        assert_eq!(cs.column(l, KeyId(3)).unwrap().len(), 71);
        assert_eq!(cs.get(l, KeyId(4), 1), &PropertyValue::Null);
    }
}
