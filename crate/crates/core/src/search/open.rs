use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::label::LabelId;
use crate::vector::CostVector;

#[derive(Debug)]
struct Entry {
    f: CostVector,
    label: LabelId,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .as_slice()
            .cmp(self.f.as_slice())
            .then_with(|| other.label.cmp(&self.label))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Priority queue of labels: lexicographically smallest f first, ties in
/// insertion order. Label ids double as insertion ordinals, so callers must
/// push labels in the order they were created.
#[derive(Debug, Default)]
pub struct OpenList {
    heap: BinaryHeap<Entry>,
}

impl OpenList {
    pub fn new() -> Self {
        OpenList::default()
    }

    pub fn push(&mut self, label: LabelId, f: CostVector) {
        self.heap.push(Entry { f, label });
    }

    pub fn pop(&mut self) -> Option<LabelId> {
        self.heap.pop().map(|e| e.label)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
