use crate::error::{Error, Result};
use crate::graph::PathResult;
use crate::vector::CostVector;

pub type LabelId = usize;

/// A partial path from the start: vertex, accumulated cost `g`, priority
/// `f = g + h(vertex)` and the label it was extended from.
#[derive(Clone, Debug)]
pub struct Label {
    pub id: LabelId,
    pub vertex: usize,
    pub g: CostVector,
    pub f: CostVector,
    pub parent: Option<LabelId>,
}

/// Append-only label storage; ids are insertion ordinals.
#[derive(Clone, Debug, Default)]
pub struct LabelPool {
    labels: Vec<Label>,
}

impl LabelPool {
    pub fn new() -> Self {
        LabelPool::default()
    }

    pub fn push(
        &mut self,
        vertex: usize,
        g: CostVector,
        f: CostVector,
        parent: Option<LabelId>,
    ) -> LabelId {
        let id = self.labels.len();
        self.labels.push(Label {
            id,
            vertex,
            g,
            f,
            parent,
        });
        id
    }

    pub fn get(&self, id: LabelId) -> &Label {
        &self.labels[id]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Follows parent links back to the root label.
    pub fn reconstruct_path(&self, id: LabelId) -> Result<PathResult> {
        let leaf = self.labels.get(id).ok_or(Error::CorruptLabels(id))?;
        let mut vertices = vec![leaf.vertex];
        let mut cur = leaf;
        while let Some(parent) = cur.parent {
            // parents are always created before their children
            if parent >= cur.id || vertices.len() > self.labels.len() {
                return Err(Error::CorruptLabels(cur.id));
            }
            cur = &self.labels[parent];
            vertices.push(cur.vertex);
        }
        vertices.reverse();
        Ok(PathResult {
            vertices,
            cost: leaf.g.clone(),
        })
    }
}
