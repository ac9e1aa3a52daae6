//! Audit record of the choices a construction made.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::{EdgeId, VertexId};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionTrace {
    /// Case labels in the order they were taken.
    pub cases: Vec<String>,
    pub edge_sets: BTreeMap<String, Vec<EdgeId>>,
    pub vertex_sets: BTreeMap<String, Vec<VertexId>>,
    pub notes: Vec<String>,
    /// Bound of the flow finally returned, once known.
    pub achieved_k: Option<i64>,
}

impl ConstructionTrace {
    pub fn new() -> ConstructionTrace {
        ConstructionTrace::default()
    }

    pub fn case(&mut self, label: impl Into<String>) {
        self.cases.push(label.into());
    }

    pub fn edges<'a>(
        &mut self,
        name: impl Into<String>,
        edges: impl IntoIterator<Item = &'a EdgeId>,
    ) {
        let set: BTreeSet<EdgeId> = edges.into_iter().copied().collect();
        self.edge_sets
            .insert(name.into(), set.into_iter().collect());
    }

    pub fn vertices<'a>(
        &mut self,
        name: impl Into<String>,
        vertices: impl IntoIterator<Item = &'a VertexId>,
    ) {
        self.vertex_sets
            .insert(name.into(), vertices.into_iter().copied().collect());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn has_case(&self, label: &str) -> bool {
        self.cases.iter().any(|c| c == label)
    }

    /// Appends `inner`, prefixing its set names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, inner: ConstructionTrace) {
        self.cases.extend(inner.cases);
        for (k, v) in inner.edge_sets {
            self.edge_sets.insert(format!("{prefix}/{k}"), v);
        }
        for (k, v) in inner.vertex_sets {
            self.vertex_sets.insert(format!("{prefix}/{k}"), v);
        }
        self.notes.extend(inner.notes);
    }
}
