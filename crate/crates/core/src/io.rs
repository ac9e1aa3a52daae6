//! JSON graph files and canonical fingerprints.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{EdgeId, GraphError, Sign, SignedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge {id} has sign {sign}; expected 1 or -1")]
    BadSign { id: EdgeId, sign: i64 },
    #[error("edge ids must be exactly 0..{0}")]
    BadIds(usize),
    #[error("graph has unused edge ids and cannot be written as a file")]
    IdGaps,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GraphFile {
    fn records(g: &SignedGraph) -> GraphFile {
        GraphFile {
            vertices: g.vertex_count(),
            edges: g
                .edges()
                .map(|(id, e)| EdgeRecord {
                    id,
                    u: e.u,
                    v: e.v,
                    sign: e.sign.value(),
                })
                .collect(),
        }
    }

    pub fn from_graph(g: &SignedGraph) -> Result<GraphFile, IoError> {
        if g.has_id_gaps() {
            return Err(IoError::IdGaps);
        }
        Ok(GraphFile::records(g))
    }

    pub fn to_graph(&self) -> Result<SignedGraph, IoError> {
        let m = self.edges.len();
        let mut slots = vec![None; m];
        for rec in &self.edges {
            if rec.id >= m || slots[rec.id].is_some() {
                return Err(IoError::BadIds(m));
            }
            let sign = Sign::from_i64(rec.sign).ok_or(IoError::BadSign {
                id: rec.id,
                sign: rec.sign,
            })?;
            slots[rec.id] = Some((rec.u, rec.v, sign));
        }
        let list: Vec<_> = slots
            .into_iter()
            .map(|s| s.expect("all ids present"))
            .collect();
        Ok(SignedGraph::build_graph(self.vertices, &list)?)
    }
}

pub fn graph_from_json(text: &str) -> Result<SignedGraph, IoError> {
    serde_json::from_str::<GraphFile>(text)?.to_graph()
}

pub fn graph_to_json(g: &SignedGraph) -> Result<String, IoError> {
    Ok(serde_json::to_string_pretty(&GraphFile::from_graph(g)?)? + "\n")
}

/// Hex SHA-256 of the compact canonical serialization.
pub fn graph_sha(g: &SignedGraph) -> String {
    let text = serde_json::to_string(&GraphFile::records(g)).expect("serializable");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub edges: Vec<EdgeId>,
}
