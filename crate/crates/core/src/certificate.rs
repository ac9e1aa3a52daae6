//! Serialized witnesses and their producer-independent validation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::classify_edges;
use crate::flow::{check_flow, FlowAssignment, FlowMode, Orientation, Violation};
use crate::graph::{EdgeId, SignedGraph, SwitchingSet, VertexId};
use crate::io::graph_sha;
use crate::oracle::exists_nzf;

/// Flat flow file: `{"graph_sha", "mode": "int"|"mod", "k", "tau": {id: [tu, tv]}, "f": {id: value}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowCertificate {
    pub graph_sha: String,
    pub mode: String,
    pub k: i64,
    #[serde(deserialize_with = "edge_keyed")]
    pub tau: BTreeMap<EdgeId, [i8; 2]>,
    #[serde(deserialize_with = "edge_keyed")]
    pub f: BTreeMap<EdgeId, i64>,
}

/// Edge-keyed maps read through string keys, which also works inside tagged payloads.
fn edge_keyed<'de, D, T>(d: D) -> Result<BTreeMap<EdgeId, T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    BTreeMap::<String, T>::deserialize(d)?
        .into_iter()
        .map(|(k, v)| {
            k.parse::<EdgeId>()
                .map(|e| (e, v))
                .map_err(serde::de::Error::custom)
        })
        .collect()
}

impl FlowCertificate {
    pub fn from_flow(g: &SignedGraph, fa: &FlowAssignment) -> FlowCertificate {
        let (mode, k) = match fa.mode {
            FlowMode::Integer(k) => ("int", k),
            FlowMode::Modular(k) => ("mod", k),
        };
        FlowCertificate {
            graph_sha: graph_sha(g),
            mode: mode.to_string(),
            k,
            tau: g.edges().map(|(e, _)| (e, fa.orientation.at(e))).collect(),
            f: g.edges().map(|(e, _)| (e, fa.values[e])).collect(),
        }
    }

    pub fn to_flow(&self, g: &SignedGraph) -> Result<FlowAssignment, CertError> {
        let mode = match self.mode.as_str() {
            "int" => FlowMode::Integer(self.k),
            "mod" => FlowMode::Modular(self.k),
            other => return Err(CertError::BadMode(other.to_string())),
        };
        let mut tau = vec![[0i8; 2]; g.edge_id_bound()];
        let mut values = vec![0i64; g.edge_id_bound()];
        for (e, _) in g.edges() {
            tau[e] = *self.tau.get(&e).ok_or(CertError::MissingEdge(e))?;
            values[e] = *self.f.get(&e).ok_or(CertError::MissingEdge(e))?;
        }
        if let Some(&e) = self
            .tau
            .keys()
            .chain(self.f.keys())
            .find(|&&e| g.edge(e).is_none())
        {
            return Err(CertError::UnknownEdge(e));
        }
        Ok(FlowAssignment {
            orientation: Orientation::from_pairs(tau),
            values,
            mode,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Payload {
    Flow(FlowCertificate),
    Switching {
        vertices: Vec<VertexId>,
    },
    HamiltonianCircuit {
        edges: Vec<EdgeId>,
    },
    EulerianDecomposition {
        parts: Vec<Vec<EdgeId>>,
        flow: FlowCertificate,
    },
    Exhaustion {
        k: i64,
        mode: String,
        nodes: u64,
        max_depth: usize,
    },
    SignedCircuitCover {
        circuits: Vec<Vec<EdgeId>>,
    },
    InadmissibilityEdge {
        edge: EdgeId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub producer: String,
    pub graph_sha: String,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("certificate fingerprint {found} does not match graph {expected}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("unknown flow mode {0:?}")]
    BadMode(String),
    #[error("certificate has no entry for edge {0}")]
    MissingEdge(EdgeId),
    #[error("certificate names unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("flow rejected: {0}")]
    Flow(#[from] Violation),
    #[error("invalid witness: {0}")]
    Invalid(String),
}

impl Certificate {
    pub fn new(g: &SignedGraph, producer: &str, payload: Payload) -> Certificate {
        Certificate {
            producer: producer.to_string(),
            graph_sha: graph_sha(g),
            payload,
        }
    }

    pub fn flow(g: &SignedGraph, fa: &FlowAssignment, producer: &str) -> Certificate {
        Certificate::new(
            g,
            producer,
            Payload::Flow(FlowCertificate::from_flow(g, fa)),
        )
    }

    pub fn kind(&self) -> &'static str {
        match self.payload {
            Payload::Flow(_) => "flow",
            Payload::Switching { .. } => "switching",
            Payload::HamiltonianCircuit { .. } => "hamiltonian-circuit",
            Payload::EulerianDecomposition { .. } => "eulerian-decomposition",
            Payload::Exhaustion { .. } => "exhaustion",
            Payload::SignedCircuitCover { .. } => "signed-circuit-cover",
            Payload::InadmissibilityEdge { .. } => "inadmissibility-edge",
        }
    }
}

fn fingerprint_ok(g: &SignedGraph, sha: &str) -> Result<(), CertError> {
    let expected = graph_sha(g);
    if expected != sha {
        return Err(CertError::FingerprintMismatch {
            expected,
            found: sha.to_string(),
        });
    }
    Ok(())
}

fn edge_set(g: &SignedGraph, ids: &[EdgeId]) -> Result<BTreeSet<EdgeId>, CertError> {
    let mut set = BTreeSet::new();
    for &e in ids {
        if g.edge(e).is_none() {
            return Err(CertError::UnknownEdge(e));
        }
        if !set.insert(e) {
            return Err(CertError::Invalid(format!("edge {e} listed twice")));
        }
    }
    Ok(set)
}

/// A flow file checked on its own: fingerprint plus nowhere-zero flow conditions.
pub fn validate_flow_file(
    cert: &FlowCertificate,
    g: &SignedGraph,
) -> Result<FlowAssignment, CertError> {
    fingerprint_ok(g, &cert.graph_sha)?;
    let fa = cert.to_flow(g)?;
    check_flow(g, &fa, true)?;
    Ok(fa)
}

pub fn validate(cert: &Certificate, g: &SignedGraph) -> Result<(), CertError> {
    fingerprint_ok(g, &cert.graph_sha)?;
    match &cert.payload {
        Payload::Flow(fc) => validate_flow_file(fc, g).map(|_| ()),
        Payload::Switching { vertices } => {
            let u = SwitchingSet(vertices.iter().copied().collect());
            let switched = g
                .switch_at(&u)
                .map_err(|e| CertError::Invalid(e.to_string()))?;
            match switched.negative_edges().first() {
                None => Ok(()),
                Some(e) => Err(CertError::Invalid(format!("edge {e} stays negative"))),
            }
        }
        Payload::HamiltonianCircuit { edges } => {
            let set = edge_set(g, edges)?;
            if is_hamiltonian_circuit(g, &set) {
                Ok(())
            } else {
                Err(CertError::Invalid("not a Hamiltonian circuit".into()))
            }
        }
        Payload::EulerianDecomposition { parts, flow } => {
            let mut seen = BTreeSet::new();
            for part in parts {
                let set = edge_set(g, part)?;
                if !g.is_even_set(&set) || !g.is_connected_set(&set) {
                    return Err(CertError::Invalid("a part is not Eulerian".into()));
                }
                for e in set {
                    if !seen.insert(e) {
                        return Err(CertError::Invalid(format!("edge {e} in two parts")));
                    }
                }
            }
            if seen.len() != g.edge_count() {
                return Err(CertError::Invalid("parts do not cover every edge".into()));
            }
            validate_flow_file(flow, g).map(|_| ())
        }
        Payload::Exhaustion { k, mode, .. } => {
            let mode = match mode.as_str() {
                "int" => FlowMode::Integer(*k),
                "mod" => FlowMode::Modular(*k),
                other => return Err(CertError::BadMode(other.to_string())),
            };
            let report = exists_nzf(g, *k, mode, None);
            if report.exists {
                Err(CertError::Invalid(format!(
                    "a nowhere-zero {k}-flow exists"
                )))
            } else {
                Ok(())
            }
        }
        Payload::SignedCircuitCover { circuits } => {
            let mut covered = BTreeSet::new();
            for c in circuits {
                let set = edge_set(g, c)?;
                classify_edges(g, &set).map_err(|r| CertError::Invalid(r.to_string()))?;
                covered.extend(set);
            }
            if covered.len() != g.edge_count() {
                return Err(CertError::Invalid("cover misses an edge".into()));
            }
            Ok(())
        }
        Payload::InadmissibilityEdge { edge } => {
            if g.edge(*edge).is_none() {
                return Err(CertError::UnknownEdge(*edge));
            }
            if witnesses_inadmissibility(g, *edge) {
                Ok(())
            } else {
                Err(CertError::Invalid(format!(
                    "edge {edge} does not witness inadmissibility"
                )))
            }
        }
    }
}

fn witnesses_inadmissibility(g: &SignedGraph, e: EdgeId) -> bool {
    let base = g.potentials(|_| true);
    let p = g.potentials(|x| x != e);
    let edge = g.e(e);
    let (cu, cv) = (p.comp[edge.u], p.comp[edge.v]);
    if base.conflict[base.comp[edge.u]].is_none() {
        cu != cv
    } else {
        p.conflict[cu].is_none() || p.conflict[cv].is_none()
    }
}

/// Spanning, connected, and 2-regular on every vertex.
pub fn is_hamiltonian_circuit(g: &SignedGraph, set: &BTreeSet<EdgeId>) -> bool {
    g.vertex_count() >= 2
        && set.len() == g.vertex_count()
        && (0..g.vertex_count()).all(|v| g.degree_in(set, v) == 2)
        && g.is_connected_set(set)
}
