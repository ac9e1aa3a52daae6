//! Flow-admissibility and signed circuits.

use std::collections::BTreeSet;
use std::fmt;

use crate::certificate::{Certificate, Payload};
use crate::graph::{EdgeId, Sign, SignedGraph, SubgraphRef, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitTag {
    BalancedCircuit,
    ShortBarbell,
    LongBarbell,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCircuitKind {
    pub tag: CircuitTag,
    pub circuits: Vec<SubgraphRef>,
    pub path: Option<SubgraphRef>,
}

impl SignedCircuitKind {
    pub fn edges(&self) -> BTreeSet<EdgeId> {
        let mut out: BTreeSet<EdgeId> = self
            .circuits
            .iter()
            .flat_map(|c| c.edges().iter().copied())
            .collect();
        if let Some(p) = &self.path {
            out.extend(p.edges().iter().copied());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    Empty,
    UnknownEdge(EdgeId),
    Disconnected,
    UnbalancedCircuit,
    BalancedBarbellCircuit,
    DegreePattern(String),
    Theta,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Empty => write!(f, "empty edge set"),
            Rejection::UnknownEdge(e) => write!(f, "unknown edge {e}"),
            Rejection::Disconnected => write!(f, "edge set is disconnected"),
            Rejection::UnbalancedCircuit => write!(f, "circuit is unbalanced"),
            Rejection::BalancedBarbellCircuit => write!(f, "a barbell circuit is balanced"),
            Rejection::DegreePattern(s) => {
                write!(f, "degree pattern is not a circuit or barbell: {s}")
            }
            Rejection::Theta => write!(f, "two degree-3 vertices joined by three paths"),
        }
    }
}

/// Follows degree-2 vertices from `start` along `first` until a vertex in `stop`.
fn trail(
    g: &SignedGraph,
    edges: &BTreeSet<EdgeId>,
    start: VertexId,
    first: EdgeId,
    stop: &[VertexId],
) -> (Vec<EdgeId>, VertexId) {
    let mut out = vec![first];
    let mut at = g.e(first).other(start);
    let mut via = first;
    while !stop.contains(&at) {
        let next = g
            .incident(at)
            .iter()
            .map(|h| h.edge)
            .find(|&e| e != via && edges.contains(&e))
            .expect("degree-2 vertex has a continuation");
        out.push(next);
        at = g.e(next).other(at);
        via = next;
    }
    (out, at)
}

pub fn classify_signed_circuit(
    g: &SignedGraph,
    h: &SubgraphRef,
) -> Result<SignedCircuitKind, Rejection> {
    classify_edges(g, h.edges())
}

pub fn classify_edges(
    g: &SignedGraph,
    edges: &BTreeSet<EdgeId>,
) -> Result<SignedCircuitKind, Rejection> {
    if edges.is_empty() {
        return Err(Rejection::Empty);
    }
    if let Some(&e) = edges.iter().find(|&&e| g.edge(e).is_none()) {
        return Err(Rejection::UnknownEdge(e));
    }
    if !g.is_connected_set(edges) {
        return Err(Rejection::Disconnected);
    }
    let sub = |set: &[EdgeId]| g.subgraph(set.iter().copied()).expect("live edges");
    let mut deg: std::collections::BTreeMap<VertexId, usize> = Default::default();
    for &e in edges {
        *deg.entry(g.e(e).u).or_default() += 1;
        *deg.entry(g.e(e).v).or_default() += 1;
    }
    let special: Vec<(VertexId, usize)> = deg
        .iter()
        .filter(|(_, &d)| d != 2)
        .map(|(&v, &d)| (v, d))
        .collect();
    match special.as_slice() {
        [] => {
            if g.sign_of_edges(edges) == Sign::Positive {
                let all: Vec<_> = edges.iter().copied().collect();
                Ok(SignedCircuitKind {
                    tag: CircuitTag::BalancedCircuit,
                    circuits: vec![sub(&all)],
                    path: None,
                })
            } else {
                Err(Rejection::UnbalancedCircuit)
            }
        }
        [(w, 4)] => {
            let first = g
                .incident(*w)
                .iter()
                .map(|h| h.edge)
                .find(|e| edges.contains(e))
                .expect("degree 4");
            let (c1, _) = trail(g, edges, *w, first, &[*w]);
            let c2: Vec<EdgeId> = edges.iter().copied().filter(|e| !c1.contains(e)).collect();
            if g.sign_of_edges(&c1) == Sign::Negative && g.sign_of_edges(&c2) == Sign::Negative {
                Ok(SignedCircuitKind {
                    tag: CircuitTag::ShortBarbell,
                    circuits: vec![sub(&c1), sub(&c2)],
                    path: None,
                })
            } else {
                Err(Rejection::BalancedBarbellCircuit)
            }
        }
        [(a, 3), (b, 3)] => {
            let stops = [*a, *b];
            let trails: Vec<(Vec<EdgeId>, VertexId)> = g
                .incident(*a)
                .iter()
                .map(|h| h.edge)
                .filter(|e| edges.contains(e))
                .map(|e| trail(g, edges, *a, e, &stops))
                .collect();
            let to_b: Vec<&Vec<EdgeId>> =
                trails.iter().filter(|t| t.1 == *b).map(|t| &t.0).collect();
            if to_b.len() != 1 {
                return Err(Rejection::Theta);
            }
            let path = to_b[0].clone();
            let loop_a = trails
                .iter()
                .find(|t| t.1 == *a)
                .expect("loop at a")
                .0
                .clone();
            let rest: Vec<EdgeId> = edges
                .iter()
                .copied()
                .filter(|e| !path.contains(e) && !loop_a.contains(e))
                .collect();
            if g.sign_of_edges(&loop_a) == Sign::Negative
                && g.sign_of_edges(&rest) == Sign::Negative
            {
                Ok(SignedCircuitKind {
                    tag: CircuitTag::LongBarbell,
                    circuits: vec![sub(&loop_a), sub(&rest)],
                    path: Some(sub(&path)),
                })
            } else {
                Err(Rejection::BalancedBarbellCircuit)
            }
        }
        other => Err(Rejection::DegreePattern(
            other
                .iter()
                .map(|(v, d)| format!("d({v})={d}"))
                .collect::<Vec<_>>()
                .join(", "),
        )),
    }
}

/// First edge whose deletion leaves a balanced component (or, inside a
/// balanced component, a bridge).
pub fn inadmissibility_witness(g: &SignedGraph) -> Option<EdgeId> {
    let base = g.potentials(|_| true);
    for (e, edge) in g.edges() {
        let p = g.potentials(|x| x != e);
        let (cu, cv) = (p.comp[edge.u], p.comp[edge.v]);
        let balanced_component = base.conflict[base.comp[edge.u]].is_none();
        let bad = if balanced_component {
            cu != cv
        } else {
            p.conflict[cu].is_none() || p.conflict[cv].is_none()
        };
        if bad {
            return Some(e);
        }
    }
    None
}

pub fn flow_admissible(g: &SignedGraph) -> bool {
    inadmissibility_witness(g).is_none()
}

#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub certificate: Certificate,
}

/// Decision plus certificate: the offending edge, or a signed-circuit cover.
pub fn is_flow_admissible(g: &SignedGraph) -> AdmissibilityReport {
    if let Some(edge) = inadmissibility_witness(g) {
        return AdmissibilityReport {
            admissible: false,
            certificate: Certificate::new(
                g,
                "is_flow_admissible",
                Payload::InadmissibilityEdge { edge },
            ),
        };
    }
    let mut covered = BTreeSet::new();
    let mut circuits = Vec::new();
    for e in g.edge_ids() {
        if covered.contains(&e) {
            continue;
        }
        let kind = signed_circuit_through(g, e).expect("admissible graphs have covers");
        let edges = kind.edges();
        covered.extend(edges.iter().copied());
        circuits.push(edges.into_iter().collect());
    }
    AdmissibilityReport {
        admissible: true,
        certificate: Certificate::new(
            g,
            "is_flow_admissible",
            Payload::SignedCircuitCover { circuits },
        ),
    }
}

/// Every circuit of `g` as an edge set; parallel edges give digons.
pub fn all_circuits(g: &SignedGraph) -> Vec<BTreeSet<EdgeId>> {
    let mut out = Vec::new();
    let n = g.vertex_count();
    let mut on_path = vec![false; n];
    let mut path: Vec<EdgeId> = Vec::new();
    for s in 0..n {
        on_path[s] = true;
        extend_circuits(g, s, s, &mut on_path, &mut path, &mut out);
        on_path[s] = false;
    }
    out
}

fn extend_circuits(
    g: &SignedGraph,
    s: VertexId,
    at: VertexId,
    on_path: &mut [bool],
    path: &mut Vec<EdgeId>,
    out: &mut Vec<BTreeSet<EdgeId>>,
) {
    for h in g.incident(at) {
        let w = g.e(h.edge).other(at);
        if path.last() == Some(&h.edge) {
            continue;
        }
        if w == s {
            if !path.is_empty() && path[0] < h.edge {
                let mut c: BTreeSet<EdgeId> = path.iter().copied().collect();
                c.insert(h.edge);
                out.push(c);
            }
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(h.edge);
            extend_circuits(g, s, w, on_path, path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

fn vertices_of(g: &SignedGraph, edges: &BTreeSet<EdgeId>) -> BTreeSet<VertexId> {
    edges.iter().flat_map(|&e| [g.e(e).u, g.e(e).v]).collect()
}

/// Shortest path from `from` to `to` avoiding `blocked` internally; must use
/// `through` when given. Returns the edge list.
fn connecting_path(
    g: &SignedGraph,
    from: &BTreeSet<VertexId>,
    to: &BTreeSet<VertexId>,
    through: Option<EdgeId>,
) -> Option<Vec<EdgeId>> {
    let mut best: Option<Vec<EdgeId>> = None;
    let mut path = Vec::new();
    let mut on = vec![false; g.vertex_count()];
    for &s in from {
        on[s] = true;
        search_path(g, s, from, to, through, &mut on, &mut path, &mut best);
        on[s] = false;
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn search_path(
    g: &SignedGraph,
    at: VertexId,
    from: &BTreeSet<VertexId>,
    to: &BTreeSet<VertexId>,
    through: Option<EdgeId>,
    on: &mut [bool],
    path: &mut Vec<EdgeId>,
    best: &mut Option<Vec<EdgeId>>,
) {
    if best.as_ref().is_some_and(|b| path.len() + 1 >= b.len()) {
        return;
    }
    for h in g.incident(at) {
        let w = g.e(h.edge).other(at);
        if on[w] || from.contains(&w) {
            continue;
        }
        path.push(h.edge);
        if to.contains(&w) {
            if through.is_none_or(|t| path.contains(&t)) {
                *best = Some(path.clone());
            }
        } else {
            on[w] = true;
            search_path(g, w, from, to, through, on, path, best);
            on[w] = false;
        }
        path.pop();
    }
}

/// Some signed circuit containing `e`, or `None` when no signed circuit does.
pub fn signed_circuit_through(g: &SignedGraph, e: EdgeId) -> Option<SignedCircuitKind> {
    g.edge(e)?;
    let circuits = all_circuits(g);
    let mut balanced: Vec<&BTreeSet<EdgeId>> = circuits
        .iter()
        .filter(|c| c.contains(&e) && g.sign_of_edges(c.iter()) == Sign::Positive)
        .collect();
    balanced.sort_by_key(|c| (c.len(), c.iter().copied().collect::<Vec<_>>()));
    if let Some(c) = balanced.first() {
        return classify_edges(g, c).ok();
    }
    let unbalanced: Vec<&BTreeSet<EdgeId>> = circuits
        .iter()
        .filter(|c| g.sign_of_edges(c.iter()) == Sign::Negative)
        .collect();
    let verts: Vec<BTreeSet<VertexId>> = unbalanced.iter().map(|c| vertices_of(g, c)).collect();
    for i in 0..unbalanced.len() {
        for j in i + 1..unbalanced.len() {
            let on_circuits = unbalanced[i].contains(&e) || unbalanced[j].contains(&e);
            let shared = verts[i].intersection(&verts[j]).count();
            if shared == 1 && on_circuits {
                let union: BTreeSet<EdgeId> = unbalanced[i].union(unbalanced[j]).copied().collect();
                if let Ok(kind) = classify_edges(g, &union) {
                    return Some(kind);
                }
            } else if shared == 0 {
                let through = if on_circuits { None } else { Some(e) };
                if let Some(p) = connecting_path(g, &verts[i], &verts[j], through) {
                    let mut union: BTreeSet<EdgeId> =
                        unbalanced[i].union(unbalanced[j]).copied().collect();
                    union.extend(p);
                    if let Ok(kind) = classify_edges(g, &union) {
                        return Some(kind);
                    }
                }
            }
        }
    }
    None
}
