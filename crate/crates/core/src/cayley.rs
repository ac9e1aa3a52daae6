//! Signed Cayley graphs on finite abelian groups `Z_{n_1} x ... x Z_{n_r}`.
//!
//! Elements are coordinate vectors; vertex ids follow lexicographic order of
//! coordinates. Edges are listed per inverse pair of the connection set (the
//! first of `s`, `-s` in `S` order), then per vertex `g -> g + s`; an
//! involution contributes `g -> g + s` only when `g < g + s`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::inadmissibility_witness;
use crate::certificate::{is_hamiltonian_circuit, Certificate, FlowCertificate, Payload};
use crate::flow::{check_flow, overlay, tour_flow, FlowAssignment, FlowError, FlowMode, Violation};
use crate::graph::{EdgeId, GraphError, Sign, SignedGraph, SubgraphRef, VertexId};
use crate::ladders::{recognize_ladder, six_nzf_ladder, LadderError};
use crate::oracle::{exists_nzf, for_each_hamiltonian_circuit};
use crate::reduction::switching_for_circuit;
use crate::templates::Circle;
use crate::trace::ConstructionTrace;

const PRODUCER: &str = "sff-core/cayley";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleySpec {
    /// Cyclic factor orders.
    pub orders: Vec<usize>,
    /// Connection set as coordinate vectors.
    pub connection: Vec<Vec<usize>>,
    /// Negative edges by generated edge id.
    #[serde(default)]
    pub negative: BTreeSet<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("group orders must be at least 1")]
    BadOrder,
    #[error("element {0:?} does not belong to the group")]
    BadElement(Vec<usize>),
    #[error("the connection set contains the identity")]
    IdentityInS,
    #[error("the connection set is not closed under inverses: {0:?} has no inverse")]
    NotInverseClosed(Vec<usize>),
    #[error("element {0:?} is listed twice")]
    DuplicateElement(Vec<usize>),
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("graph does not match the Cayley spec")]
    SpecMismatch,
    #[error("graph is not flow-admissible: edge {0} lies in no signed circuit")]
    NotFlowAdmissible(EdgeId),
    #[error("group order is even")]
    EvenOrder,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not a decomposition into three Hamiltonian circuits: {0}")]
    NotDecomposition(String),
    #[error("even number of negative edges: a 2-flow exists")]
    EvenNegativeCount,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("constructed flow rejected: {0}")]
    Rejected(#[from] Violation),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl CayleySpec {
    pub fn cyclic(n: usize, connection: &[usize]) -> CayleySpec {
        CayleySpec {
            orders: vec![n],
            connection: connection.iter().map(|&s| vec![s % n.max(1)]).collect(),
            negative: BTreeSet::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product()
    }

    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    fn index(&self, a: &[usize]) -> VertexId {
        a.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&x, &n)| acc * n + x)
    }

    fn element(&self, mut v: VertexId) -> Vec<usize> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &n) in out.iter_mut().zip(&self.orders).rev() {
            *slot = v % n;
            v /= n;
        }
        out
    }

    fn add(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect()
    }

    fn inverse(&self, a: &[usize]) -> Vec<usize> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| (n - x) % n)
            .collect()
    }

    fn validate(&self) -> Result<(), CayleyError> {
        if self.orders.is_empty() || self.orders.contains(&0) {
            return Err(CayleyError::BadOrder);
        }
        let mut seen = BTreeSet::new();
        for s in &self.connection {
            if s.len() != self.orders.len() || s.iter().zip(&self.orders).any(|(&x, &n)| x >= n) {
                return Err(CayleyError::BadElement(s.clone()));
            }
            if s.iter().all(|&x| x == 0) {
                return Err(CayleyError::IdentityInS);
            }
            if !seen.insert(s.clone()) {
                return Err(CayleyError::DuplicateElement(s.clone()));
            }
        }
        if let Some(s) = self
            .connection
            .iter()
            .find(|s| !seen.contains(&self.inverse(s)))
        {
            return Err(CayleyError::NotInverseClosed(s.clone()));
        }
        Ok(())
    }

    /// Edge ids grouped by inverse pair, in generation order.
    pub fn edge_classes(&self) -> Result<Vec<Vec<EdgeId>>, CayleyError> {
        Ok(self
            .unsigned_edges()?
            .into_iter()
            .map(|class| class.into_iter().map(|(id, _, _)| id).collect())
            .collect())
    }

    fn unsigned_edges(&self) -> Result<Vec<Vec<(EdgeId, VertexId, VertexId)>>, CayleyError> {
        self.validate()?;
        let order = self.order();
        let mut classes = Vec::new();
        let mut next = 0;
        for (k, s) in self.connection.iter().enumerate() {
            let inv = self.inverse(s);
            if self.connection[..k].contains(&inv) {
                continue;
            }
            let involution = inv == *s;
            let mut class = Vec::new();
            for v in 0..order {
                let w = self.index(&self.add(&self.element(v), s));
                if !involution || v < w {
                    class.push((next, v, w));
                    next += 1;
                }
            }
            classes.push(class);
        }
        Ok(classes)
    }
}

pub fn gen_cayley(spec: &CayleySpec) -> Result<SignedGraph, CayleyError> {
    let edges: Vec<_> = spec
        .unsigned_edges()?
        .into_iter()
        .flatten()
        .map(|(id, u, v)| {
            (
                u,
                v,
                if spec.negative.contains(&id) {
                    Sign::Negative
                } else {
                    Sign::Positive
                },
            )
        })
        .collect();
    if let Some(&e) = spec.negative.iter().find(|&&e| e >= edges.len()) {
        return Err(CayleyError::UnknownEdge(e));
    }
    Ok(SignedGraph::build_graph(spec.order(), &edges)?)
}

fn matches_spec(g: &SignedGraph, spec: &CayleySpec) -> Result<(), CayleyError> {
    spec.validate()?;
    if g.vertex_count() != spec.order() || !g.is_regular(spec.degree()) {
        return Err(CayleyError::SpecMismatch);
    }
    Ok(())
}

fn gate(g: &SignedGraph) -> Result<(), CayleyError> {
    match inadmissibility_witness(g) {
        Some(e) => Err(CayleyError::NotFlowAdmissible(e)),
        None => Ok(()),
    }
}

/// Value 1 around every component, each a balanced circuit.
fn circuit_two_flow(g: &SignedGraph) -> Result<FlowAssignment, CayleyError> {
    let mode = FlowMode::Integer(2);
    let mut fa = FlowAssignment::zero(g, mode);
    let all: BTreeSet<EdgeId> = g.edge_ids().into_iter().collect();
    for comp in g.edge_components(&all) {
        let start = comp
            .iter()
            .map(|&e| g.e(e).u.min(g.e(e).v))
            .min()
            .expect("nonempty");
        let (part, defect) = tour_flow(g, &comp, start, mode)?;
        if defect != 0 {
            return Err(CayleyError::Internal(
                "unbalanced circuit in an admissible graph".into(),
            ));
        }
        overlay(&mut fa, &part, comp.iter().copied());
    }
    Ok(fa)
}

/// 6-NZF on a flow-admissible signed abelian Cayley graph: a 2-NZF on a union
/// of balanced circuits when `|S| = 2`, the ladder constructions when
/// `|S| = 3`, and a 4-NZF found by exhaustive search when `|S| >= 4`.
pub fn six_nzf_abelian_cayley(
    g: &SignedGraph,
    spec: &CayleySpec,
) -> Result<(FlowAssignment, ConstructionTrace), CayleyError> {
    matches_spec(g, spec)?;
    gate(g)?;
    let mut trace = ConstructionTrace::new();
    let fa = match spec.degree() {
        0 | 1 => {
            return Err(CayleyError::Internal(
                "admissible graph of degree below 2".into(),
            ))
        }
        2 => {
            trace.case("cayley-circuits");
            circuit_two_flow(g)?
        }
        3 => {
            trace.case("cayley-ladder");
            if !g.is_connected() {
                return Err(CayleyError::Disconnected);
            }
            let l = recognize_ladder(g).ok_or_else(|| {
                CayleyError::Internal("cubic Cayley graph is not a ladder".into())
            })?;
            trace.note(format!("{:?} ladder with {} rungs", l.kind, l.n));
            let (fa, inner) = six_nzf_ladder(g, &l)?;
            trace.absorb("ladder", inner);
            fa
        }
        _ => {
            trace.case("cayley-search-4");
            exists_nzf(g, 4, FlowMode::Integer(4), None)
                .witness
                .ok_or_else(|| {
                    CayleyError::Internal(
                        "no 4-NZF on an admissible Cayley graph of degree >= 4".into(),
                    )
                })?
        }
    };
    check_flow(g, &fa, true)?;
    trace.achieved_k = Some(fa.mode.k());
    Ok((fa, trace))
}

/// Flow number of a connected flow-admissible signed Cayley graph of odd order.
#[derive(Clone, Debug)]
pub struct OddClassification {
    pub phi: i64,
    pub flow: FlowAssignment,
    pub certificates: Vec<Certificate>,
    pub trace: ConstructionTrace,
}

/// Classifies by the parity of negative edges and `|S| / 2`. A supplied
/// Hamilton decomposition skips the search when `|S| = 6`.
pub fn flow_number_odd_cayley(
    g: &SignedGraph,
    spec: &CayleySpec,
    decomposition: Option<&[SubgraphRef; 3]>,
) -> Result<OddClassification, CayleyError> {
    matches_spec(g, spec)?;
    if spec.order() % 2 == 0 {
        return Err(CayleyError::EvenOrder);
    }
    if !g.is_connected() {
        return Err(CayleyError::Disconnected);
    }
    gate(g)?;
    let mut trace = ConstructionTrace::new();
    let half = spec.degree() / 2;
    let (phi, flow, mut certificates) = if g.negative_count() % 2 == 0 {
        trace.case("even-negatives");
        let all: BTreeSet<EdgeId> = g.edge_ids().into_iter().collect();
        let (fa, defect) = tour_flow(g, &all, 0, FlowMode::Integer(2))?;
        if defect != 0 {
            return Err(CayleyError::Internal("Euler tour left a defect".into()));
        }
        (2, fa, vec![])
    } else if half == 2 {
        trace.case("odd-negatives-degree-4");
        let fa = exists_nzf(g, 4, FlowMode::Integer(4), None)
            .witness
            .ok_or_else(|| {
                CayleyError::Internal("no 4-NZF on an admissible Eulerian graph".into())
            })?;
        let three = exists_nzf(g, 3, FlowMode::Integer(3), None);
        if three.exists {
            return Err(CayleyError::Internal(
                "a 3-NZF exists on a 4-regular graph".into(),
            ));
        }
        let exhaustion = Payload::Exhaustion {
            k: 3,
            mode: "int".into(),
            nodes: three.stats.nodes,
            max_depth: three.stats.max_depth,
        };
        (4, fa, vec![Certificate::new(g, PRODUCER, exhaustion)])
    } else if half == 3 {
        trace.case("odd-negatives-degree-6");
        let owned;
        let circuits = match decomposition {
            Some(d) => d,
            None => {
                let found = hamilton_decomposition(g, spec).ok_or_else(|| {
                    CayleyError::Internal("no Hamilton decomposition found".into())
                })?;
                owned = found.map(|c| g.subgraph(c).expect("live edges"));
                &owned
            }
        };
        let (fa, parts, inner) =
            hamilton_decomposable_3flow(g, [&circuits[0], &circuits[1], &circuits[2]])?;
        trace.absorb("decomposition", inner);
        let payload = Payload::EulerianDecomposition {
            parts,
            flow: FlowCertificate::from_flow(g, &fa),
        };
        (3, fa, vec![Certificate::new(g, PRODUCER, payload)])
    } else {
        trace.case("odd-negatives-search-3");
        let fa = exists_nzf(g, 3, FlowMode::Integer(3), None)
            .witness
            .ok_or_else(|| {
                CayleyError::Internal("no 3-NZF on an admissible graph of degree >= 8".into())
            })?;
        (3, fa, vec![])
    };
    check_flow(g, &flow, true)?;
    certificates.insert(0, Certificate::flow(g, &flow, PRODUCER));
    trace.achieved_k = Some(phi);
    Ok(OddClassification {
        phi,
        flow,
        certificates,
        trace,
    })
}

/// Three edge-disjoint Hamiltonian circuits covering a 6-regular graph. The
/// inverse-pair classes are tried first; otherwise circuits are found by
/// backtracking.
pub fn hamilton_decomposition(g: &SignedGraph, spec: &CayleySpec) -> Option<[BTreeSet<EdgeId>; 3]> {
    if !g.is_regular(6) {
        return None;
    }
    let hamiltonian = |c: &BTreeSet<EdgeId>| is_hamiltonian_circuit(g, c);
    if let Ok(classes) = spec.edge_classes() {
        let sets: Vec<BTreeSet<EdgeId>> = classes
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect();
        if let [a, b, c] = sets.as_slice() {
            if [a, b, c].into_iter().all(hamiltonian) {
                return Some([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    let all: BTreeSet<EdgeId> = g.edge_ids().into_iter().collect();
    let mut found = None;
    for_each_hamiltonian_circuit(g, &mut |c1| {
        let c1: BTreeSet<EdgeId> = c1.iter().copied().collect();
        let rest = g.without_edges(&c1);
        for_each_hamiltonian_circuit(&rest, &mut |c2| {
            let c2: BTreeSet<EdgeId> = c2.iter().copied().collect();
            let c3: BTreeSet<EdgeId> = all
                .iter()
                .copied()
                .filter(|e| !c1.contains(e) && !c2.contains(e))
                .collect();
            if hamiltonian(&c3) {
                found = Some([c1.clone(), c2, c3]);
                false
            } else {
                true
            }
        });
        found.is_none()
    });
    found
}

/// The two paths of a Hamiltonian circuit between `u` and `v`.
fn split_at(circle: &Circle, u: VertexId, v: VertexId) -> [Vec<EdgeId>; 2] {
    let (a, b) = (circle.pos[u], circle.pos[v]);
    [true, false].map(|fw| circle.walk_edges(&circle.walk(a, b, fw), fw))
}

/// 3-NZF on a Hamilton-decomposable graph with an odd number of negative
/// edges, through three Eulerian parts with odd negative counts that share a
/// vertex `w`. Each part carries a unit tour flow from `w` with boundary 2
/// there; the parts are weighted 1, 1 and -2.
pub fn hamilton_decomposable_3flow(
    g: &SignedGraph,
    circuits: [&SubgraphRef; 3],
) -> Result<(FlowAssignment, Vec<Vec<EdgeId>>, ConstructionTrace), CayleyError> {
    let bad = |m: &str| CayleyError::NotDecomposition(m.into());
    let mut union = BTreeSet::new();
    for c in circuits {
        g.check_ref(c)?;
        if !is_hamiltonian_circuit(g, c.edges()) {
            return Err(bad("a part is not a Hamiltonian circuit"));
        }
        if c.edges().iter().any(|&e| !union.insert(e)) {
            return Err(bad("circuits share an edge"));
        }
    }
    if union.len() != g.edge_count() {
        return Err(bad("circuits do not cover every edge"));
    }
    if g.negative_count() % 2 == 0 {
        return Err(CayleyError::EvenNegativeCount);
    }
    let mut trace = ConstructionTrace::new();
    let (unbalanced, balanced): (Vec<&SubgraphRef>, Vec<&SubgraphRef>) = circuits
        .into_iter()
        .partition(|c| g.sign_of_edges(c.edges()) == Sign::Negative);
    let (parts, w): (Vec<BTreeSet<EdgeId>>, VertexId) = if balanced.is_empty() {
        trace.case("three-unbalanced");
        (unbalanced.iter().map(|c| c.edges().clone()).collect(), 0)
    } else {
        let [c2, c3] = [balanced[0], balanced[1]];
        let c1 = unbalanced[0];
        let switched = g.switch_at(&switching_for_circuit(g, c2.edges()))?;
        let circle2 = Circle::from_circuit(g, c2.edges()).expect("checked circuit");
        if let Some(&e) = c3
            .edges()
            .iter()
            .find(|&&e| switched.e(e).sign.is_negative())
        {
            trace.case("third-circuit-negative");
            let edge = g.e(e);
            let [pa, pb] = split_at(&circle2, edge.u, edge.v);
            let first: BTreeSet<EdgeId> = pa.into_iter().chain([e]).collect();
            let second: BTreeSet<EdgeId> = pb
                .into_iter()
                .chain(c3.edges().iter().copied().filter(|&f| f != e))
                .collect();
            (vec![first, second, c1.edges().clone()], edge.u)
        } else {
            trace.case("third-circuit-positive");
            let negs: Vec<EdgeId> = c1
                .edges()
                .iter()
                .copied()
                .filter(|&e| switched.e(e).sign.is_negative())
                .collect();
            if negs.len() < 2 {
                return Err(CayleyError::NotFlowAdmissible(negs[0]));
            }
            let [e1, e2] = [negs[0], negs[1]];
            let (u1, v1) = (g.e(e1).u, g.e(e1).v);
            let [p_alpha, p_beta] = split_at(&circle2, u1, v1);
            let circle3 = Circle::from_circuit(g, c3.edges()).expect("checked circuit");
            let [p_x, p_y] = split_at(&circle3, g.e(e2).u, g.e(e2).v);
            let touches = |p: &[EdgeId]| p.iter().any(|&e| g.e(e).side_of(u1).is_some());
            let (p_gamma, p_delta) = if touches(&p_y) {
                (p_x, p_y)
            } else {
                (p_y, p_x)
            };
            let first: BTreeSet<EdgeId> = c1
                .edges()
                .iter()
                .copied()
                .filter(|&e| e != e1 && e != e2)
                .chain(p_alpha)
                .chain(p_gamma)
                .collect();
            let second: BTreeSet<EdgeId> = p_beta.into_iter().chain([e1]).collect();
            let third: BTreeSet<EdgeId> = p_delta.into_iter().chain([e2]).collect();
            trace.edges("e1", &[e1]);
            trace.edges("e2", &[e2]);
            (vec![first, second, third], u1)
        }
    };
    let mode = FlowMode::Integer(3);
    let mut fa = FlowAssignment::zero(g, mode);
    for (part, weight) in parts.iter().zip([1, 1, -2]) {
        if !g.is_even_set(part)
            || !g.is_connected_set(part)
            || g.sign_of_edges(part) != Sign::Negative
        {
            return Err(CayleyError::Internal(
                "decomposition part is not an odd Eulerian subgraph".into(),
            ));
        }
        let (mut flow, defect) = tour_flow(g, part, w, mode)?;
        if defect != 2 {
            return Err(CayleyError::Internal("tour flow left no defect".into()));
        }
        for &e in part {
            flow.values[e] *= weight;
        }
        overlay(&mut fa, &flow, part.iter().copied());
    }
    for (i, part) in parts.iter().enumerate() {
        trace.edges(format!("part{i}"), part);
    }
    trace.vertices("w", &[w]);
    check_flow(g, &fa, true)?;
    trace.achieved_k = Some(3);
    Ok((
        fa,
        parts.into_iter().map(|p| p.into_iter().collect()).collect(),
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::validate;
    use crate::ladders::gen_ladder;

    fn signed(g: &SignedGraph, negative: &BTreeSet<EdgeId>) -> SignedGraph {
        g.map_signs(|e, _| {
            if negative.contains(&e) {
                Sign::Negative
            } else {
                Sign::Positive
            }
        })
    }

    fn classes(g: &SignedGraph) -> impl Iterator<Item = BTreeSet<EdgeId>> + '_ {
        let cotree = g.cotree_edges();
        (0u64..1 << cotree.len()).map(move |mask| {
            (0..cotree.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| cotree[b])
                .collect()
        })
    }

    #[test]
    fn z4_with_plus_minus_one_is_a_4_circuit() {
        let g = gen_cayley(&CayleySpec::cyclic(4, &[1, 3])).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        assert!(g.is_regular(2) && g.is_connected());
    }

    #[test]
    fn z8_with_an_involution_is_a_cubic_ladder() {
        let g = gen_cayley(&CayleySpec::cyclic(8, &[1, 7, 4])).unwrap();
        assert_eq!(g.edge_count(), 12);
        let l = recognize_ladder(&g).unwrap();
        assert_eq!(l.n, 4);
    }

    #[test]
    fn z9_with_two_pairs_is_4_regular() {
        let g = gen_cayley(&CayleySpec::cyclic(9, &[1, 8, 2, 7])).unwrap();
        assert!(g.is_regular(4) && g.is_connected());
        assert_eq!(g.vertex_count(), 9);
    }

    #[test]
    fn malformed_connection_sets_are_rejected() {
        assert_eq!(
            gen_cayley(&CayleySpec::cyclic(5, &[0, 1, 4])),
            Err(CayleyError::IdentityInS)
        );
        assert_eq!(
            gen_cayley(&CayleySpec::cyclic(5, &[1, 2])),
            Err(CayleyError::NotInverseClosed(vec![1]))
        );
        assert_eq!(
            gen_cayley(&CayleySpec::cyclic(5, &[1, 4, 1])),
            Err(CayleyError::DuplicateElement(vec![1]))
        );
    }

    #[test]
    fn vertices_follow_lexicographic_coordinates() {
        let spec = CayleySpec {
            orders: vec![2, 3],
            connection: vec![vec![1, 0], vec![0, 1], vec![0, 2]],
            negative: BTreeSet::new(),
        };
        let g = gen_cayley(&spec).unwrap();
        // (1, 0) is an involution: three edges, then three for (0, 1)
        assert_eq!(g.edge_count(), 9);
        assert_eq!((g.e(0).u, g.e(0).v), (0, 3));
        assert_eq!((g.e(3).u, g.e(3).v), (0, 1));
        assert_eq!((g.e(5).u, g.e(5).v), (2, 0));
    }

    /// Connected cubic Cayley graphs on abelian groups with at most 16 elements.
    fn cubic_cayley_specs() -> Vec<CayleySpec> {
        let groups: Vec<Vec<usize>> = vec![
            vec![4],
            vec![2, 2],
            vec![6],
            vec![8],
            vec![2, 4],
            vec![2, 2, 2],
            vec![10],
            vec![12],
            vec![2, 6],
            vec![14],
            vec![16],
            vec![2, 8],
            vec![4, 4],
            vec![2, 2, 4],
        ];
        let mut out = Vec::new();
        for orders in groups {
            let base = CayleySpec {
                orders,
                connection: vec![],
                negative: BTreeSet::new(),
            };
            let elems: Vec<Vec<usize>> = (1..base.order()).map(|v| base.element(v)).collect();
            let (involutions, others): (Vec<&Vec<usize>>, Vec<&Vec<usize>>) =
                elems.iter().partition(|a| base.inverse(a) == **a);
            let mut sets: Vec<Vec<Vec<usize>>> = Vec::new();
            for a in others
                .iter()
                .filter(|a| base.index(a) < base.index(&base.inverse(a)))
            {
                for t in &involutions {
                    sets.push(vec![(*a).clone(), base.inverse(a), (*t).clone()]);
                }
            }
            for (i, t1) in involutions.iter().enumerate() {
                for (j, t2) in involutions.iter().enumerate().skip(i + 1) {
                    for t3 in involutions.iter().skip(j + 1) {
                        sets.push(vec![(*t1).clone(), (*t2).clone(), (*t3).clone()]);
                    }
                }
            }
            for connection in sets {
                let spec = CayleySpec {
                    connection,
                    ..base.clone()
                };
                if gen_cayley(&spec).is_ok_and(|g| g.is_connected()) {
                    out.push(spec);
                }
            }
        }
        out
    }

    #[test]
    fn cubic_cayley_graphs_up_to_16_elements_are_ladders() {
        let specs = cubic_cayley_specs();
        assert!(specs.len() > 20);
        for spec in specs {
            let g = gen_cayley(&spec).unwrap();
            let l = recognize_ladder(&g).unwrap_or_else(|| panic!("{spec:?}"));
            let canon = l.canonical_graph(&g).unwrap();
            assert_eq!(canon, gen_ladder(&l.spec(&g).unwrap()).unwrap());
            assert_eq!(canon.vertex_count(), g.vertex_count());
        }
    }

    #[test]
    fn fig2_as_a_cayley_graph_gets_a_6_flow() {
        // Z4 x Z2 with S = {(1,0), (3,0), (0,1)}; vertex (i, j) is drawn as i + 4j
        let spec = CayleySpec {
            orders: vec![4, 2],
            connection: vec![vec![1, 0], vec![3, 0], vec![0, 1]],
            negative: BTreeSet::from([1, 6, 10]),
        };
        let g = gen_cayley(&spec).unwrap();
        let fig2 = crate::generators::fig2();
        let drawn = |v: VertexId| v / 2 + 4 * (v % 2);
        for (e, edge) in g.edges() {
            let image = fig2.edges_between(drawn(edge.u), drawn(edge.v));
            assert_eq!(image.len(), 1);
            assert_eq!(fig2.e(image[0]).sign, g.e(e).sign);
        }
        let (fa, _) = six_nzf_abelian_cayley(&g, &spec).unwrap();
        check_flow(&g, &fa, true).unwrap();
        assert_eq!(fa.mode.k(), 6);
        assert!(!exists_nzf(&g, 5, FlowMode::Integer(5), None).exists);
    }

    #[test]
    fn every_signature_of_small_cayley_graphs_gets_a_flow() {
        for spec in [
            CayleySpec::cyclic(6, &[1, 5, 3]),
            CayleySpec::cyclic(5, &[1, 4, 2, 3]),
            CayleySpec::cyclic(7, &[1, 6]),
        ] {
            let g = gen_cayley(&spec).unwrap();
            for neg in classes(&g) {
                let h = signed(&g, &neg);
                match six_nzf_abelian_cayley(&h, &spec) {
                    Ok((fa, _)) => {
                        check_flow(&h, &fa, true).unwrap();
                        assert!(fa.mode.k() <= 6);
                    }
                    Err(CayleyError::NotFlowAdmissible(_)) => {
                        assert!(inadmissibility_witness(&h).is_some())
                    }
                    Err(e) => panic!("{spec:?} {neg:?}: {e}"),
                }
            }
        }
    }

    #[test]
    fn all_positive_degree_4_gets_a_4_flow() {
        let spec = CayleySpec::cyclic(9, &[1, 8, 2, 7]);
        let (fa, _) = six_nzf_abelian_cayley(&gen_cayley(&spec).unwrap(), &spec).unwrap();
        assert_eq!(fa.mode.k(), 4);
    }

    #[test]
    fn unbalanced_circuit_is_not_admissible() {
        let spec = CayleySpec {
            negative: BTreeSet::from([0]),
            ..CayleySpec::cyclic(5, &[1, 4])
        };
        let g = gen_cayley(&spec).unwrap();
        assert!(matches!(
            six_nzf_abelian_cayley(&g, &spec),
            Err(CayleyError::NotFlowAdmissible(_))
        ));
    }

    #[test]
    fn classifier_examples() {
        // one negative edge alone is never admissible, so three stand in for it
        let z9 = CayleySpec {
            negative: BTreeSet::from([0, 1, 2]),
            ..CayleySpec::cyclic(9, &[1, 8, 2, 7])
        };
        let c = flow_number_odd_cayley(&gen_cayley(&z9).unwrap(), &z9, None).unwrap();
        assert_eq!(c.phi, 4);
        let z7 = CayleySpec::cyclic(7, &[1, 6, 2, 5, 3, 4]);
        let g = gen_cayley(&z7).unwrap();
        assert_eq!(flow_number_odd_cayley(&g, &z7, None).unwrap().phi, 2);
        let z7n = CayleySpec {
            negative: BTreeSet::from([0, 1, 2]),
            ..z7.clone()
        };
        let g = gen_cayley(&z7n).unwrap();
        let c = flow_number_odd_cayley(&g, &z7n, None).unwrap();
        assert_eq!(c.phi, 3);
        assert!(!exists_nzf(&g, 2, FlowMode::Integer(2), None).exists);
        for cert in &c.certificates {
            validate(cert, &g).unwrap();
        }
        let even = CayleySpec::cyclic(4, &[1, 3]);
        assert_eq!(
            flow_number_odd_cayley(&gen_cayley(&even).unwrap(), &even, None).unwrap_err(),
            CayleyError::EvenOrder
        );
    }

    #[test]
    fn decomposition_cases() {
        let z7 = CayleySpec::cyclic(7, &[1, 6, 2, 5, 3, 4]);
        let g = gen_cayley(&z7).unwrap();
        let sets = hamilton_decomposition(&g, &z7).unwrap();
        let pool: Vec<EdgeId> = sets
            .iter()
            .flat_map(|c| c.iter().take(3).copied())
            .collect();
        let mut cases = BTreeSet::new();
        for mask in 0u32..1 << pool.len() {
            let neg: BTreeSet<EdgeId> = (0..pool.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| pool[b])
                .collect();
            let h = signed(&g, &neg);
            let circuits = sets.clone().map(|c| h.subgraph(c).unwrap());
            let refs = [&circuits[0], &circuits[1], &circuits[2]];
            if neg.len() % 2 == 0 {
                assert_eq!(
                    hamilton_decomposable_3flow(&h, refs).unwrap_err(),
                    CayleyError::EvenNegativeCount
                );
                continue;
            }
            match hamilton_decomposable_3flow(&h, refs) {
                Ok((fa, parts, trace)) => {
                    check_flow(&h, &fa, true).unwrap();
                    assert_eq!(parts.len(), 3);
                    cases.extend(trace.cases);
                }
                Err(CayleyError::NotFlowAdmissible(_)) => {
                    assert!(inadmissibility_witness(&h).is_some())
                }
                Err(e) => panic!("{neg:?}: {e}"),
            }
        }
        assert_eq!(cases.len(), 3, "{cases:?}");
        let circuits = sets.map(|c| g.subgraph(c).unwrap());
        let overlap = [&circuits[0], &circuits[0], &circuits[1]];
        assert!(matches!(
            hamilton_decomposable_3flow(&g, overlap),
            Err(CayleyError::NotDecomposition(_))
        ));
    }

    #[test]
    fn z9_with_a_non_generating_pair_is_decomposed_by_search() {
        let spec = CayleySpec::cyclic(9, &[1, 8, 2, 7, 3, 6]);
        let g = gen_cayley(&spec).unwrap();
        let [a, b, c] = hamilton_decomposition(&g, &spec).unwrap();
        assert_eq!(a.len() + b.len() + c.len(), 27);
        assert!([a, b, c].iter().all(|x| is_hamiltonian_circuit(&g, x)));
    }
}
