//! Nowhere-zero 6-flows built from a balanced Hamiltonian circuit.
//!
//! After switching the circuit `H` all-positive, three constructions cover
//! every case: an even number of negative edges, two negative chords that
//! cross along `H`, and the all-parallel case on a cubic graph.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::admissibility::inadmissibility_witness;
use crate::certificate::is_hamiltonian_circuit;
use crate::flow::{
    check_flow, combine, default_orientation, lift_z2_to_3flow, overlay, two_flow_on_positive_even,
    z2_nzf_on_even, FlowAssignment, FlowError, FlowMode, Violation,
};
use crate::graph::{xor_into, Edge, EdgeId, GraphError, Sign, SignedGraph, SubgraphRef, VertexId};
use crate::reduction::{
    check_even_eulerian, covering_pair_supereulerian, pull_back, switching_for_circuit,
    three_regularize, ReductionError,
};
use crate::templates::{self, apply_corners, Circle, TemplateError};
use crate::trace::ConstructionTrace;

const SIX: FlowMode = FlowMode::Integer(6);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SixFlowError {
    #[error("graph is not flow-admissible: edge {0} lies in no signed circuit")]
    NotFlowAdmissible(EdgeId),
    #[error("not a balanced Hamiltonian circuit: {0}")]
    NotBalancedHamiltonian(String),
    #[error("the graph has an odd number of negative edges")]
    OddNegativeCount,
    #[error("edges {0} and {1} do not intersect along the circuit")]
    NotIntersecting(EdgeId, EdgeId),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not a spanning even Eulerian subgraph: {0}")]
    NotEvenEulerian(String),
    #[error("not a Kotzig triple: {0}")]
    NotKotzig(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("constructed flow rejected: {0}")]
    Rejected(#[from] Violation),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn violated(reason: impl Into<String>) -> SixFlowError {
    SixFlowError::PreconditionViolated(reason.into())
}

fn positive_circle(g: &SignedGraph, h: &SubgraphRef) -> Result<Circle, SixFlowError> {
    g.check_ref(h)?;
    let circle = Circle::from_circuit(g, h.edges())
        .ok_or_else(|| violated("H is not a Hamiltonian circuit"))?;
    if let Some(&e) = h.edges().iter().find(|&&e| g.e(e).sign.is_negative()) {
        return Err(violated(format!("edge {e} of H is negative")));
    }
    Ok(circle)
}

/// Corners `u1, u2, v1, v2` in cyclic order when `a` and `b` cross along the circle.
fn crossing_corners(circle: &Circle, a: Edge, b: Edge) -> Option<BTreeMap<&'static str, VertexId>> {
    let n = circle.len();
    let (u1, v1) = if circle.pos[a.u] < circle.pos[a.v] {
        (a.u, a.v)
    } else {
        (a.v, a.u)
    };
    let rel = |v: VertexId| (circle.pos[v] + n - circle.pos[u1]) % n;
    let (u2, v2) = if rel(b.u) < rel(b.v) {
        (b.u, b.v)
    } else {
        (b.v, b.u)
    };
    let distinct = BTreeSet::from([u1, v1, u2, v2]).len() == 4;
    (distinct && rel(u2) < rel(v1) && rel(v1) < rel(v2))
        .then(|| BTreeMap::from([("u1", u1), ("u2", u2), ("v1", v1), ("v2", v2)]))
}

fn first_crossing_pair(g: &SignedGraph, circle: &Circle) -> Option<(EdgeId, EdgeId)> {
    let negs = g.negative_edges();
    negs.iter().enumerate().find_map(|(i, &a)| {
        negs[i + 1..]
            .iter()
            .find(|&&b| crossing_corners(circle, g.e(a), g.e(b)).is_some())
            .map(|&b| (a, b))
    })
}

/// Integer 3-flow, valued +-1 on every edge off `h`, from the Z2 flow on the
/// symmetric difference of the fundamental circuits of the Hamiltonian path
/// `h` minus its smallest edge. `g` must be connected with an even number of
/// negative edges off `h`.
fn chord_lift(
    g: &SignedGraph,
    circle: &Circle,
    h: &BTreeSet<EdgeId>,
) -> Result<FlowAssignment, SixFlowError> {
    let n = circle.len();
    let cut = *h.iter().next().expect("nonempty circuit");
    let m = circle
        .edges
        .iter()
        .position(|&e| e == cut)
        .expect("cut edge on circle");
    let index = |v: VertexId| (circle.pos[v] + n - (m + 1) % n) % n;
    let mut odd = BTreeSet::new();
    for (e, edge) in g.edges().filter(|(e, _)| !h.contains(e)) {
        xor_into(&mut odd, [e]);
        let (a, b) = (index(edge.u), index(edge.v));
        xor_into(
            &mut odd,
            (a.min(b)..a.max(b)).map(|i| circle.edges[(m + 1 + i) % n]),
        );
    }
    let z2 = z2_nzf_on_even(g, &g.subgraph(odd)?)?;
    Ok(lift_z2_to_3flow(g, &z2)?)
}

/// First candidate that verifies as a nowhere-zero 6-flow, with its index.
fn first_verifying(
    g: &SignedGraph,
    candidates: Vec<FlowAssignment>,
) -> Result<(FlowAssignment, usize), SixFlowError> {
    let mut last = None;
    for (i, fa) in candidates.into_iter().enumerate() {
        let fa = fa.with_mode(SIX);
        match check_flow(g, &fa, true) {
            Ok(()) => return Ok((fa, i)),
            Err(v) => last = Some(v),
        }
    }
    Err(last.expect("at least one candidate").into())
}

/// `f1 + 3 f2` with `f1` valued +-1 off `h` and `f2` the 2-flow on `h`.
pub fn even_case(g: &SignedGraph, h: &SubgraphRef) -> Result<FlowAssignment, SixFlowError> {
    let circle = positive_circle(g, h)?;
    if g.negative_count() % 2 == 1 {
        return Err(SixFlowError::OddNegativeCount);
    }
    let f1 = chord_lift(g, &circle, h.edges())?;
    let f2 = two_flow_on_positive_even(g, h)?;
    Ok(first_verifying(g, vec![combine(1, &f1, 3, &f2)?])?.0)
}

/// `2 f1 +- f2`, where `f1` is the chord lift on `g - e1` and `f2` places the
/// crossing template on `H + e1 + e2`.
pub fn intersect_case(
    g: &SignedGraph,
    h: &SubgraphRef,
    e1: EdgeId,
    e2: EdgeId,
) -> Result<FlowAssignment, SixFlowError> {
    let circle = positive_circle(g, h)?;
    for e in [e1, e2] {
        match g.edge(e) {
            Some(edge) if edge.sign.is_negative() && !h.contains(e) => {}
            _ => return Err(violated(format!("edge {e} is not a negative chord of H"))),
        }
    }
    let corners =
        crossing_corners(&circle, g.e(e1), g.e(e2)).ok_or(SixFlowError::NotIntersecting(e1, e2))?;
    if g.negative_count() % 2 == 0 {
        return Err(violated("the number of negative edges is even"));
    }
    let mut f1 = chord_lift(&g.without_edges(&BTreeSet::from([e1])), &circle, h.edges())?;
    f1.orientation.set(e1, default_orientation(g).at(e1));
    let chords = BTreeMap::from([("e1", e1), ("e2", e2)]);
    let f2 = apply_corners(
        g,
        templates::active()?.get("fig3")?,
        &circle,
        &corners,
        &chords,
    )?;
    Ok(first_verifying(g, vec![combine(2, &f1, 1, &f2)?, combine(2, &f1, -1, &f2)?])?.0)
}

fn chord_at(g: &SignedGraph, h: &SubgraphRef, v: VertexId) -> Option<EdgeId> {
    g.incident(v)
        .iter()
        .map(|x| x.edge)
        .find(|&e| !h.contains(e))
}

/// The all-parallel case: `f1 +- 2 f2` with `f1` the parallel template on
/// `H + e1 + e2` and `f2` a 3-flow on the subgraph left after the parity
/// split of the path `P` between the two chords.
pub fn parallel_case(
    g: &SignedGraph,
    h: &SubgraphRef,
) -> Result<(FlowAssignment, ConstructionTrace), SixFlowError> {
    if !g.is_regular(3) {
        return Err(violated("graph is not cubic"));
    }
    let circle = positive_circle(g, h)?;
    let negs = g.negative_edges();
    if negs.len() < 3 || negs.len() % 2 == 0 {
        return Err(violated(
            "the number of negative edges is not odd and at least 3",
        ));
    }
    if let Some((a, b)) = first_crossing_pair(g, &circle) {
        return Err(violated(format!("negative edges {a} and {b} intersect")));
    }
    let e1 = negs[0];
    let mut best: Option<((usize, usize, bool), Vec<usize>, bool)> = None;
    for v1 in [g.e(e1).u, g.e(e1).v] {
        for v2 in [g.e(negs[1]).u, g.e(negs[1]).v] {
            let blocked = [g.e(e1).other(v1), g.e(negs[1]).other(v2)].map(|u| circle.pos[u]);
            for forward in [true, false] {
                let walk = circle.walk(circle.pos[v1], circle.pos[v2], forward);
                if walk.iter().any(|p| blocked.contains(p)) {
                    continue;
                }
                let key = (walk.len(), circle.pos[v1], !forward);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, walk, forward));
                }
            }
        }
    }
    let (_, mut walk, forward) =
        best.ok_or_else(|| violated("no path joins the first two negative edges"))?;
    let mut e2 = negs[1];
    if let Some(i) = (1..walk.len() - 1)
        .find(|&i| chord_at(g, h, circle.verts[walk[i]]).is_some_and(|c| g.e(c).sign.is_negative()))
    {
        e2 = chord_at(g, h, circle.verts[walk[i]]).expect("chord");
        walk.truncate(i + 1);
    }
    let (v1, v2) = (
        circle.verts[walk[0]],
        circle.verts[*walk.last().expect("nonempty")],
    );
    let (u1, u2) = (g.e(e1).other(v1), g.e(e2).other(v2));
    if walk
        .iter()
        .any(|&p| p == circle.pos[u1] || p == circle.pos[u2])
    {
        return Err(violated("path P meets an end of a chosen negative edge"));
    }
    let p_edges = circle.walk_edges(&walk, forward);
    let p_set: BTreeSet<EdgeId> = p_edges.iter().copied().collect();
    let corners = BTreeMap::from([("u1", u1), ("v1", v1), ("u2", u2), ("v2", v2)]);
    let chords = BTreeMap::from([("e1", e1), ("e2", e2)]);
    let f1 = apply_corners(
        g,
        templates::active()?.get("fig4")?,
        &circle,
        &corners,
        &chords,
    )?;

    let mut trace = ConstructionTrace::new();
    trace.case("parallel");
    trace.edges("P", &p_edges);
    trace.edges("e1", [&e1]);
    trace.edges("e2", [&e2]);
    trace.vertices("u1-v1-u2-v2", &[u1, v1, u2, v2]);
    let m_p: Vec<EdgeId> = walk[1..walk.len() - 1]
        .iter()
        .filter_map(|&p| chord_at(g, h, circle.verts[p]))
        .collect();
    trace.edges("M_P", &m_p);

    let mut removed = BTreeSet::from([e2]);
    let mut rest = circle.walk(circle.pos[v2], circle.pos[v1], forward);
    if p_edges.len() % 2 == 1 {
        trace.case("parallel-case-1");
        removed.extend(p_edges.iter().step_by(2));
    } else {
        trace.case("parallel-case-2");
        let e_star = circle.edge_at(walk[0], !forward);
        trace.edges("e*", [&e_star]);
        removed.insert(e_star);
        removed.extend(p_edges.iter().skip(1).step_by(2));
        rest.pop();
    }
    let p_prime = circle.walk_edges(&rest, forward);
    trace.edges("G2-removed", &removed);
    trace.edges("P'", &p_prime);

    let kept: BTreeSet<EdgeId> = g
        .edge_ids()
        .into_iter()
        .filter(|e| !removed.contains(e))
        .collect();
    let mut g3 = None;
    let mut circuits = Vec::new();
    for comp in g.edge_components(&kept) {
        if p_prime.first().is_some_and(|e| comp.contains(e)) {
            g3 = Some(comp);
        } else if comp.iter().all(|&e| g.e(e).sign == Sign::Positive)
            && g.is_even_set(&comp)
            && comp.len()
                == comp
                    .iter()
                    .flat_map(|&e| [g.e(e).u, g.e(e).v])
                    .collect::<BTreeSet<_>>()
                    .len()
        {
            circuits.push(comp);
        } else {
            return Err(violated(
                "a component of G2 away from P' is not an all-positive circuit",
            ));
        }
    }
    let g3 = g3.ok_or_else(|| violated("P' is empty"))?;
    if p_prime.iter().any(|e| !g3.contains(e)) {
        return Err(violated("P' is split between components of G2"));
    }
    let mut g4: BTreeSet<EdgeId> = g3
        .iter()
        .copied()
        .filter(|e| !p_prime.contains(e))
        .collect();
    let x = g4.clone();
    let mut take = false;
    for (i, &e) in p_prime.iter().enumerate() {
        take = (g.degree_in(&x, circle.verts[rest[i]]) + usize::from(take)) % 2 == 1;
        if take {
            g4.insert(e);
        }
    }
    if !g.is_even_set(&g4) {
        return Err(violated("G4 is not even"));
    }
    trace.edges("G3", &g3);
    trace.edges("G4", &g4);
    for (i, c) in circuits.iter().enumerate() {
        trace.edges(format!("C{}", i + 1), c);
    }

    let outside: BTreeSet<EdgeId> = g
        .edge_ids()
        .into_iter()
        .filter(|e| !g3.contains(e))
        .collect();
    let g3_graph = g.without_edges(&outside);
    let f4 = z2_nzf_on_even(&g3_graph, &g3_graph.subgraph(g4.iter().copied())?)?;
    let f3 = lift_z2_to_3flow(&g3_graph, &f4)?;
    let mut f2 = FlowAssignment::zero(g, FlowMode::Integer(3));
    overlay(&mut f2, &f3, g3.iter().copied());
    for c in &circuits {
        let gi = two_flow_on_positive_even(g, &g.subgraph(c.iter().copied())?)?;
        overlay(&mut f2, &gi, c.iter().copied());
    }
    check_flow(g, &f2, false)?;

    let (out, which) =
        first_verifying(g, vec![combine(1, &f1, 2, &f2)?, combine(1, &f1, -2, &f2)?])?;
    trace.note(if which == 0 { "f1 + 2 f2" } else { "f1 - 2 f2" });
    for (e, _) in g.edges() {
        let allowed: &[i64] = if p_set.contains(&e) {
            &[1, 3, 5]
        } else if h.contains(e) {
            &[-3, -1, 1, 3, 5]
        } else if e == e1 {
            &[4]
        } else if e == e2 {
            &[2]
        } else {
            &[-2, 2]
        };
        if !allowed.contains(&out.values[e]) {
            return Err(violated(format!(
                "edge {e} carries {} outside its case range",
                out.values[e]
            )));
        }
    }
    trace.achieved_k = Some(6);
    Ok((out, trace))
}

fn dispatch(
    g: &SignedGraph,
    h: &SubgraphRef,
    trace: &mut ConstructionTrace,
    may_reduce: bool,
) -> Result<FlowAssignment, SixFlowError> {
    if g.negative_count() % 2 == 0 {
        trace.case("even-negatives");
        return even_case(g, h);
    }
    let circle = positive_circle(g, h)?;
    if let Some((a, b)) = first_crossing_pair(g, &circle) {
        trace.case("intersecting");
        trace.edges("e1", [&a]);
        trace.edges("e2", [&b]);
        return intersect_case(g, h, a, b);
    }
    if g.is_regular(3) {
        let (fa, inner) = parallel_case(g, h)?;
        trace.absorb("parallel", inner);
        return Ok(fa);
    }
    if !may_reduce {
        return Err(violated("reduced graph is not cubic"));
    }
    trace.case("regularized");
    let r = three_regularize(g, &covering_pair_supereulerian(g, Some(h))?)?;
    let mut inner = r.trace.clone();
    let fa = dispatch(&r.g_prime, &r.j, &mut inner, false)?;
    trace.absorb("reduced", inner);
    Ok(pull_back(g, &fa))
}

/// A verified nowhere-zero 6-flow on `g`, given a balanced Hamiltonian circuit `h`.
pub fn six_nzf_balanced_hamiltonian(
    g: &SignedGraph,
    h: &SubgraphRef,
) -> Result<(FlowAssignment, ConstructionTrace), SixFlowError> {
    if let Some(e) = inadmissibility_witness(g) {
        return Err(SixFlowError::NotFlowAdmissible(e));
    }
    g.check_ref(h)
        .map_err(|e| SixFlowError::NotBalancedHamiltonian(e.to_string()))?;
    if !is_hamiltonian_circuit(g, h.edges()) {
        return Err(SixFlowError::NotBalancedHamiltonian(
            "not a Hamiltonian circuit".into(),
        ));
    }
    if g.sign_of_edges(h.edges()) == Sign::Negative {
        return Err(SixFlowError::NotBalancedHamiltonian(
            "the circuit is unbalanced".into(),
        ));
    }
    let u = switching_for_circuit(g, h.edges());
    let gs = g.switch_at(&u)?;
    let hs = gs.subgraph(h.edges().iter().copied())?;
    let mut trace = ConstructionTrace::new();
    trace.edges("H", h.edges());
    trace.vertices("switched", &u.0);
    let fs = dispatch(&gs, &hs, &mut trace, true)?;
    let out = fs.switched(&gs, &u);
    check_flow(g, &out, true)?;
    trace.achieved_k = Some(6);
    Ok((out, trace))
}

/// Reduces to a cubic graph whose 2-factor is one balanced circuit, builds the
/// flow there, and restricts it to `g`.
pub fn six_nzf_spanning_even_eulerian(
    g: &SignedGraph,
    h: &SubgraphRef,
) -> Result<(FlowAssignment, ConstructionTrace), SixFlowError> {
    if let Some(e) = inadmissibility_witness(g) {
        return Err(SixFlowError::NotFlowAdmissible(e));
    }
    check_even_eulerian(g, h).map_err(|e| match e {
        ReductionError::NotEvenEulerian(s) => SixFlowError::NotEvenEulerian(s),
        other => other.into(),
    })?;
    let r = three_regularize(g, &covering_pair_supereulerian(g, Some(h))?)?;
    let (fa, inner) = six_nzf_balanced_hamiltonian(&r.g_prime, &r.j)?;
    let out = pull_back(g, &fa);
    check_flow(g, &out, true)?;
    let mut trace = ConstructionTrace::new();
    trace.case("spanning-even-eulerian");
    trace.edges("H", h.edges());
    trace.absorb("reduced", r.trace);
    trace.absorb("cubic", inner);
    trace.achieved_k = Some(6);
    Ok((out, trace))
}

/// Two of three perfect matchings agree on the parity of their negative edges;
/// their union is a balanced Hamiltonian circuit.
pub fn six_nzf_kotzig(
    g: &SignedGraph,
    factors: [&SubgraphRef; 3],
) -> Result<(FlowAssignment, ConstructionTrace), SixFlowError> {
    for (i, f) in factors.iter().enumerate() {
        g.check_ref(f)
            .map_err(|e| SixFlowError::NotKotzig(e.to_string()))?;
        if (0..g.vertex_count()).any(|v| g.degree_in(f.edges(), v) != 1) {
            return Err(SixFlowError::NotKotzig(format!(
                "F{} is not a perfect matching",
                i + 1
            )));
        }
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let union =
        |i: usize, j: usize| -> BTreeSet<EdgeId> { factors[i].edges() | factors[j].edges() };
    if let Some(&(i, j)) = pairs
        .iter()
        .find(|&&(i, j)| !is_hamiltonian_circuit(g, &union(i, j)))
    {
        return Err(SixFlowError::NotKotzig(format!(
            "F{} and F{} do not form a Hamiltonian circuit",
            i + 1,
            j + 1
        )));
    }
    let parity = |f: &SubgraphRef| {
        f.edges()
            .iter()
            .filter(|&&e| g.e(e).sign.is_negative())
            .count()
            % 2
    };
    let &(i, j) = pairs
        .iter()
        .find(|&&(i, j)| parity(factors[i]) == parity(factors[j]))
        .expect("two of three parities agree");
    let h = g.subgraph(union(i, j))?;
    let (fa, inner) = six_nzf_balanced_hamiltonian(g, &h)?;
    let mut trace = ConstructionTrace::new();
    trace.case("kotzig");
    trace.note(format!("F{} and F{}", i + 1, j + 1));
    trace.absorb("hamiltonian", inner);
    trace.achieved_k = Some(6);
    Ok((fa, trace))
}
