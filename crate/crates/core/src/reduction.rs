//! Reduction of a graph with a covering pair of 2-flows to a cubic graph whose
//! 2-factor mirrors the first flow's support, and the resulting Z4 flows.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::admissibility::flow_admissible;
use crate::flow::{
    check_flow, tour_flow, z2_nzf_on_even, FlowAssignment, FlowError, FlowMode, Orientation,
    Violation,
};
use crate::graph::{
    edge_id_isomorphism, EdgeId, GraphError, Sign, SignedGraph, SubgraphRef, SwitchingSet, VertexId,
};
use crate::trace::ConstructionTrace;

/// Two even subgraphs covering every edge, each carried as a Z2 flow.
#[derive(Clone, Debug)]
pub struct CoveringPair {
    pub h1: SubgraphRef,
    pub h2: SubgraphRef,
    pub f1: FlowAssignment,
    pub f2: FlowAssignment,
}

/// A component of `H1` (its vertices and edges in the input) and the edges of its
/// image circuit in the 2-factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentImage {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub image: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub g_prime: SignedGraph,
    /// Added edges; exactly the ids not present in the input.
    pub s: BTreeSet<EdgeId>,
    pub j: SubgraphRef,
    pub bijection: Vec<ComponentImage>,
    /// Input vertex each new vertex contracts to.
    pub origin: Vec<VertexId>,
    pub trace: ConstructionTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("graph has no spanning Eulerian subgraph")]
    NotSupereulerian,
    #[error("cycle space of dimension {0} is too large to enumerate")]
    SearchTooLarge(usize),
    #[error("invalid covering pair: {0}")]
    InvalidPair(String),
    #[error("not a spanning even Eulerian subgraph: {0}")]
    NotEvenEulerian(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("constructed flow rejected: {0}")]
    Rejected(#[from] Violation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionViolation {
    #[error("vertex {0} does not have degree 3")]
    NotCubic(VertexId),
    #[error("vertex {0} does not have degree 2 in J")]
    NotTwoFactor(VertexId),
    #[error("J component containing edge {0} is not an even circuit")]
    OddCircuit(EdgeId),
    #[error("component {0} is not mapped onto a J component bijectively")]
    NotBijective(usize),
    #[error("component {0} changes sign")]
    SignMismatch(usize),
    #[error("added edge {0} is negative")]
    NegativeAdded(EdgeId),
    #[error("added edge set differs from the new edge ids")]
    AddedSetMismatch,
    #[error("contracting the added edges does not recover the input")]
    ContractionMismatch,
    #[error("input is flow-admissible but the cubic graph is not")]
    AdmissibilityLost,
}

const MAX_CORANK: usize = 26;

/// First spanning connected even subgraph in Gray-code order over the
/// fundamental circuits of a spanning forest.
pub fn find_spanning_eulerian(g: &SignedGraph) -> Result<Option<BTreeSet<EdgeId>>, ReductionError> {
    first_spanning_eulerian(g, |_| true)
}

/// As `find_spanning_eulerian`, restricted to an even number of negative edges.
pub fn find_spanning_even_eulerian(
    g: &SignedGraph,
) -> Result<Option<BTreeSet<EdgeId>>, ReductionError> {
    first_spanning_eulerian(g, |h| {
        h.iter().filter(|&&e| g.e(e).sign.is_negative()).count() % 2 == 0
    })
}

fn first_spanning_eulerian(
    g: &SignedGraph,
    accept: impl Fn(&BTreeSet<EdgeId>) -> bool,
) -> Result<Option<BTreeSet<EdgeId>>, ReductionError> {
    let nonempty = g.components().into_iter().filter(|c| c.len() > 1).count();
    if nonempty > 1 || (g.vertex_count() > 1 && (0..g.vertex_count()).any(|v| g.degree(v) == 0)) {
        return Ok(None);
    }
    let p = g.potentials(|_| true);
    let tree: BTreeSet<EdgeId> = p.parent.iter().flatten().copied().collect();
    let chords: Vec<EdgeId> = g
        .edge_ids()
        .into_iter()
        .filter(|e| !tree.contains(e))
        .collect();
    if chords.len() > MAX_CORANK {
        return Err(ReductionError::SearchTooLarge(chords.len()));
    }
    let circuits: Vec<Vec<EdgeId>> = chords
        .iter()
        .map(|&c| {
            let e = g.e(c);
            let mut path = g.tree_path(&p, e.u, e.v);
            path.push(c);
            path
        })
        .collect();
    let n = g.vertex_count();
    let mut current = BTreeSet::new();
    let mut deg = vec![0usize; n];
    let spanning = |deg: &[usize]| n <= 1 || deg.iter().all(|&d| d > 0);
    if spanning(&deg) && g.is_connected_set(&current) && accept(&current) {
        return Ok(Some(current));
    }
    for i in 1u64..(1u64 << chords.len()) {
        let flip = i.trailing_zeros() as usize;
        for &e in &circuits[flip] {
            let edge = g.e(e);
            if current.insert(e) {
                deg[edge.u] += 1;
                deg[edge.v] += 1;
            } else {
                current.remove(&e);
                deg[edge.u] -= 1;
                deg[edge.v] -= 1;
            }
        }
        if spanning(&deg) && g.is_connected_set(&current) && accept(&current) {
            return Ok(Some(current));
        }
    }
    Ok(None)
}

fn check_spanning_eulerian(g: &SignedGraph, h: &BTreeSet<EdgeId>) -> Result<(), String> {
    if !g.is_even_set(h) {
        return Err("a vertex has odd degree".into());
    }
    if !g.is_connected_set(h) {
        return Err("subgraph is disconnected".into());
    }
    if g.vertex_count() > 1 && (0..g.vertex_count()).any(|v| g.degree_in(h, v) == 0) {
        return Err("subgraph is not spanning".into());
    }
    Ok(())
}

/// `H1` is the given or discovered spanning Eulerian subgraph; `H2` is the
/// symmetric difference of the shortest `H1`-circuits through each other edge.
pub fn covering_pair_supereulerian(
    g: &SignedGraph,
    h1: Option<&SubgraphRef>,
) -> Result<CoveringPair, ReductionError> {
    let h1_edges = match h1 {
        Some(h) => {
            g.check_ref(h)?;
            check_spanning_eulerian(g, h.edges()).map_err(ReductionError::InvalidPair)?;
            h.edges().clone()
        }
        None => find_spanning_eulerian(g)?.ok_or(ReductionError::NotSupereulerian)?,
    };
    let mut h2_edges = BTreeSet::new();
    for (e, edge) in g.edges() {
        if h1_edges.contains(&e) {
            continue;
        }
        let path = g
            .shortest_path_in(&h1_edges, edge.u, edge.v)
            .expect("H1 is spanning and connected");
        for x in path.into_iter().chain([e]) {
            if !h2_edges.remove(&x) {
                h2_edges.insert(x);
            }
        }
    }
    let h1 = g.subgraph(h1_edges)?;
    let h2 = g.subgraph(h2_edges)?;
    Ok(CoveringPair {
        f1: z2_nzf_on_even(g, &h1)?,
        f2: z2_nzf_on_even(g, &h2)?,
        h1,
        h2,
    })
}

fn validate_pair(g: &SignedGraph, pair: &CoveringPair) -> Result<(), ReductionError> {
    g.check_ref(&pair.h1)?;
    g.check_ref(&pair.h2)?;
    let invalid = |s: &str| Err(ReductionError::InvalidPair(s.to_string()));
    if !g.is_even_set(pair.h1.edges()) || !g.is_even_set(pair.h2.edges()) {
        return invalid("a subgraph is not even");
    }
    if g.edges()
        .any(|(e, _)| !pair.h1.contains(e) && !pair.h2.contains(e))
    {
        return invalid("supports do not cover every edge");
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) == 0) {
        return Err(ReductionError::InvalidPair(format!(
            "vertex {v} is isolated"
        )));
    }
    for (f, h) in [(&pair.f1, &pair.h1), (&pair.f2, &pair.h2)] {
        if f.values.len() != g.edge_id_bound()
            || g.edges().any(|(e, _)| (f.values[e] != 0) != h.contains(e))
        {
            return invalid("flow support differs from its subgraph");
        }
    }
    Ok(())
}

/// Splits each `H1` component along its Euler tour into a circuit, completes the
/// split clusters with positive digons or cliques, and blows every vertex of
/// degree other than 3 up into a positive circuit.
pub fn three_regularize(
    g: &SignedGraph,
    pair: &CoveringPair,
) -> Result<ReductionResult, ReductionError> {
    validate_pair(g, pair)?;
    let n = g.vertex_count();
    let h1 = pair.h1.edges();
    let mut trace = ConstructionTrace::new();
    let mut w = g.clone();
    let mut copies: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut origin: Vec<VertexId> = (0..n).collect();

    let components = g.edge_components(h1);
    for comp in &components {
        let start = comp
            .iter()
            .map(|&e| g.e(e).u.min(g.e(e).v))
            .min()
            .expect("nonempty");
        let tour = g.euler_tour_from(comp, start)?;
        for x in 2..tour.len() {
            let h = tour[x];
            let v = g.e(h.edge).endpoint(h.side);
            if w.degree_in(comp, v) > 2 {
                let pair_edges: BTreeSet<EdgeId> = [tour[x - 1].edge, h.edge].into();
                let (next, fresh) = w.split_vertex(v, &pair_edges)?;
                w = next;
                copies[v].push(fresh);
                origin.push(v);
            }
        }
    }

    let mut s = BTreeSet::new();
    for (v, cluster) in copies.iter().enumerate() {
        match cluster.len() {
            1 => {}
            2 => {
                for _ in 0..2 {
                    s.insert(w.push_edge(cluster[0], cluster[1], Sign::Positive));
                }
            }
            _ => {
                for a in 0..cluster.len() {
                    for b in a + 1..cluster.len() {
                        s.insert(w.push_edge(cluster[a], cluster[b], Sign::Positive));
                    }
                }
            }
        }
        if cluster.len() > 1 {
            trace.vertices(format!("split/{v}"), cluster);
        }
    }

    let mut j: BTreeSet<EdgeId> = h1.clone();
    let mut blown = Vec::new();
    for x in 0..w.vertex_count() {
        let d = w.degree(x);
        let incident: Vec<EdgeId> = w.incident(x).iter().map(|h| h.edge).collect();
        let on_circuit: Vec<EdgeId> = incident
            .iter()
            .copied()
            .filter(|e| h1.contains(e))
            .collect();
        if d == 3 && on_circuit.len() == 2 {
            continue;
        }
        let mut ring = vec![x];
        for _ in 1..d {
            ring.push(w.push_vertex());
            origin.push(origin[x]);
        }
        let attach: Vec<EdgeId> = if on_circuit.len() == 2 {
            let rest = incident.iter().copied().filter(|e| !h1.contains(e));
            on_circuit.iter().copied().chain(rest).collect()
        } else {
            incident.clone()
        };
        for (slot, &e) in attach.iter().enumerate().skip(1) {
            let side = w.e(e).side_of(x).expect("incident");
            w.reattach(e, side, ring[slot]);
        }
        for a in 0..d {
            let e = w.push_edge(ring[a], ring[(a + 1) % d], Sign::Positive);
            s.insert(e);
            if a > 0 || on_circuit.is_empty() {
                j.insert(e);
            }
        }
        blown.push(x);
    }
    trace.vertices("blown-up", &blown);

    let g_prime = w;
    let j_ref = g_prime.subgraph(j.iter().copied())?;
    let j_components = g_prime.edge_components(&j);
    let find_image = |e: EdgeId| -> Vec<EdgeId> {
        j_components
            .iter()
            .find(|c| c.contains(&e))
            .map(|c| c.iter().copied().collect())
            .unwrap_or_default()
    };
    let mut bijection = Vec::new();
    for comp in &components {
        let first = *comp.iter().next().expect("nonempty");
        let vertices: BTreeSet<VertexId> =
            comp.iter().flat_map(|&e| [g.e(e).u, g.e(e).v]).collect();
        bijection.push(ComponentImage {
            vertices: vertices.into_iter().collect(),
            edges: comp.iter().copied().collect(),
            image: find_image(first),
        });
    }
    for v in (0..n).filter(|&v| g.degree_in(h1, v) == 0) {
        let ring_edge = g_prime
            .incident(v)
            .iter()
            .map(|h| h.edge)
            .find(|e| j.contains(e));
        bijection.push(ComponentImage {
            vertices: vec![v],
            edges: Vec::new(),
            image: ring_edge.map(find_image).unwrap_or_default(),
        });
    }
    trace.case("three-regularize");
    trace.edges("S", &s);
    trace.edges("J", &j);
    trace.edges("H1", h1);
    trace.edges("H2", pair.h2.edges());
    Ok(ReductionResult {
        g_prime,
        s,
        j: j_ref,
        bijection,
        origin,
        trace,
    })
}

pub fn verify_reduction(g: &SignedGraph, r: &ReductionResult) -> Result<(), ReductionViolation> {
    let gp = &r.g_prime;
    if let Some(v) = (0..gp.vertex_count()).find(|&v| gp.degree(v) != 3) {
        return Err(ReductionViolation::NotCubic(v));
    }
    let j = r.j.edges();
    if let Some(&e) = j.iter().find(|&&e| gp.edge(e).is_none()) {
        return Err(ReductionViolation::OddCircuit(e));
    }
    if let Some(v) = (0..gp.vertex_count()).find(|&v| gp.degree_in(j, v) != 2) {
        return Err(ReductionViolation::NotTwoFactor(v));
    }
    let j_components = gp.edge_components(j);
    if let Some(c) = j_components.iter().find(|c| c.len() % 2 == 1) {
        return Err(ReductionViolation::OddCircuit(
            *c.iter().next().expect("nonempty"),
        ));
    }
    let mut hit = BTreeSet::new();
    for (i, img) in r.bijection.iter().enumerate() {
        let image: BTreeSet<EdgeId> = img.image.iter().copied().collect();
        let first = image.iter().next().copied();
        let is_component =
            first.is_some_and(|f| j_components.iter().any(|c| c.contains(&f) && *c == image));
        if !is_component || !hit.insert(img.image.clone()) {
            return Err(ReductionViolation::NotBijective(i));
        }
        let edges: BTreeSet<EdgeId> = img.edges.iter().copied().collect();
        if edges.iter().any(|&e| g.edge(e).is_none()) {
            return Err(ReductionViolation::NotBijective(i));
        }
        if g.sign_of_edges(&edges) != gp.sign_of_edges(&image) {
            return Err(ReductionViolation::SignMismatch(i));
        }
    }
    if hit.len() != j_components.len() {
        return Err(ReductionViolation::NotBijective(r.bijection.len()));
    }
    if let Some(&e) =
        r.s.iter()
            .find(|&&e| gp.edge(e).is_some_and(|x| x.sign.is_negative()))
    {
        return Err(ReductionViolation::NegativeAdded(e));
    }
    let added: BTreeSet<EdgeId> = gp
        .edge_ids()
        .into_iter()
        .filter(|&e| g.edge(e).is_none())
        .collect();
    if added != r.s {
        return Err(ReductionViolation::AddedSetMismatch);
    }
    let contracted = gp
        .contract_edges(&r.s)
        .map_err(|_| ReductionViolation::ContractionMismatch)?;
    if !contracted.loops_removed.is_empty() || edge_id_isomorphism(&contracted.graph, g).is_none() {
        return Err(ReductionViolation::ContractionMismatch);
    }
    if flow_admissible(g) && !flow_admissible(gp) {
        return Err(ReductionViolation::AdmissibilityLost);
    }
    Ok(())
}

/// Restriction of a flow on the reduced graph to the input's edges.
pub fn pull_back(g: &SignedGraph, fa: &FlowAssignment) -> FlowAssignment {
    let bound = g.edge_id_bound();
    let pairs = (0..bound)
        .map(|e| {
            if g.edge(e).is_some() {
                fa.orientation.at(e)
            } else {
                [0, 0]
            }
        })
        .collect();
    let values = (0..bound)
        .map(|e| if g.edge(e).is_some() { fa.values[e] } else { 0 })
        .collect();
    FlowAssignment {
        orientation: Orientation::from_pairs(pairs),
        values,
        mode: fa.mode,
    }
}

/// Switching that makes the edges of a balanced circuit `c` positive.
pub(crate) fn switching_for_circuit(g: &SignedGraph, c: &BTreeSet<EdgeId>) -> SwitchingSet {
    let mut path = c.clone();
    if let Some(&last) = c.iter().next_back() {
        path.remove(&last);
    }
    g.switching_for_forest(&path)
}

pub(crate) fn check_even_eulerian(g: &SignedGraph, h: &SubgraphRef) -> Result<(), ReductionError> {
    g.check_ref(h)?;
    check_spanning_eulerian(g, h.edges()).map_err(ReductionError::NotEvenEulerian)?;
    if g.sign_of_edges(h.edges()) == Sign::Negative {
        return Err(ReductionError::NotEvenEulerian(
            "odd number of negative edges".into(),
        ));
    }
    Ok(())
}

/// A Z4 flow: on the reduced cubic graph the 2-factor is one balanced even
/// circuit, valued alternately 1 and -1; every other edge carries 2.
pub fn z4_nzf_from_even_eulerian(
    g: &SignedGraph,
    h: &SubgraphRef,
) -> Result<(FlowAssignment, ConstructionTrace), ReductionError> {
    check_even_eulerian(g, h)?;
    let mode = FlowMode::Modular(4);
    if h.len() == g.edge_count() {
        let start = h
            .edges()
            .iter()
            .map(|&e| g.e(e).u.min(g.e(e).v))
            .min()
            .unwrap_or(0);
        let (fa, _) = tour_flow(g, h.edges(), start, mode)?;
        check_flow(g, &fa, true)?;
        let mut trace = ConstructionTrace::new();
        trace.case("direct-tour");
        trace.achieved_k = Some(4);
        return Ok((fa, trace));
    }
    let pair = covering_pair_supereulerian(g, Some(h))?;
    let r = three_regularize(g, &pair)?;
    let gp = &r.g_prime;
    let j = r.j.edges();
    let u = switching_for_circuit(gp, j);
    let gs = gp.switch_at(&u)?;
    let start = j
        .iter()
        .map(|&e| gs.e(e).u.min(gs.e(e).v))
        .min()
        .expect("nonempty");
    let tour = gs.euler_tour_from(j, start)?;
    let mut fa = FlowAssignment::zero(&gs, mode);
    for (i, h) in tour.iter().enumerate() {
        let mut t = [0i8; 2];
        t[h.side] = 1;
        t[1 - h.side] = -1;
        fa.orientation.set(h.edge, t);
        fa.values[h.edge] = if i % 2 == 0 { 1 } else { 3 };
    }
    let default = crate::flow::default_orientation(&gs);
    for (e, _) in gs.edges() {
        if !j.contains(&e) {
            fa.orientation.set(e, default.at(e));
            fa.values[e] = 2;
        }
    }
    check_flow(&gs, &fa, true)?;
    let unswitched = fa.switched(&gs, &u);
    let out = pull_back(g, &unswitched);
    check_flow(g, &out, true)?;
    let mut trace = r.trace;
    trace.case("z4-alternating");
    trace.achieved_k = Some(4);
    Ok((out, trace))
}
