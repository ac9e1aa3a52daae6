//! Bidirected orientations, integer and modular flows, and flow arithmetic.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::certificate::Certificate;
use crate::graph::{
    EdgeId, GraphError, HalfEdge, SignedGraph, SubgraphRef, SwitchingSet, VertexId,
};
use crate::search::{self, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlowMode {
    Integer(i64),
    Modular(i64),
}

impl FlowMode {
    pub fn k(self) -> i64 {
        match self {
            FlowMode::Integer(k) | FlowMode::Modular(k) => k,
        }
    }

    pub fn is_modular(self) -> bool {
        matches!(self, FlowMode::Modular(_))
    }
}

/// Per half edge `tau` in {+1, -1}, indexed by edge id; `[0, 0]` marks an absent id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    tau: Vec<[i8; 2]>,
}

impl Orientation {
    pub fn from_pairs(tau: Vec<[i8; 2]>) -> Orientation {
        Orientation { tau }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn at(&self, e: EdgeId) -> [i8; 2] {
        self.tau[e]
    }

    pub fn tau(&self, h: HalfEdge) -> i64 {
        self.tau[h.edge][h.side] as i64
    }

    pub(crate) fn set(&mut self, e: EdgeId, t: [i8; 2]) {
        self.tau[e] = t;
    }

    /// First edge violating `tau(h_u) * tau(h_v) = -sigma(e)`.
    pub fn law_violation(&self, g: &SignedGraph) -> Option<EdgeId> {
        if self.tau.len() != g.edge_id_bound() {
            return Some(self.tau.len().min(g.edge_id_bound()));
        }
        g.edges().map(|(e, _)| e).find(|&e| {
            let [a, b] = self.tau[e];
            let unit = |x: i8| x == 1 || x == -1;
            !(unit(a) && unit(b)) || (a as i64) * (b as i64) != -g.e(e).sign.value()
        })
    }

    /// Negates `tau` on every half edge at a vertex of `u`.
    pub fn switched(&self, g: &SignedGraph, u: &SwitchingSet) -> Orientation {
        let mut out = self.clone();
        for (e, edge) in g.edges() {
            for side in 0..2 {
                if u.contains(edge.endpoint(side)) {
                    out.tau[e][side] = -out.tau[e][side];
                }
            }
        }
        out
    }
}

/// Positive edges point from the smaller endpoint id; negative edges are extroverted.
pub fn default_orientation(g: &SignedGraph) -> Orientation {
    let mut tau = vec![[0i8; 2]; g.edge_id_bound()];
    for (e, edge) in g.edges() {
        tau[e] = if edge.sign.is_negative() {
            [1, 1]
        } else if edge.u < edge.v {
            [1, -1]
        } else {
            [-1, 1]
        };
    }
    Orientation { tau }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlowAssignment {
    pub orientation: Orientation,
    pub values: Vec<i64>,
    pub mode: FlowMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("flow modes differ")]
    ModeMismatch,
    #[error("flows belong to different graphs")]
    GraphMismatch,
    #[error("no value for edge {0}")]
    MissingValue(EdgeId),
    #[error("subgraph has a vertex of odd degree")]
    NotEven,
    #[error("subgraph contains negative edge {0}")]
    NegativeEdgePresent(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("support contains an odd number of negative edges")]
    OddNegativeSupport,
    #[error("constraint search exhausted on an input that must be solvable")]
    SearchExhausted,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl FlowAssignment {
    pub fn zero(g: &SignedGraph, mode: FlowMode) -> FlowAssignment {
        FlowAssignment {
            orientation: default_orientation(g),
            values: vec![0; g.edge_id_bound()],
            mode,
        }
    }

    pub fn value(&self, e: EdgeId) -> i64 {
        self.values[e]
    }

    pub fn support(&self) -> BTreeSet<EdgeId> {
        (0..self.values.len())
            .filter(|&e| self.values[e] != 0)
            .collect()
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn with_mode(mut self, mode: FlowMode) -> FlowAssignment {
        if let FlowMode::Modular(k) = mode {
            for v in &mut self.values {
                *v = v.rem_euclid(k);
            }
        }
        self.mode = mode;
        self
    }

    /// Same flow written against `target`; values negate where both halves flip.
    pub fn reexpressed(&self, target: &Orientation) -> Result<FlowAssignment, FlowError> {
        if target.len() != self.orientation.len() {
            return Err(FlowError::GraphMismatch);
        }
        let mut out = self.clone();
        out.orientation = target.clone();
        for e in 0..self.values.len() {
            let [a, b] = self.orientation.at(e);
            let [c, d] = target.at(e);
            if a == c && b == d {
                continue;
            }
            if a == -c && b == -d {
                out.values[e] = negate(self.values[e], self.mode);
            } else {
                return Err(FlowError::GraphMismatch);
            }
        }
        Ok(out)
    }

    /// The same flow on the switched graph: `tau` negated at switched vertices.
    pub fn switched(&self, g: &SignedGraph, u: &SwitchingSet) -> FlowAssignment {
        FlowAssignment {
            orientation: self.orientation.switched(g, u),
            values: self.values.clone(),
            mode: self.mode,
        }
    }

    /// Values in {0..k-1} become their symmetric representatives in (-k/2, k/2].
    pub fn centered(&self) -> Vec<i64> {
        match self.mode {
            FlowMode::Integer(_) => self.values.clone(),
            FlowMode::Modular(k) => self
                .values
                .iter()
                .map(|&v| if v > k / 2 { v - k } else { v })
                .collect(),
        }
    }
}

fn negate(v: i64, mode: FlowMode) -> i64 {
    match mode {
        FlowMode::Integer(_) => -v,
        FlowMode::Modular(k) => (-v).rem_euclid(k),
    }
}

pub fn boundary(g: &SignedGraph, fa: &FlowAssignment, v: VertexId) -> Result<i64, FlowError> {
    let mut sum = 0i64;
    for h in g.incident(v) {
        let value = *fa
            .values
            .get(h.edge)
            .ok_or(FlowError::MissingValue(h.edge))?;
        if h.edge >= fa.orientation.len() {
            return Err(FlowError::MissingValue(h.edge));
        }
        sum += fa.orientation.tau(*h) * value;
    }
    Ok(match fa.mode {
        FlowMode::Integer(_) => sum,
        FlowMode::Modular(k) => sum.rem_euclid(k),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("flow covers {got} edge slots but the graph has {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("orientation of edge {0} violates the consistency law")]
    OrientationLaw(EdgeId),
    #[error("edge {edge} has value {value} outside the range allowed by k = {k}")]
    Bound { edge: EdgeId, value: i64, k: i64 },
    #[error("edge {0} carries zero")]
    Zero(EdgeId),
    #[error("boundary at vertex {vertex} is {value}")]
    Boundary { vertex: VertexId, value: i64 },
}

/// Checks the flow conditions; the first offending edge or vertex is reported.
pub fn check_flow(
    g: &SignedGraph,
    fa: &FlowAssignment,
    require_nowhere_zero: bool,
) -> Result<(), Violation> {
    let expected = g.edge_id_bound();
    if fa.values.len() != expected || fa.orientation.len() != expected {
        return Err(Violation::ShapeMismatch {
            expected,
            got: fa.values.len().min(fa.orientation.len()),
        });
    }
    if let Some(e) = fa.orientation.law_violation(g) {
        return Err(Violation::OrientationLaw(e));
    }
    let k = fa.mode.k();
    for (e, _) in g.edges() {
        let value = fa.values[e];
        let in_range = match fa.mode {
            FlowMode::Integer(k) => value.abs() < k,
            FlowMode::Modular(k) => (0..k).contains(&value),
        };
        if !in_range {
            return Err(Violation::Bound { edge: e, value, k });
        }
    }
    if require_nowhere_zero {
        if let Some((e, _)) = g.edges().find(|(e, _)| fa.values[*e] == 0) {
            return Err(Violation::Zero(e));
        }
    }
    for v in 0..g.vertex_count() {
        let value = boundary(g, fa, v).expect("shape checked");
        if value != 0 {
            return Err(Violation::Boundary { vertex: v, value });
        }
    }
    Ok(())
}

pub fn verify_flow(
    g: &SignedGraph,
    fa: &FlowAssignment,
    require_nowhere_zero: bool,
) -> Result<Certificate, Violation> {
    check_flow(g, fa, require_nowhere_zero)?;
    Ok(Certificate::flow(g, fa, "verify_flow"))
}

/// `a * f1 + b * f2` written in `f1`'s orientation.
///
/// Integer results carry the bound `|a|(k1-1) + |b|(k2-1) + 1`; callers that
/// know a tighter bound re-declare it with [`FlowAssignment::with_mode`].
pub fn combine(
    a: i64,
    f1: &FlowAssignment,
    b: i64,
    f2: &FlowAssignment,
) -> Result<FlowAssignment, FlowError> {
    let mode = match (f1.mode, f2.mode) {
        (FlowMode::Integer(k1), FlowMode::Integer(k2)) => {
            FlowMode::Integer(a.abs() * (k1 - 1) + b.abs() * (k2 - 1) + 1)
        }
        (FlowMode::Modular(k1), FlowMode::Modular(k2)) if k1 == k2 => FlowMode::Modular(k1),
        _ => return Err(FlowError::ModeMismatch),
    };
    if f1.values.len() != f2.values.len() {
        return Err(FlowError::GraphMismatch);
    }
    let f2 = f2.reexpressed(&f1.orientation)?;
    let values = f1
        .values
        .iter()
        .zip(&f2.values)
        .map(|(&x, &y)| {
            let v = a * x + b * y;
            match mode {
                FlowMode::Integer(_) => v,
                FlowMode::Modular(k) => v.rem_euclid(k),
            }
        })
        .collect();
    Ok(FlowAssignment {
        orientation: f1.orientation.clone(),
        values,
        mode,
    })
}

/// Value-1 flow along an Euler tour of `edges` started at `start`.
///
/// Polarity is propagated so every intermediate visit cancels; the return
/// value is the boundary left at `start`, which is 0 when the tour has an even
/// number of negative edges and 2 otherwise.
pub fn tour_flow(
    g: &SignedGraph,
    edges: &BTreeSet<EdgeId>,
    start: VertexId,
    mode: FlowMode,
) -> Result<(FlowAssignment, i64), FlowError> {
    let tour = g.euler_tour_from(edges, start)?;
    let mut fa = FlowAssignment::zero(g, mode);
    let mut depart = 1i8;
    let mut arrive = 0i8;
    for h in tour {
        let sign = g.e(h.edge).sign.value() as i8;
        arrive = -sign * depart;
        let mut t = [0i8; 2];
        t[h.side] = depart;
        t[1 - h.side] = arrive;
        fa.orientation.set(h.edge, t);
        fa.values[h.edge] = 1;
        depart = -arrive;
    }
    let defect = if edges.is_empty() {
        0
    } else {
        1 + arrive as i64
    };
    Ok((fa, defect))
}

pub fn two_flow_on_positive_even(
    g: &SignedGraph,
    h: &SubgraphRef,
) -> Result<FlowAssignment, FlowError> {
    g.check_ref(h)?;
    if !g.is_even_set(h.edges()) {
        return Err(FlowError::NotEven);
    }
    if let Some(&e) = h.edges().iter().find(|&&e| g.e(e).sign.is_negative()) {
        return Err(FlowError::NegativeEdgePresent(e));
    }
    let mut out = FlowAssignment::zero(g, FlowMode::Integer(2));
    for comp in g.edge_components(h.edges()) {
        let start = comp
            .iter()
            .map(|&e| g.e(e).u.min(g.e(e).v))
            .min()
            .expect("nonempty");
        let (part, _) = tour_flow(g, &comp, start, FlowMode::Integer(2))?;
        for &e in &comp {
            out.orientation.set(e, part.orientation.at(e));
            out.values[e] = 1;
        }
    }
    Ok(out)
}

pub fn z2_nzf_on_even(g: &SignedGraph, h: &SubgraphRef) -> Result<FlowAssignment, FlowError> {
    g.check_ref(h)?;
    if !g.is_even_set(h.edges()) {
        return Err(FlowError::NotEven);
    }
    let mut out = FlowAssignment::zero(g, FlowMode::Modular(2));
    for &e in h.edges() {
        out.values[e] = 1;
    }
    Ok(out)
}

/// Integer 3-flow whose set of edges valued +-1 is exactly `supp(f1)`.
pub fn lift_z2_to_3flow(g: &SignedGraph, f1: &FlowAssignment) -> Result<FlowAssignment, FlowError> {
    if f1.mode != FlowMode::Modular(2) || f1.values.len() != g.edge_id_bound() {
        return Err(FlowError::ModeMismatch);
    }
    let support: BTreeSet<EdgeId> = g
        .edges()
        .filter(|(e, _)| f1.values[*e] % 2 != 0)
        .map(|(e, _)| e)
        .collect();
    if !g.is_even_set(&support) {
        return Err(FlowError::NotEven);
    }
    let nonempty = g
        .components()
        .into_iter()
        .filter(|c| c.iter().any(|&v| g.degree(v) > 0))
        .count();
    if nonempty > 1 {
        return Err(FlowError::Disconnected);
    }
    if support
        .iter()
        .filter(|&&e| g.e(e).sign.is_negative())
        .count()
        % 2
        == 1
    {
        return Err(FlowError::OddNegativeSupport);
    }
    let tau = default_orientation(g);
    let domains: Vec<Vec<i64>> = (0..g.edge_id_bound())
        .map(|e| {
            if support.contains(&e) {
                vec![-1, 1]
            } else {
                vec![-2, 0, 2]
            }
        })
        .collect();
    match search::solve(g, &tau, &domains, None, None).0 {
        Outcome::Found(values) => Ok(FlowAssignment {
            orientation: tau,
            values,
            mode: FlowMode::Integer(3),
        }),
        _ => Err(FlowError::SearchExhausted),
    }
}

/// Copies the values of `part` on `edges` into `acc`, adopting `part`'s orientation there.
pub(crate) fn overlay(
    acc: &mut FlowAssignment,
    part: &FlowAssignment,
    edges: impl IntoIterator<Item = EdgeId>,
) {
    for e in edges {
        acc.orientation.set(e, part.orientation.at(e));
        acc.values[e] = part.values[e];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::{Negative as N, Positive as P};
    use crate::graph::{Sign, SwitchingSet};
    use crate::ladders::template_flow;
    use crate::templates::active;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(VertexId, VertexId, Sign)]) -> SignedGraph {
        SignedGraph::build_graph(n, edges).unwrap()
    }

    fn circuit(n: usize, negatives: usize) -> SignedGraph {
        let edges: Vec<_> = (0..n)
            .map(|i| (i, (i + 1) % n, if i < negatives { N } else { P }))
            .collect();
        graph(n, &edges)
    }

    #[test]
    fn default_orientation_examples() {
        let pos = graph(2, &[(0, 1, P)]);
        assert_eq!(default_orientation(&pos).at(0), [1, -1]);
        let neg = graph(2, &[(1, 0, N)]);
        assert_eq!(default_orientation(&neg).at(0), [1, 1]);
        let mixed = graph(3, &[(2, 0, P), (0, 1, N), (1, 2, P), (2, 1, N)]);
        assert_eq!(default_orientation(&mixed).law_violation(&mixed), None);
        assert_eq!(default_orientation(&mixed).at(0), [-1, 1]);
    }

    #[test]
    fn boundary_examples() {
        let g = graph(3, &[(0, 1, P), (1, 0, P)]);
        let mut fa = FlowAssignment::zero(&g, FlowMode::Integer(2));
        fa.orientation = Orientation::from_pairs(vec![[1, -1], [1, -1]]);
        fa.values = vec![1, 1];
        assert_eq!(boundary(&g, &fa, 2), Ok(0));
        assert_eq!(boundary(&g, &fa, 0), Ok(0));
        assert_eq!(boundary(&g, &fa, 1), Ok(0));
        fa.values = vec![1];
        assert_eq!(boundary(&g, &fa, 0), Err(FlowError::MissingValue(1)));
    }

    fn fig(name: &str) -> (SignedGraph, FlowAssignment, i64) {
        let t = active().unwrap().get(name).unwrap();
        let (spec, fa) = template_flow(t).unwrap();
        let g = crate::ladders::gen_ladder(&spec).unwrap();
        (g, fa, t.k)
    }

    #[test]
    fn fig8_verifies_and_rejects_a_zeroed_edge() {
        let (g, fa, k) = fig("fig8");
        assert_eq!(k, 4);
        let cert = verify_flow(&g, &fa, true).unwrap();
        assert_eq!(cert.kind(), "flow");
        let mut bad = fa.clone();
        bad.values[3] = 0;
        assert_eq!(check_flow(&g, &bad, true), Err(Violation::Zero(3)));
        assert!(check_flow(&g, &bad, false).is_err(), "boundary breaks too");
    }

    #[test]
    fn verify_reports_bound_and_boundary() {
        let g = circuit(3, 0);
        let (fa, _) = tour_flow(
            &g,
            &g.edge_ids().into_iter().collect(),
            0,
            FlowMode::Integer(2),
        )
        .unwrap();
        check_flow(&g, &fa, true).unwrap();
        let mut big = fa.clone();
        big.values = vec![2, 2, 2];
        assert_eq!(
            check_flow(&g, &big, true),
            Err(Violation::Bound {
                edge: 0,
                value: 2,
                k: 2
            })
        );
        let mut off = fa.clone();
        off.values[1] = -1;
        assert!(matches!(
            check_flow(&g, &off, true),
            Err(Violation::Boundary { .. })
        ));
    }

    #[test]
    fn combine_examples() {
        let (g, f, _) = fig("fig9");
        let other = FlowAssignment::zero(&g, FlowMode::Integer(3));
        assert_eq!(combine(1, &f, 0, &other).unwrap().values, f.values);
        let zero = combine(1, &f, -1, &f).unwrap();
        assert!(zero.values.iter().all(|&v| v == 0));
        let m = FlowAssignment::zero(&g, FlowMode::Modular(3));
        assert_eq!(combine(1, &f, 1, &m), Err(FlowError::ModeMismatch));
        let small = FlowAssignment::zero(&circuit(3, 0), FlowMode::Integer(2));
        assert_eq!(combine(1, &f, 1, &small), Err(FlowError::GraphMismatch));
    }

    #[test]
    fn three_times_a_hamiltonian_2_flow_lifts_a_3_flow_to_6() {
        // positive cube with Hamiltonian circuit 0-1-2-3-7-6-5-4
        let g = graph(
            8,
            &[
                (0, 1, P),
                (1, 2, P),
                (2, 3, P),
                (3, 7, P),
                (7, 6, P),
                (6, 5, P),
                (5, 4, P),
                (4, 0, P),
                (0, 3, P),
                (1, 5, P),
                (2, 6, P),
                (4, 7, P),
            ],
        );
        let h = g.subgraph(0..8).unwrap();
        let f2 = two_flow_on_positive_even(&g, &h).unwrap();
        // chords plus a perfect matching of H close up to an even subgraph
        let mut even = FlowAssignment::zero(&g, FlowMode::Modular(2));
        for e in [8, 9, 10, 11, 0, 2, 4, 6] {
            even.values[e] = 1;
        }
        let f1 = lift_z2_to_3flow(&g, &even).unwrap();
        let six = combine(1, &f1, 3, &f2)
            .unwrap()
            .with_mode(FlowMode::Integer(6));
        check_flow(&g, &six, true).unwrap();
        let supp: BTreeSet<EdgeId> = (0..12).filter(|&e| f1.values[e].abs() == 1).collect();
        assert_eq!(supp, BTreeSet::from([0, 2, 4, 6, 8, 9, 10, 11]));
    }

    #[test]
    fn two_flow_examples() {
        let c = circuit(4, 0);
        let f = two_flow_on_positive_even(&c, &c.full_subgraph()).unwrap();
        check_flow(&c, &f, true).unwrap();
        assert!(f.values.iter().all(|&v| v == 1));
        let eight = graph(
            5,
            &[
                (0, 1, P),
                (1, 2, P),
                (2, 0, P),
                (0, 3, P),
                (3, 4, P),
                (4, 0, P),
            ],
        );
        check_flow(
            &eight,
            &two_flow_on_positive_even(&eight, &eight.full_subgraph()).unwrap(),
            true,
        )
        .unwrap();
        let neg = circuit(4, 2);
        assert_eq!(
            two_flow_on_positive_even(&neg, &neg.full_subgraph()),
            Err(FlowError::NegativeEdgePresent(0))
        );
        let path = graph(3, &[(0, 1, P), (1, 2, P)]);
        assert_eq!(
            two_flow_on_positive_even(&path, &path.full_subgraph()),
            Err(FlowError::NotEven)
        );
    }

    #[test]
    fn z2_examples() {
        for negatives in 0..4 {
            let c = circuit(5, negatives);
            let f = z2_nzf_on_even(&c, &c.full_subgraph()).unwrap();
            assert_eq!(f.values, vec![1; 5]);
            check_flow(&c, &f, true).unwrap();
        }
        let path = graph(3, &[(0, 1, P), (1, 2, N)]);
        assert_eq!(
            z2_nzf_on_even(&path, &path.full_subgraph()),
            Err(FlowError::NotEven)
        );
    }

    /// Every integer 3-flow whose +-1 edges are exactly `support`.
    fn all_lifts(g: &SignedGraph, support: &BTreeSet<EdgeId>) -> Vec<Vec<i64>> {
        let tau = default_orientation(g);
        let domains: Vec<&[i64]> = (0..g.edge_count())
            .map(|e| {
                if support.contains(&e) {
                    &[1, -1][..]
                } else {
                    &[0, 2, -2][..]
                }
            })
            .collect();
        let total: usize = domains.iter().map(|d| d.len()).product();
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let values: Vec<i64> = domains
                .iter()
                .map(|d| {
                    let v = d[c % d.len()];
                    c /= d.len();
                    v
                })
                .collect();
            let fa = FlowAssignment {
                orientation: tau.clone(),
                values: values.clone(),
                mode: FlowMode::Integer(3),
            };
            if (0..g.vertex_count()).all(|v| boundary(g, &fa, v) == Ok(0)) {
                out.push(values);
            }
        }
        out
    }

    #[test]
    fn lift_examples() {
        let c = circuit(4, 0);
        let f1 = z2_nzf_on_even(&c, &c.full_subgraph()).unwrap();
        let f2 = lift_z2_to_3flow(&c, &f1).unwrap();
        assert!(f2.values.iter().all(|v| v.abs() == 1));
        check_flow(&c, &f2, true).unwrap();
        // 8 edges: a 4-circuit with negative edges 1 and 3, plus two chords doubled
        let g = graph(
            4,
            &[
                (0, 1, P),
                (1, 2, N),
                (2, 3, P),
                (3, 0, N),
                (0, 2, P),
                (0, 2, N),
                (1, 3, P),
                (1, 3, P),
            ],
        );
        for support in [
            BTreeSet::from([0, 1, 2, 3]),
            BTreeSet::from([6, 7]),
            BTreeSet::from([0, 1, 5]),
        ] {
            let mut f1 = FlowAssignment::zero(&g, FlowMode::Modular(2));
            for &e in &support {
                f1.values[e] = 1;
            }
            let expected = all_lifts(&g, &support);
            match lift_z2_to_3flow(&g, &f1) {
                Ok(f2) => {
                    check_flow(&g, &f2, false).unwrap();
                    assert!(expected.contains(&f2.values));
                }
                Err(e) => assert!(expected.is_empty(), "{e}"),
            }
            assert!(!expected.is_empty());
        }
        let mut odd = FlowAssignment::zero(&g, FlowMode::Modular(2));
        odd.values[4] = 1;
        odd.values[5] = 1;
        assert_eq!(
            lift_z2_to_3flow(&g, &odd),
            Err(FlowError::OddNegativeSupport)
        );
        let apart = graph(
            6,
            &[
                (0, 1, P),
                (1, 2, P),
                (2, 0, P),
                (3, 4, P),
                (4, 5, P),
                (5, 3, P),
            ],
        );
        let f = FlowAssignment::zero(&apart, FlowMode::Modular(2));
        assert_eq!(lift_z2_to_3flow(&apart, &f), Err(FlowError::Disconnected));
    }

    fn arb_flow() -> impl Strategy<
        Value = (
            SignedGraph,
            FlowAssignment,
            FlowAssignment,
            BTreeSet<VertexId>,
        ),
    > {
        (2usize..6).prop_flat_map(|n| {
            (
                proptest::collection::vec(
                    (
                        0..n,
                        1..n,
                        any::<bool>(),
                        -3i64..=3,
                        -3i64..=3,
                        any::<bool>(),
                    ),
                    1..12,
                ),
                proptest::collection::btree_set(0..n, 0..=n),
            )
                .prop_map(move |(raw, u)| {
                    let edges: Vec<_> = raw
                        .iter()
                        .map(|&(a, d, neg, ..)| (a, (a + d) % n, if neg { N } else { P }))
                        .collect();
                    let g = SignedGraph::build_graph(n, &edges).unwrap();
                    let mut tau = default_orientation(&g);
                    for (e, r) in raw.iter().enumerate() {
                        if r.5 {
                            let [a, b] = tau.at(e);
                            tau.set(e, [-a, -b]);
                        }
                    }
                    let f1 = FlowAssignment {
                        orientation: tau,
                        values: raw.iter().map(|r| r.3).collect(),
                        mode: FlowMode::Integer(4),
                    };
                    let f2 = FlowAssignment {
                        orientation: default_orientation(&g),
                        values: raw.iter().map(|r| r.4).collect(),
                        mode: FlowMode::Integer(4),
                    };
                    (g, f1, f2, u)
                })
        })
    }

    proptest! {
        #[test]
        fn boundary_is_linear((g, f1, f2, _) in arb_flow(), a in -3i64..=3, b in -3i64..=3) {
            let c = combine(a, &f1, b, &f2).unwrap();
            for v in 0..g.vertex_count() {
                prop_assert_eq!(boundary(&g, &c, v).unwrap(), a * boundary(&g, &f1, v).unwrap() + b * boundary(&g, &f2, v).unwrap());
            }
        }

        #[test]
        fn switching_with_reorientation_keeps_the_verdict((g, f1, _, u) in arb_flow()) {
            let u = SwitchingSet(u);
            let s = g.switch_at(&u).unwrap();
            let fs = f1.switched(&g, &u);
            prop_assert_eq!(fs.orientation.law_violation(&s), None);
            prop_assert_eq!(check_flow(&g, &f1, true).is_ok(), check_flow(&s, &fs, true).is_ok());
            prop_assert_eq!(check_flow(&g, &f1, false).is_ok(), check_flow(&s, &fs, false).is_ok());
        }

        #[test]
        fn acceptance_is_monotone_and_orientation_free((g, f1, _, _) in arb_flow(), k in 2i64..8) {
            let fk = f1.clone().with_mode(FlowMode::Integer(k));
            if check_flow(&g, &fk, false).is_ok() {
                prop_assert!(check_flow(&g, &f1.clone().with_mode(FlowMode::Integer(k + 1)), false).is_ok());
                let re = fk.reexpressed(&default_orientation(&g)).unwrap();
                prop_assert!(check_flow(&g, &re, false).is_ok());
            }
        }
    }
}
