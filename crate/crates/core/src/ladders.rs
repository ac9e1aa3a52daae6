//! Circular and Möbius ladders: generators, extenders and flow constructions.
//!
//! A [`Ladder`] labels a graph's vertices `x_i`, `y_i` and its edges by slot:
//! rung `r_i = x_i y_i`, `cx_i = x_i x_{i+1}` and `cy_i = y_i y_{i+1}`. In a
//! Möbius ladder the last slots are `x_{n-1} y_0` and `y_{n-1} x_0`. Canonical
//! ids put `x_i = i`, `y_i = n + i`, rungs first, then the x-cycle, then the
//! y-cycle. `CL_1` is encoded as a long barbell on four vertices: rung 0, and
//! digons `x_0 x_0'` (ids 1, 2) and `y_0 y_0'` (ids 3, 4) whose first edges
//! carry the signs of `cx_0` and `cy_0`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::inadmissibility_witness;
use crate::flow::{
    check_flow, default_orientation, overlay, tour_flow, FlowAssignment, FlowError, FlowMode,
    Orientation, Violation,
};
use crate::graph::{Balance, EdgeId, GraphError, Sign, SignedGraph, VertexId};
use crate::sixflow::{six_nzf_balanced_hamiltonian, SixFlowError};
use crate::templates::{self, Family, Op, Template, TemplateError};
use crate::trace::ConstructionTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderKind {
    Circular,
    Moebius,
}

/// Negative edges are named by canonical edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderSpec {
    pub kind: LadderKind,
    pub n: usize,
    #[serde(default)]
    pub negative: BTreeSet<EdgeId>,
}

impl LadderSpec {
    pub fn new(kind: LadderKind, n: usize) -> LadderSpec {
        LadderSpec {
            kind,
            n,
            negative: BTreeSet::new(),
        }
    }

    pub fn with_negative(mut self, edges: impl IntoIterator<Item = EdgeId>) -> LadderSpec {
        self.negative.extend(edges);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Rung,
    X,
    Y,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::Rung, Part::X, Part::Y];

    fn index(self) -> usize {
        match self {
            Part::Rung => 0,
            Part::X => 1,
            Part::Y => 2,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Part::Rung => "r",
            Part::X => "cx",
            Part::Y => "cy",
        }
    }
}

/// Slot labeling of a ladder-shaped graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub kind: LadderKind,
    pub n: usize,
    pub x: Vec<VertexId>,
    pub y: Vec<VertexId>,
    pub rung: Vec<EdgeId>,
    pub cx: Vec<EdgeId>,
    pub cy: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("a ladder needs at least one rung")]
    ZeroRungs,
    #[error("edge {0} is not an edge of the ladder")]
    UnknownEdge(EdgeId),
    #[error("labeling does not describe the graph: {0}")]
    NotALadder(String),
    #[error("the pair x_{0} x_{{{0}+1}}, y_{0} y_{{{0}+1}} is not all-positive")]
    BasePairNotPositive(usize),
    #[error("template precondition violated: {0}")]
    TemplatePreconditionViolated(String),
    #[error("graph is not flow-admissible: edge {0} lies in no signed circuit")]
    NotFlowAdmissible(EdgeId),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    SixFlow(#[from] SixFlowError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("constructed flow rejected: {0}")]
    Rejected(#[from] Violation),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl Ladder {
    /// Labeling of `gen_ladder` output.
    pub fn canonical(kind: LadderKind, n: usize) -> Ladder {
        if kind == LadderKind::Circular && n == 1 {
            return Ladder {
                kind,
                n,
                x: vec![0],
                y: vec![1],
                rung: vec![0],
                cx: vec![1],
                cy: vec![3],
            };
        }
        Ladder {
            kind,
            n,
            x: (0..n).collect(),
            y: (n..2 * n).collect(),
            rung: (0..n).collect(),
            cx: (n..2 * n).collect(),
            cy: (2 * n..3 * n).collect(),
        }
    }

    pub fn edge(&self, part: Part, i: usize) -> EdgeId {
        match part {
            Part::Rung => self.rung[i],
            Part::X => self.cx[i],
            Part::Y => self.cy[i],
        }
    }

    /// Endpoints of a slot in reference order.
    pub fn ends(&self, part: Part, i: usize) -> (VertexId, VertexId) {
        let n = self.n;
        let j = (i + 1) % n;
        let wrap = self.kind == LadderKind::Moebius && i == n - 1;
        match part {
            Part::Rung => (self.x[i], self.y[i]),
            Part::X if wrap => (self.x[i], self.y[0]),
            Part::Y if wrap => (self.y[i], self.x[0]),
            Part::X => (self.x[i], self.x[j]),
            Part::Y => (self.y[i], self.y[j]),
        }
    }

    fn slots(&self) -> impl Iterator<Item = (Part, usize)> + '_ {
        Part::ALL
            .into_iter()
            .flat_map(move |p| (0..self.n).map(move |i| (p, i)))
    }

    /// Every slot edge joins its ends and every edge of `g` is a slot.
    pub fn check(&self, g: &SignedGraph) -> Result<(), LadderError> {
        let bad = |m: String| Err(LadderError::NotALadder(m));
        let n = self.n;
        if n == 0 {
            return Err(LadderError::ZeroRungs);
        }
        if [
            self.x.len(),
            self.y.len(),
            self.rung.len(),
            self.cx.len(),
            self.cy.len(),
        ] != [n; 5]
        {
            return bad("slot vectors must have length n".into());
        }
        if self.kind == LadderKind::Circular && n == 1 {
            return self.check_barbell(g);
        }
        let verts: BTreeSet<VertexId> = self.x.iter().chain(&self.y).copied().collect();
        if verts.len() != 2 * n || g.vertex_count() != 2 * n {
            return bad(format!("expected {} distinct vertices", 2 * n));
        }
        let mut seen = BTreeSet::new();
        for (p, i) in self.slots() {
            let e = self.edge(p, i);
            let Some(edge) = g.edge(e) else {
                return Err(LadderError::UnknownEdge(e));
            };
            let (a, b) = self.ends(p, i);
            if BTreeSet::from([edge.u, edge.v]) != BTreeSet::from([a, b]) {
                return bad(format!(
                    "slot {}{i} is edge {e}, which does not join {a} and {b}",
                    p.prefix()
                ));
            }
            if !seen.insert(e) {
                return bad(format!("edge {e} fills two slots"));
            }
        }
        if seen.len() != g.edge_count() {
            return bad("graph has edges outside the slots".into());
        }
        Ok(())
    }

    fn check_barbell(&self, g: &SignedGraph) -> Result<(), LadderError> {
        let (x, y, r) = (self.x[0], self.y[0], self.rung[0]);
        let rung_ok = g
            .edge(r)
            .is_some_and(|e| BTreeSet::from([e.u, e.v]) == BTreeSet::from([x, y]));
        let rest: BTreeSet<EdgeId> = g.edge_ids().into_iter().filter(|&e| e != r).collect();
        let comps = g.edge_components(&rest);
        let digon_at = |v: VertexId, e: EdgeId| {
            comps.iter().any(|c| {
                c.len() == 2 && c.contains(&e) && {
                    let edge = g.e(e);
                    let ends = BTreeSet::from([edge.u, edge.v]);
                    ends.contains(&v)
                        && c.iter()
                            .all(|&f| BTreeSet::from([g.e(f).u, g.e(f).v]) == ends)
                }
            })
        };
        if rung_ok
            && g.edge_count() == 5
            && g.vertex_count() == 4
            && digon_at(x, self.cx[0])
            && digon_at(y, self.cy[0])
        {
            Ok(())
        } else {
            Err(LadderError::NotALadder("not a CL_1 long barbell".into()))
        }
    }

    /// The same graph renumbered canonically, signs carried along.
    pub fn canonical_graph(&self, g: &SignedGraph) -> Result<SignedGraph, LadderError> {
        gen_ladder(&self.spec(g)?)
    }

    pub fn spec(&self, g: &SignedGraph) -> Result<LadderSpec, LadderError> {
        self.check(g)?;
        Ok(LadderSpec {
            kind: self.kind,
            n: self.n,
            negative: canon_ids(self.n)
                .filter(|&(_, p, i)| g.e(self.edge(p, i)).sign.is_negative())
                .map(|(id, _, _)| id)
                .collect(),
        })
    }

    /// All-cycle edges `C_x` (circular only).
    fn cycle(&self, part: Part) -> Vec<EdgeId> {
        (0..self.n).map(|i| self.edge(part, i)).collect()
    }
}

/// `(canonical id, part, index)` for every slot.
fn canon_ids(n: usize) -> impl Iterator<Item = (EdgeId, Part, usize)> {
    Part::ALL
        .into_iter()
        .enumerate()
        .flat_map(move |(k, p)| (0..n).map(move |i| (k * n + i, p, i)))
}

pub fn gen_ladder(spec: &LadderSpec) -> Result<SignedGraph, LadderError> {
    let n = spec.n;
    if n == 0 {
        return Err(LadderError::ZeroRungs);
    }
    if let Some(&e) = spec.negative.iter().find(|&&e| e >= 3 * n) {
        return Err(LadderError::UnknownEdge(e));
    }
    let sign = |id: EdgeId| {
        if spec.negative.contains(&id) {
            Sign::Negative
        } else {
            Sign::Positive
        }
    };
    if spec.kind == LadderKind::Circular && n == 1 {
        let edges = [
            (0, 1, sign(0)),
            (0, 2, sign(1)),
            (0, 2, Sign::Positive),
            (1, 3, sign(2)),
            (1, 3, Sign::Positive),
        ];
        return Ok(SignedGraph::build_graph(4, &edges)?);
    }
    let canon = Ladder::canonical(spec.kind, n);
    let edges: Vec<_> = canon_ids(n)
        .map(|(id, p, i)| {
            let (a, b) = canon.ends(p, i);
            (a, b, sign(id))
        })
        .collect();
    Ok(SignedGraph::build_graph(2 * n, &edges)?)
}

/// A ladder labeling of a cubic graph, found through its perfect matchings.
pub fn recognize_ladder(g: &SignedGraph) -> Option<Ladder> {
    let v = g.vertex_count();
    if v < 4 || v % 2 == 1 || !g.is_regular(3) || !g.is_connected() {
        return None;
    }
    let all: BTreeSet<EdgeId> = g.edge_ids().into_iter().collect();
    crate::oracle::perfect_matchings(g)
        .into_iter()
        .find_map(|m| {
            let factor: BTreeSet<EdgeId> = all.difference(&m).copied().collect();
            let mut partner = vec![(0, 0); v];
            for &e in &m {
                let edge = g.e(e);
                partner[edge.u] = (edge.v, e);
                partner[edge.v] = (edge.u, e);
            }
            let ladder = match g.edge_components(&factor).as_slice() {
                [a, b] if a.len() == b.len() => circular_from(g, a, b, &partner),
                [c] => moebius_from(g, c, &partner),
                _ => None,
            }?;
            ladder.check(g).is_ok().then_some(ladder)
        })
}

/// Vertices and edges of a circuit in tour order from its smallest vertex.
fn circuit_order(g: &SignedGraph, c: &BTreeSet<EdgeId>) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
    let start = c.iter().map(|&e| g.e(e).u.min(g.e(e).v)).min()?;
    let tour = g.euler_tour_from(c, start).ok()?;
    Some(
        tour.iter()
            .map(|h| (g.e(h.edge).endpoint(h.side), h.edge))
            .unzip(),
    )
}

fn circular_from(
    g: &SignedGraph,
    a: &BTreeSet<EdgeId>,
    b: &BTreeSet<EdgeId>,
    partner: &[(VertexId, EdgeId)],
) -> Option<Ladder> {
    let (x, cx) = circuit_order(g, a)?;
    let n = x.len();
    let y: Vec<VertexId> = x.iter().map(|&v| partner[v].0).collect();
    let rung: Vec<EdgeId> = x.iter().map(|&v| partner[v].1).collect();
    let mut used = BTreeSet::new();
    let mut cy = Vec::with_capacity(n);
    for i in 0..n {
        let e = g
            .edges_between(y[i], y[(i + 1) % n])
            .into_iter()
            .find(|e| b.contains(e) && !used.contains(e))?;
        used.insert(e);
        cy.push(e);
    }
    Some(Ladder {
        kind: LadderKind::Circular,
        n,
        x,
        y,
        rung,
        cx,
        cy,
    })
}

fn moebius_from(
    g: &SignedGraph,
    c: &BTreeSet<EdgeId>,
    partner: &[(VertexId, EdgeId)],
) -> Option<Ladder> {
    let (verts, edges) = circuit_order(g, c)?;
    let n = verts.len() / 2;
    if (0..n).any(|i| partner[verts[i]].0 != verts[i + n]) {
        return None;
    }
    Some(Ladder {
        kind: LadderKind::Moebius,
        n,
        x: verts[..n].to_vec(),
        y: verts[n..].to_vec(),
        rung: verts[..n].iter().map(|&v| partner[v].1).collect(),
        cx: edges[..n].to_vec(),
        cy: edges[n..].to_vec(),
    })
}

/// Signed value of one slot relative to its reference orientation: from the
/// first end to the second on a positive edge, both halves out on a negative one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub negative: bool,
    pub value: i64,
}

/// A flow on a circular ladder written in slot coordinates, independent of
/// any vertex or edge numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotFlow {
    pub n: usize,
    pub k: i64,
    slots: [Vec<Slot>; 3],
}

impl SlotFlow {
    pub fn get(&self, part: Part, i: usize) -> Slot {
        self.slots[part.index()][i]
    }

    pub fn from_template(t: &Template) -> Result<SlotFlow, LadderError> {
        let bad = |m: String| {
            LadderError::Template(TemplateError::Mismatch {
                name: t.name.clone(),
                reason: m,
            })
        };
        if t.family != Family::CircularLadder || t.n < 2 {
            return Err(bad("not a circular-ladder template with n >= 2".into()));
        }
        let n = t.n;
        let mut slots: [Vec<Option<Slot>>; 3] = std::array::from_fn(|_| vec![None; n]);
        let name = |p: Part, i: usize| match p {
            Part::Rung | Part::X => format!("x{i}"),
            Part::Y => format!("y{i}"),
        };
        for row in &t.rows {
            let (part, i) = Part::ALL
                .into_iter()
                .find_map(|p| {
                    let rest = row.slot.strip_prefix(p.prefix())?;
                    let i: usize = rest.parse().ok()?;
                    (i < n).then_some((p, i))
                })
                .ok_or_else(|| bad(format!("unknown slot {}", row.slot)))?;
            let first = name(part, i);
            let second = match part {
                Part::Rung => format!("y{i}"),
                p => name(p, (i + 1) % n),
            };
            let value = match row.op {
                Op::Along
                    if (row.a.as_str(), row.b.as_str()) == (first.as_str(), second.as_str()) =>
                {
                    row.value
                }
                Op::Along
                    if (row.a.as_str(), row.b.as_str()) == (second.as_str(), first.as_str()) =>
                {
                    -row.value
                }
                Op::Extroverted | Op::Introverted
                    if BTreeSet::from([&row.a, &row.b]) == BTreeSet::from([&first, &second]) =>
                {
                    if row.op == Op::Extroverted {
                        row.value
                    } else {
                        -row.value
                    }
                }
                _ => return Err(bad(format!("row {row} does not join {first} and {second}"))),
            };
            slots[part.index()][i] = Some(Slot {
                negative: row.op.is_negative(),
                value,
            });
        }
        let slots = slots.map(|v| v.into_iter().collect::<Option<Vec<_>>>());
        match slots {
            [Some(r), Some(x), Some(y)] => Ok(SlotFlow {
                n,
                k: t.k,
                slots: [r, x, y],
            }),
            _ => Err(bad("some slot has no row".into())),
        }
    }

    /// Reads a flow on a labeled circular ladder.
    pub fn read(g: &SignedGraph, l: &Ladder, fa: &FlowAssignment) -> Result<SlotFlow, LadderError> {
        l.check(g)?;
        if l.kind != LadderKind::Circular || l.n < 2 {
            return Err(LadderError::NotALadder(
                "slot flows need a circular ladder with n >= 2".into(),
            ));
        }
        let slots = Part::ALL.map(|p| {
            (0..l.n)
                .map(|i| {
                    let e = l.edge(p, i);
                    let edge = g.e(e);
                    let side = edge.side_of(l.ends(p, i).0).expect("checked ladder");
                    let t = fa.orientation.at(e)[side] as i64;
                    Slot {
                        negative: edge.sign.is_negative(),
                        value: t * fa.values[e],
                    }
                })
                .collect()
        });
        Ok(SlotFlow {
            n: l.n,
            k: fa.mode.k(),
            slots,
        })
    }

    pub fn spec(&self) -> LadderSpec {
        LadderSpec {
            kind: LadderKind::Circular,
            n: self.n,
            negative: canon_ids(self.n)
                .filter(|&(_, p, i)| self.get(p, i).negative)
                .map(|(id, _, _)| id)
                .collect(),
        }
    }

    fn nowhere_zero_below_k(&self) -> bool {
        self.slots
            .iter()
            .flatten()
            .all(|s| s.value != 0 && s.value.abs() < self.k)
    }

    /// The flow in reference orientation on `g`, whose signs it ignores.
    fn realize(&self, g: &SignedGraph, l: &Ladder) -> FlowAssignment {
        let mut tau = vec![[0i8; 2]; g.edge_id_bound()];
        let mut values = vec![0i64; g.edge_id_bound()];
        for (p, i) in l.slots() {
            let e = l.edge(p, i);
            let s = self.get(p, i);
            let side = g.e(e).side_of(l.ends(p, i).0).expect("checked ladder");
            tau[e][side] = 1;
            tau[e][1 - side] = if s.negative { 1 } else { -1 };
            values[e] = s.value;
        }
        FlowAssignment {
            orientation: Orientation::from_pairs(tau),
            values,
            mode: FlowMode::Integer(self.k),
        }
    }

    /// Places the flow on `g`, switching where `g`'s signature differs.
    /// `None` when the signatures are not switching equivalent.
    pub fn fit(&self, g: &SignedGraph, l: &Ladder) -> Option<FlowAssignment> {
        if l.kind != LadderKind::Circular || l.n != self.n || l.check(g).is_err() {
            return None;
        }
        let implied = |e: EdgeId| {
            l.slots()
                .find(|&(p, i)| l.edge(p, i) == e)
                .map(|(p, i)| self.get(p, i).negative)
                .expect("checked ladder")
        };
        let delta = g.map_signs(|e, edge| {
            let s = if implied(e) {
                Sign::Negative
            } else {
                Sign::Positive
            };
            edge.sign * s
        });
        let Balance::Balanced(u) = delta.is_balanced() else {
            return None;
        };
        let fa = self.realize(g, l).switched(g, &u);
        check_flow(g, &fa, true).ok().map(|_| fa)
    }

    /// Image under rotation by `rot`, after an optional reflection
    /// `x_i -> x_{-i}` and an optional exchange of the two cycles.
    pub fn transformed(&self, rot: usize, reflect: bool, swap: bool) -> SlotFlow {
        let n = self.n;
        let mut out = self.clone();
        for (k, part) in Part::ALL.into_iter().enumerate() {
            for i in 0..n {
                let mut s = self.slots[k][i];
                let j = match (reflect, part) {
                    (false, _) => i,
                    (true, Part::Rung) => (n - i) % n,
                    (true, _) => (2 * n - i - 1) % n,
                };
                if reflect && part != Part::Rung && !s.negative {
                    s.value = -s.value;
                }
                let target = match (swap, part) {
                    (true, Part::X) => Part::Y.index(),
                    (true, Part::Y) => Part::X.index(),
                    _ => k,
                };
                if swap && part == Part::Rung && !s.negative {
                    s.value = -s.value;
                }
                out.slots[target][(j + rot) % n] = s;
            }
        }
        out
    }

    /// `f1 + c f2` on the `(m, i)`-extender, where `f1` copies the `i`-th pair
    /// onto the inserted paths and `f2` is the periodic block with period 4.
    fn extended(&self, i: usize, m: usize, c: i64) -> SlotFlow {
        let n = self.n;
        let relabel = |t: usize| if t <= i { t } else { t + m };
        let zero = Slot {
            negative: false,
            value: 0,
        };
        let mut slots: [Vec<Slot>; 3] = std::array::from_fn(|_| vec![zero; n + m]);
        for t in 0..n {
            slots[0][relabel(t)] = self.slots[0][t];
            if t != i {
                slots[1][relabel(t)] = self.slots[1][t];
                slots[2][relabel(t)] = self.slots[2][t];
            }
        }
        let fx = |p: usize| if p == 0 { 0 } else { [1, 2, 1, 0][(p - 1) % 4] };
        let fy = |p: usize| {
            if p == 0 {
                0
            } else {
                [1, 0, -1, 0][(p - 1) % 4]
            }
        };
        let fr = |j: usize| [-1, -1, 1, 1][(j - 1) % 4];
        for p in 0..=m {
            slots[1][i + p] = Slot {
                negative: false,
                value: self.slots[1][i].value + c * fx(p),
            };
            slots[2][i + p] = Slot {
                negative: false,
                value: self.slots[2][i].value + c * fy(p),
            };
        }
        for j in 1..=m {
            slots[0][i + j] = Slot {
                negative: j % 2 == 1,
                value: c * fr(j),
            };
        }
        SlotFlow {
            n: n + m,
            k: self.k,
            slots,
        }
    }

    /// The flow lifted to the `(m, i)`-extender; `m` must be a multiple of 4.
    pub fn extend(&self, i: usize, m: usize, variant: Variant) -> Result<SlotFlow, LadderError> {
        let bad = |m: String| LadderError::TemplatePreconditionViolated(m);
        if i >= self.n {
            return Err(bad(format!("position {i} out of range")));
        }
        if m % 4 != 0 {
            return Err(bad(format!("length {m} is not a multiple of 4")));
        }
        if m == 0 {
            return Ok(self.clone());
        }
        let (sx, sy) = (self.slots[1][i], self.slots[2][i]);
        if sx.negative || sy.negative {
            return Err(LadderError::BasePairNotPositive(i));
        }
        let (want_y, c) = match variant {
            Variant::One => (2, 1),
            Variant::Two => (1, 2),
        };
        if sx.value.abs() != 1 || sy.value.abs() != want_y {
            return Err(bad(format!(
                "pair {i} carries ({}, {}), expected (1, {want_y}) up to sign",
                sx.value, sy.value
            )));
        }
        [c, -c]
            .into_iter()
            .map(|c| self.extended(i, m, c))
            .find(|f| f.nowhere_zero_below_k())
            .ok_or_else(|| bad("neither sign keeps the flow nowhere-zero".into()))
    }
}

/// Which multiple of the periodic block is added: `f1 +- f2` or `f1 +- 2 f2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtenderSpec {
    pub base: LadderSpec,
    pub i: usize,
    pub m: usize,
}

impl ExtenderSpec {
    /// The canonical spec of the extended ladder.
    pub fn extended_spec(&self) -> Result<LadderSpec, LadderError> {
        let (g, l) = extend_ladder(self)?;
        l.spec(&g)
    }
}

/// The `(m, i)`-extender built on `gen_ladder(base)`. Base ids are kept: `cx_i`
/// and `cy_i` become the first edges of the inserted paths, new vertices and
/// edges are appended (x-path, y-path, then rungs).
pub fn extend_ladder(spec: &ExtenderSpec) -> Result<(SignedGraph, Ladder), LadderError> {
    let base = &spec.base;
    let (n, i, m) = (base.n, spec.i, spec.m);
    if base.kind != LadderKind::Circular || n < 2 {
        return Err(LadderError::NotALadder(
            "extenders need a circular ladder with n >= 2".into(),
        ));
    }
    if i >= n {
        return Err(LadderError::TemplatePreconditionViolated(format!(
            "position {i} out of range"
        )));
    }
    let mut g = gen_ladder(base)?;
    let l = Ladder::canonical(base.kind, n);
    if g.e(l.cx[i]).sign.is_negative() || g.e(l.cy[i]).sign.is_negative() {
        return Err(LadderError::BasePairNotPositive(i));
    }
    if m == 0 {
        return Ok((g, l));
    }
    let xs: Vec<VertexId> = (0..m).map(|_| g.push_vertex()).collect();
    let ys: Vec<VertexId> = (0..m).map(|_| g.push_vertex()).collect();
    let path =
        |g: &mut SignedGraph, first: EdgeId, from: VertexId, inner: &[VertexId], to: VertexId| {
            let side = g.e(first).side_of(to).expect("base edge");
            debug_assert_eq!(g.e(first).other(to), from);
            g.reattach(first, side, inner[0]);
            let mut edges = vec![first];
            for w in inner.windows(2) {
                edges.push(g.push_edge(w[0], w[1], Sign::Positive));
            }
            edges.push(g.push_edge(inner[m - 1], to, Sign::Positive));
            edges
        };
    let px = path(&mut g, l.cx[i], l.x[i], &xs, l.x[(i + 1) % n]);
    let py = path(&mut g, l.cy[i], l.y[i], &ys, l.y[(i + 1) % n]);
    let rungs: Vec<EdgeId> = (1..=m)
        .map(|j| {
            let sign = if j % 2 == 1 {
                Sign::Negative
            } else {
                Sign::Positive
            };
            g.push_edge(xs[j - 1], ys[j - 1], sign)
        })
        .collect();
    let splice = |old: &[usize], inserted: &[usize]| -> Vec<usize> {
        old[..=i]
            .iter()
            .chain(inserted)
            .chain(&old[i + 1..])
            .copied()
            .collect()
    };
    let splice_path = |old: &[EdgeId], path: &[EdgeId]| -> Vec<EdgeId> {
        old[..i]
            .iter()
            .chain(path)
            .chain(&old[i + 1..])
            .copied()
            .collect()
    };
    let out = Ladder {
        kind: LadderKind::Circular,
        n: n + m,
        x: splice(&l.x, &xs),
        y: splice(&l.y, &ys),
        rung: splice(&l.rung, &rungs),
        cx: splice_path(&l.cx, &px),
        cy: splice_path(&l.cy, &py),
    };
    out.check(&g)?;
    Ok((g, out))
}

/// Lifts a k-NZF on `gen_ladder(spec.base)` to the extender of `extend_ladder`.
pub fn extend_flow(
    base_flow: &FlowAssignment,
    spec: &ExtenderSpec,
    variant: Variant,
) -> Result<FlowAssignment, LadderError> {
    let base_graph = gen_ladder(&spec.base)?;
    let base_ladder = Ladder::canonical(spec.base.kind, spec.base.n);
    check_flow(&base_graph, base_flow, true)?;
    let sf =
        SlotFlow::read(&base_graph, &base_ladder, base_flow)?.extend(spec.i, spec.m, variant)?;
    let (g, l) = extend_ladder(spec)?;
    let fa = sf.realize(&g, &l);
    check_flow(&g, &fa, true)?;
    Ok(fa)
}

/// A template's signature as a spec, and its flow on `gen_ladder` of that spec.
pub fn template_flow(t: &Template) -> Result<(LadderSpec, FlowAssignment), LadderError> {
    let sf = SlotFlow::from_template(t)?;
    let spec = sf.spec();
    let g = gen_ladder(&spec)?;
    let fa = sf.realize(&g, &Ladder::canonical(LadderKind::Circular, sf.n));
    check_flow(&g, &fa, true)?;
    Ok((spec, fa))
}

fn gate(g: &SignedGraph, l: &Ladder) -> Result<(), LadderError> {
    l.check(g)?;
    match inadmissibility_witness(g) {
        Some(e) => Err(LadderError::NotFlowAdmissible(e)),
        None => Ok(()),
    }
}

fn delegate(
    g: &SignedGraph,
    h: Vec<EdgeId>,
    trace: &mut ConstructionTrace,
) -> Result<FlowAssignment, LadderError> {
    let h = g.subgraph(h)?;
    trace.edges("H", h.edges());
    let (fa, inner) = six_nzf_balanced_hamiltonian(g, &h)?;
    trace.absorb("hamiltonian", inner);
    Ok(fa)
}

fn finish(
    g: &SignedGraph,
    fa: FlowAssignment,
    mut trace: ConstructionTrace,
) -> Result<(FlowAssignment, ConstructionTrace), LadderError> {
    check_flow(g, &fa, true)?;
    trace.achieved_k = Some(fa.mode.k());
    Ok((fa, trace))
}

/// 6-NZF on a flow-admissible signed Möbius ladder through the first balanced
/// circuit among the rim, `x_0 .. x_{n-1} y_{n-1} .. y_0`, and the reroutes
/// through consecutive rungs.
pub fn six_nzf_moebius(
    g: &SignedGraph,
    l: &Ladder,
) -> Result<(FlowAssignment, ConstructionTrace), LadderError> {
    if l.kind != LadderKind::Moebius {
        return Err(LadderError::NotALadder("not a Möbius ladder".into()));
    }
    gate(g, l)?;
    let n = l.n;
    let rim: Vec<EdgeId> = l.cx.iter().chain(&l.cy).copied().collect();
    let mut candidates = vec![("rim".to_string(), rim.clone())];
    if n == 1 {
        candidates.push(("rung-x".into(), vec![l.rung[0], l.cx[0]]));
        candidates.push(("rung-y".into(), vec![l.rung[0], l.cy[0]]));
    } else {
        let mut end: Vec<EdgeId> = l.cx[..n - 1]
            .iter()
            .chain(&l.cy[..n - 1])
            .copied()
            .collect();
        end.extend([l.rung[0], l.rung[n - 1]]);
        candidates.push(("end-rungs".into(), end));
        for j in 0..n - 1 {
            let mut h: Vec<EdgeId> = rim
                .iter()
                .copied()
                .filter(|&e| e != l.cx[j] && e != l.cy[j])
                .collect();
            h.extend([l.rung[j], l.rung[j + 1]]);
            candidates.push((format!("rungs-{j}"), h));
        }
    }
    let (label, h) = candidates
        .into_iter()
        .find(|(_, h)| g.sign_of_edges(h) == Sign::Positive)
        .ok_or_else(|| LadderError::Internal("no balanced candidate circuit".into()))?;
    let mut trace = ConstructionTrace::new();
    trace.case(format!("moebius-{label}"));
    let fa = delegate(g, h, &mut trace)?;
    finish(g, fa, trace)
}

struct Plan {
    template: &'static str,
    position: usize,
    variant: Variant,
}

fn plan_for(positive_cycles: bool, n: usize) -> Option<Plan> {
    let plan = |template, position, variant| {
        Some(Plan {
            template,
            position,
            variant,
        })
    };
    match (positive_cycles, n % 4) {
        (_, 1) | (_, 3) => None,
        (true, 0) => plan("fig8", 0, Variant::One),
        (true, _) if n >= 6 => plan("fig9", 0, Variant::Two),
        (false, 0) => plan("fig10", 3, Variant::Two),
        (false, _) if n == 2 => plan("fig11", 0, Variant::One),
        (false, _) => plan("fig12", 1, Variant::One),
        _ => None,
    }
}

/// A template flow, extended to `n` rungs and fitted to `g` under some ladder
/// symmetry and switching.
fn apply_plan(
    g: &SignedGraph,
    l: &Ladder,
    plan: &Plan,
    trace: &mut ConstructionTrace,
) -> Result<FlowAssignment, LadderError> {
    let t = templates::active()?.get(plan.template)?;
    let base = SlotFlow::from_template(t)?;
    let m = l.n.checked_sub(base.n).ok_or_else(|| {
        LadderError::Internal(format!("{} has more rungs than the input", t.name))
    })?;
    let sf = base.extend(plan.position, m, plan.variant)?;
    trace.note(format!("{} extended by ({m}, {})", t.name, plan.position));
    for swap in [false, true] {
        for reflect in [false, true] {
            for rot in 0..l.n {
                if let Some(fa) = sf.transformed(rot, reflect, swap).fit(g, l) {
                    trace.note(format!(
                        "fitted with rotation {rot}, reflection {reflect}, swap {swap}"
                    ));
                    return Ok(fa);
                }
            }
        }
    }
    Err(LadderError::Internal(format!(
        "{} does not fit the input signature",
        t.name
    )))
}

/// 3-NZF on the long barbell: value 1 around each unbalanced digon, 2 on the rung.
fn barbell_flow(g: &SignedGraph, l: &Ladder) -> Result<FlowAssignment, LadderError> {
    let mode = FlowMode::Integer(3);
    let r = l.rung[0];
    let rest: BTreeSet<EdgeId> = g.edge_ids().into_iter().filter(|&e| e != r).collect();
    let tau = default_orientation(g);
    let edge = g.e(r);
    let side_x = edge.side_of(l.x[0]).expect("checked ladder");
    let (tx, ty) = (tau.at(r)[side_x] as i64, tau.at(r)[1 - side_x] as i64);
    let mut fa = FlowAssignment::zero(g, mode);
    fa.orientation.set(r, tau.at(r));
    fa.values[r] = -2 * tx;
    for (v, scale) in [(l.x[0], 1), (l.y[0], tx * ty)] {
        let comp = g
            .edge_components(&rest)
            .into_iter()
            .find(|c| c.iter().any(|&e| g.e(e).side_of(v).is_some()))
            .expect("checked ladder");
        let (mut part, defect) = tour_flow(g, &comp, v, mode)?;
        if defect != 2 {
            return Err(LadderError::Internal(
                "balanced digon in an admissible barbell".into(),
            ));
        }
        for &e in &comp {
            part.values[e] *= scale;
        }
        overlay(&mut fa, &part, comp.iter().copied());
    }
    Ok(fa)
}

/// 6-NZF on a flow-admissible signed circular ladder. A balanced circuit
/// `C_x + C_y + r_i + r_{i+1} - cx_i - cy_i` is used when one exists;
/// otherwise consecutive rungs alternate and a figure template is extended.
pub fn six_nzf_circular(
    g: &SignedGraph,
    l: &Ladder,
) -> Result<(FlowAssignment, ConstructionTrace), LadderError> {
    if l.kind != LadderKind::Circular {
        return Err(LadderError::NotALadder("not a circular ladder".into()));
    }
    gate(g, l)?;
    let mut trace = ConstructionTrace::new();
    let n = l.n;
    if n == 1 {
        trace.case("circular-3-long-barbell");
        let fa = barbell_flow(g, l)?;
        return finish(g, fa, trace);
    }
    let sx = g.sign_of_edges(&l.cycle(Part::X));
    let sy = g.sign_of_edges(&l.cycle(Part::Y));
    let case = match (sx, sy) {
        (Sign::Positive, Sign::Positive) => 1,
        (Sign::Negative, Sign::Negative) => 3,
        _ => 2,
    };
    let reroute = (0..n).find_map(|i| {
        let (j, cx, cy) = ((i + 1) % n, l.cx[i], l.cy[i]);
        let mut h: Vec<EdgeId> =
            l.cx.iter()
                .chain(&l.cy)
                .copied()
                .filter(|&e| e != cx && e != cy)
                .collect();
        h.extend([l.rung[i], l.rung[j]]);
        (g.sign_of_edges(&h) == Sign::Positive).then_some((i, h))
    });
    if let Some((i, h)) = reroute {
        trace.case(match case {
            1 => "circular-1.1",
            2 => "circular-2",
            _ => "circular-3.1",
        });
        trace.note(format!("rungs {i} and {}", (i + 1) % n));
        let fa = delegate(g, h, &mut trace)?;
        return finish(g, fa, trace);
    }
    if case == 2 {
        return Err(LadderError::Internal(
            "mixed cycle signs without a balanced reroute".into(),
        ));
    }
    trace.case(if case == 1 {
        "circular-1.2"
    } else {
        "circular-3.2"
    });
    let plan = plan_for(case == 1, n)
        .ok_or_else(|| LadderError::Internal(format!("no template for n = {n}")))?;
    let fa = apply_plan(g, l, &plan, &mut trace)?;
    finish(g, fa, trace)
}

/// Dispatches on the labeling's kind.
pub fn six_nzf_ladder(
    g: &SignedGraph,
    l: &Ladder,
) -> Result<(FlowAssignment, ConstructionTrace), LadderError> {
    match l.kind {
        LadderKind::Circular => six_nzf_circular(g, l),
        LadderKind::Moebius => six_nzf_moebius(g, l),
    }
}
