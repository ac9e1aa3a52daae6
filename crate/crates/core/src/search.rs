//! Backtracking over per-edge value domains with boundary propagation.
//!
//! Variables follow a depth-first spanning forest: vertices are visited in
//! post-order, each contributing its unassigned non-tree edges as free
//! variables followed by the tree edge to its parent, whose value is forced by
//! the vertex's residual. Values are tried in the order given by the domain,
//! so the first solution is the least one in step order.

use crate::flow::Orientation;
use crate::graph::{EdgeId, SignedGraph, VertexId};

pub(crate) enum Outcome {
    Found(Vec<i64>),
    Exhausted,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
}

struct Step {
    edge: EdgeId,
    ends: [(VertexId, i64); 2],
    forced_by: Option<usize>,
    dom: Vec<i64>,
    lo: [i64; 2],
    hi: [i64; 2],
    parity: Option<i64>,
    negative: bool,
}

struct Solver {
    steps: Vec<Step>,
    modulus: Option<i64>,
    resid: Vec<i64>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    cnt: Vec<u32>,
    mixed: Vec<u32>,
    par: Vec<i64>,
    g_sum: i64,
    g_lo: i64,
    g_hi: i64,
    g_mixed: u32,
    g_par: i64,
    values: Vec<i64>,
    stats: SearchStats,
    budget: Option<u64>,
    over_budget: bool,
}

fn parity_of(dom: &[i64]) -> Option<i64> {
    let p = dom.first()?.rem_euclid(2);
    dom.iter().all(|x| x.rem_euclid(2) == p).then_some(p)
}

/// Step order as described in the module docs.
fn plan(g: &SignedGraph) -> Vec<(EdgeId, Option<VertexId>)> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut tree = vec![false; g.edge_id_bound()];
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut post = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let list = g.incident(v);
            if *i < list.len() {
                let e = list[*i].edge;
                *i += 1;
                let w = g.e(e).other(v);
                if !seen[w] {
                    seen[w] = true;
                    tree[e] = true;
                    parent_edge[w] = Some(e);
                    stack.push((w, 0));
                }
            } else {
                post.push(v);
                stack.pop();
            }
        }
    }
    let mut placed = vec![false; g.edge_id_bound()];
    let mut order = Vec::with_capacity(g.edge_count());
    for &c in &post {
        for h in g.incident(c) {
            if !tree[h.edge] && !placed[h.edge] {
                placed[h.edge] = true;
                order.push((h.edge, None));
            }
        }
        if let Some(e) = parent_edge[c] {
            placed[e] = true;
            order.push((e, Some(c)));
        }
    }
    order
}

pub(crate) fn solve(
    g: &SignedGraph,
    tau: &Orientation,
    domains: &[Vec<i64>],
    modulus: Option<i64>,
    budget: Option<u64>,
) -> (Outcome, SearchStats) {
    let n = g.vertex_count();
    let mut steps = Vec::new();
    for (e, forcer) in plan(g) {
        let edge = g.e(e);
        let t = tau.at(e);
        let ends = [(edge.u, t[0] as i64), (edge.v, t[1] as i64)];
        let dom = domains[e].clone();
        if dom.is_empty() {
            return (Outcome::Exhausted, SearchStats::default());
        }
        let (mn, mx) = (
            *dom.iter().min().expect("nonempty"),
            *dom.iter().max().expect("nonempty"),
        );
        let bound = |t: i64| if t > 0 { (mn, mx) } else { (-mx, -mn) };
        let (l0, h0) = bound(ends[0].1);
        let (l1, h1) = bound(ends[1].1);
        steps.push(Step {
            edge: e,
            ends,
            forced_by: forcer.map(|c| if edge.u == c { 0 } else { 1 }),
            parity: parity_of(&dom),
            dom,
            lo: [l0, l1],
            hi: [h0, h1],
            negative: edge.sign.is_negative(),
        });
    }
    let mut s = Solver {
        modulus,
        resid: vec![0; n],
        lo: vec![0; n],
        hi: vec![0; n],
        cnt: vec![0; n],
        mixed: vec![0; n],
        par: vec![0; n],
        g_sum: 0,
        g_lo: 0,
        g_hi: 0,
        g_mixed: 0,
        g_par: 0,
        values: vec![0; g.edge_id_bound()],
        stats: SearchStats::default(),
        budget,
        over_budget: false,
        steps: Vec::new(),
    };
    for st in &steps {
        for j in 0..2 {
            let w = st.ends[j].0;
            s.cnt[w] += 1;
            s.lo[w] += st.lo[j];
            s.hi[w] += st.hi[j];
            match st.parity {
                Some(p) => s.par[w] += p,
                None => s.mixed[w] += 1,
            }
        }
        if st.negative {
            s.g_lo += st.lo[0];
            s.g_hi += st.hi[0];
            match st.parity {
                Some(p) => s.g_par += p,
                None => s.g_mixed += 1,
            }
        }
    }
    s.steps = steps;
    if !(0..n).all(|v| s.vertex_ok(v)) || !s.global_ok() {
        return (Outcome::Exhausted, s.stats);
    }
    let found = s.rec(0);
    let outcome = if found {
        Outcome::Found(s.values.clone())
    } else if s.over_budget {
        Outcome::BudgetExceeded
    } else {
        Outcome::Exhausted
    };
    (outcome, s.stats)
}

impl Solver {
    fn vertex_ok(&self, w: VertexId) -> bool {
        let r = self.resid[w];
        match self.modulus {
            None => {
                if r + self.lo[w] > 0 || r + self.hi[w] < 0 {
                    return false;
                }
                self.mixed[w] > 0 || (r + self.par[w]).rem_euclid(2) == 0
            }
            Some(k) => {
                if self.cnt[w] == 0 {
                    return r.rem_euclid(k) == 0;
                }
                k % 2 == 1 || self.mixed[w] > 0 || (r + self.par[w]).rem_euclid(2) == 0
            }
        }
    }

    /// Sum of boundaries equals twice the signed sum over negative edges.
    fn global_ok(&self) -> bool {
        if self.modulus.is_some() {
            return true;
        }
        if self.g_sum + self.g_lo > 0 || self.g_sum + self.g_hi < 0 {
            return false;
        }
        self.g_mixed > 0 || (self.g_sum + self.g_par).rem_euclid(2) == 0
    }

    fn apply(&mut self, i: usize, x: i64, sign: i64) {
        let st = &self.steps[i];
        for j in 0..2 {
            let (w, t) = st.ends[j];
            self.resid[w] += sign * t * x;
            self.cnt[w] = (self.cnt[w] as i64 - sign) as u32;
            self.lo[w] -= sign * st.lo[j];
            self.hi[w] -= sign * st.hi[j];
            match st.parity {
                Some(p) => self.par[w] -= sign * p,
                None => self.mixed[w] = (self.mixed[w] as i64 - sign) as u32,
            }
        }
        if st.negative {
            self.g_sum += sign * st.ends[0].1 * x;
            self.g_lo -= sign * st.lo[0];
            self.g_hi -= sign * st.hi[0];
            match st.parity {
                Some(p) => self.g_par -= sign * p,
                None => self.g_mixed = (self.g_mixed as i64 - sign) as u32,
            }
        }
    }

    fn try_value(&mut self, i: usize, x: i64) -> bool {
        self.stats.nodes += 1;
        if let Some(b) = self.budget {
            if self.stats.nodes > b {
                self.over_budget = true;
                return false;
            }
        }
        self.apply(i, x, 1);
        let (a, b) = (self.steps[i].ends[0].0, self.steps[i].ends[1].0);
        let ok = self.vertex_ok(a) && self.vertex_ok(b) && self.global_ok();
        if ok {
            self.values[self.steps[i].edge] = x;
            if self.rec(i + 1) {
                return true;
            }
        }
        self.apply(i, x, -1);
        false
    }

    fn rec(&mut self, i: usize) -> bool {
        self.stats.max_depth = self.stats.max_depth.max(i);
        if i == self.steps.len() {
            return true;
        }
        if let Some(j) = self.steps[i].forced_by {
            let (c, t) = self.steps[i].ends[j];
            let mut x = -self.resid[c] * t;
            if let Some(k) = self.modulus {
                x = x.rem_euclid(k);
            }
            if !self.steps[i].dom.contains(&x) {
                return false;
            }
            return self.try_value(i, x);
        }
        for idx in 0..self.steps[i].dom.len() {
            let x = self.steps[i].dom[idx];
            if self.try_value(i, x) {
                return true;
            }
            if self.over_budget {
                return false;
            }
        }
        false
    }
}
