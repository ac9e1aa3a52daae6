//! Exact decision procedures used as ground truth.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::admissibility::inadmissibility_witness;
use crate::certificate::is_hamiltonian_circuit;
use crate::flow::{default_orientation, FlowAssignment, FlowMode};
use crate::graph::{EdgeId, Sign, SignedGraph, SubgraphRef, VertexId};
use crate::search::{self, Outcome, SearchStats};

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub exists: bool,
    pub witness: Option<FlowAssignment>,
    pub k: i64,
    pub mode: FlowMode,
    pub stats: SearchStats,
    pub budget_exceeded: bool,
    pub wall_time: Duration,
}

fn domain(k: i64, mode: FlowMode) -> Vec<i64> {
    match mode {
        FlowMode::Integer(_) => (1 - k..=-1).chain(1..k).collect(),
        FlowMode::Modular(_) => (1..k).collect(),
    }
}

/// Exhaustive search for a nowhere-zero flow. `mode` selects integer or
/// modular arithmetic; its own `k` is overwritten by `k`.
pub fn exists_nzf(g: &SignedGraph, k: i64, mode: FlowMode, budget: Option<u64>) -> SearchReport {
    let mode = match mode {
        FlowMode::Integer(_) => FlowMode::Integer(k),
        FlowMode::Modular(_) => FlowMode::Modular(k),
    };
    let start = Instant::now();
    let tau = default_orientation(g);
    let dom = domain(k, mode);
    let domains: Vec<Vec<i64>> = vec![dom; g.edge_id_bound()];
    let modulus = mode.is_modular().then_some(k);
    let (outcome, stats) = search::solve(g, &tau, &domains, modulus, budget);
    let (exists, witness, budget_exceeded) = match outcome {
        Outcome::Found(values) => (
            true,
            Some(FlowAssignment {
                orientation: tau,
                values,
                mode,
            }),
            false,
        ),
        Outcome::Exhausted => (false, None, false),
        Outcome::BudgetExceeded => (false, None, true),
    };
    SearchReport {
        exists,
        witness,
        k,
        mode,
        stats,
        budget_exceeded,
        wall_time: start.elapsed(),
    }
}

#[derive(Clone, Debug)]
pub enum FlowNumber {
    Finite {
        k: i64,
        witness: FlowAssignment,
    },
    /// Admissible, but nothing found up to `k_max`.
    Unbounded {
        k_max: i64,
    },
    /// Not flow-admissible; `edge` witnesses it.
    Infinite {
        edge: EdgeId,
    },
    BudgetExceeded {
        k: i64,
    },
}

impl FlowNumber {
    pub fn value(&self) -> Option<i64> {
        match self {
            FlowNumber::Finite { k, .. } => Some(*k),
            _ => None,
        }
    }
}

pub fn flow_number(g: &SignedGraph, k_max: i64, budget: Option<u64>) -> FlowNumber {
    if let Some(edge) = inadmissibility_witness(g) {
        return FlowNumber::Infinite { edge };
    }
    for k in 2..=k_max {
        let report = exists_nzf(g, k, FlowMode::Integer(k), budget);
        if report.budget_exceeded {
            return FlowNumber::BudgetExceeded { k };
        }
        if let Some(witness) = report.witness {
            return FlowNumber::Finite { k, witness };
        }
    }
    FlowNumber::Unbounded { k_max }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph is not cubic")]
    NotCubic,
}

/// Every perfect matching, in backtracking order (smallest free vertex first).
pub fn perfect_matchings(g: &SignedGraph) -> Vec<BTreeSet<EdgeId>> {
    let mut out = Vec::new();
    let mut matched = vec![false; g.vertex_count()];
    let mut current = Vec::new();
    matchings_rec(g, &mut matched, &mut current, &mut |m| {
        out.push(m.iter().copied().collect());
        true
    });
    out
}

fn matchings_rec(
    g: &SignedGraph,
    matched: &mut [bool],
    current: &mut Vec<EdgeId>,
    visit: &mut dyn FnMut(&[EdgeId]) -> bool,
) -> bool {
    let Some(v) = (0..g.vertex_count()).find(|&v| !matched[v]) else {
        return visit(current);
    };
    matched[v] = true;
    for h in g.incident(v) {
        let w = g.e(h.edge).other(v);
        if matched[w] {
            continue;
        }
        matched[w] = true;
        current.push(h.edge);
        let go_on = matchings_rec(g, matched, current, visit);
        current.pop();
        matched[w] = false;
        if !go_on {
            matched[v] = false;
            return false;
        }
    }
    matched[v] = false;
    true
}

fn is_antibalanced_factor(g: &SignedGraph, factor: &BTreeSet<EdgeId>) -> bool {
    g.edge_components(factor).iter().all(|c| {
        let want = if c.len() % 2 == 0 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        g.sign_of_edges(c) == want
    })
}

/// A 2-factor whose even circuits are balanced and odd circuits unbalanced.
pub fn antibalanced_2factor(g: &SignedGraph) -> Result<Option<SubgraphRef>, OracleError> {
    if !g.is_regular(3) {
        return Err(OracleError::NotCubic);
    }
    let all: BTreeSet<EdgeId> = g.edge_ids().into_iter().collect();
    let mut found = None;
    let mut matched = vec![false; g.vertex_count()];
    let mut current = Vec::new();
    matchings_rec(g, &mut matched, &mut current, &mut |m| {
        let factor: BTreeSet<EdgeId> = all.iter().copied().filter(|e| !m.contains(e)).collect();
        if is_antibalanced_factor(g, &factor) {
            found = Some(factor);
            false
        } else {
            true
        }
    });
    Ok(found.map(|f| g.subgraph(f).expect("live edges")))
}

/// Hamiltonian circuits through vertex 0, each once, in backtracking order.
/// `visit` returns false to stop early.
pub fn for_each_hamiltonian_circuit(g: &SignedGraph, visit: &mut dyn FnMut(&[EdgeId]) -> bool) {
    let n = g.vertex_count();
    if n < 2 {
        return;
    }
    let mut on = vec![false; n];
    on[0] = true;
    let mut path = Vec::with_capacity(n);
    ham_rec(g, 0, 1, &mut on, &mut path, visit);
}

fn ham_rec(
    g: &SignedGraph,
    at: VertexId,
    depth: usize,
    on: &mut [bool],
    path: &mut Vec<EdgeId>,
    visit: &mut dyn FnMut(&[EdgeId]) -> bool,
) -> bool {
    let n = g.vertex_count();
    for h in g.incident(at) {
        let w = g.e(h.edge).other(at);
        if depth == n {
            if w == 0 && path.first().is_some_and(|&f| f < h.edge) {
                path.push(h.edge);
                let go_on = visit(path);
                path.pop();
                if !go_on {
                    return false;
                }
            }
            continue;
        }
        if on[w] {
            continue;
        }
        on[w] = true;
        path.push(h.edge);
        let go_on = ham_rec(g, w, depth + 1, on, path, visit);
        path.pop();
        on[w] = false;
        if !go_on {
            return false;
        }
    }
    true
}

/// First balanced Hamiltonian circuit in backtracking order.
pub fn find_balanced_hamiltonian_circuit(g: &SignedGraph) -> Option<SubgraphRef> {
    let mut found = None;
    for_each_hamiltonian_circuit(g, &mut |c| {
        if g.sign_of_edges(c) == Sign::Positive {
            found = Some(c.to_vec());
            false
        } else {
            true
        }
    });
    found.map(|c| g.subgraph(c).expect("live edges"))
}

/// Three disjoint perfect matchings, any two of which form a Hamiltonian circuit.
pub fn find_kotzig_triple(g: &SignedGraph) -> Option<[SubgraphRef; 3]> {
    if !g.is_regular(3) {
        return None;
    }
    let ms = perfect_matchings(g);
    let ham = |a: &BTreeSet<EdgeId>, b: &BTreeSet<EdgeId>| is_hamiltonian_circuit(g, &(a | b));
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if !ms[i].is_disjoint(&ms[j]) || !ham(&ms[i], &ms[j]) {
                continue;
            }
            let rest: BTreeSet<EdgeId> = g
                .edge_ids()
                .into_iter()
                .filter(|e| !ms[i].contains(e) && !ms[j].contains(e))
                .collect();
            if ham(&ms[i], &rest) && ham(&ms[j], &rest) {
                let sub = |s: &BTreeSet<EdgeId>| g.subgraph(s.iter().copied()).expect("live edges");
                return Some([sub(&ms[i]), sub(&ms[j]), sub(&rest)]);
            }
        }
    }
    None
}
