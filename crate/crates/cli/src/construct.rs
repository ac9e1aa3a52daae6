use std::collections::BTreeSet;
use std::fmt;

use sff_core::admissibility::inadmissibility_witness;
use sff_core::cayley::{six_nzf_abelian_cayley, CayleySpec};
use sff_core::flow::{FlowAssignment, FlowMode};
use sff_core::graph::{EdgeId, SignedGraph, SubgraphRef};
use sff_core::ladders::{recognize_ladder, six_nzf_ladder};
use sff_core::oracle::{exists_nzf, find_balanced_hamiltonian_circuit, find_kotzig_triple};
use sff_core::reduction::find_spanning_even_eulerian;
use sff_core::sixflow::{
    six_nzf_balanced_hamiltonian, six_nzf_kotzig, six_nzf_spanning_even_eulerian,
};
use sff_core::trace::ConstructionTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Strategy {
    Auto,
    EvenEulerian,
    BalHam,
    Ladder,
    Cayley,
    Kotzig,
    Oracle,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::EvenEulerian => "even-eulerian",
            Strategy::BalHam => "bal-ham",
            Strategy::Ladder => "ladder",
            Strategy::Cayley => "cayley",
            Strategy::Kotzig => "kotzig",
            Strategy::Oracle => "oracle",
        }
    }
}

/// Edge ids of a witness: one edge set, or three factors for `kotzig`.
#[derive(Clone, Debug, Default, serde::Deserialize)]
pub struct Witness {
    #[serde(default)]
    pub edges: Option<Vec<EdgeId>>,
    #[serde(default)]
    pub parts: Option<Vec<Vec<EdgeId>>>,
}

pub struct Inputs<'a> {
    pub witness: Option<&'a Witness>,
    pub cayley: Option<&'a CayleySpec>,
    pub budget: Option<u64>,
}

pub struct Construction {
    pub strategy: Strategy,
    pub flow: FlowAssignment,
    pub trace: ConstructionTrace,
}

pub enum Failure {
    Reason(String),
    Budget(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Reason(s) => write!(f, "{s}"),
            Failure::Budget(s) => write!(f, "budget exhausted: {s}"),
        }
    }
}

fn reason(e: impl fmt::Display) -> Failure {
    Failure::Reason(e.to_string())
}

/// Per-strategy failures when nothing succeeded.
pub struct NoStrategySucceeded(pub Vec<(Strategy, Failure)>);

impl NoStrategySucceeded {
    pub fn any_budget(&self) -> bool {
        self.0.iter().any(|(_, f)| matches!(f, Failure::Budget(_)))
    }
}

impl fmt::Display for NoStrategySucceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no strategy succeeded")?;
        for (s, why) in &self.0 {
            write!(f, "\n  {}: {why}", s.name())?;
        }
        Ok(())
    }
}

fn witness_edges(g: &SignedGraph, w: &Witness) -> Result<SubgraphRef, Failure> {
    let edges = w
        .edges
        .as_ref()
        .ok_or_else(|| reason("witness has no \"edges\" list"))?;
    g.subgraph(edges.iter().copied()).map_err(reason)
}

fn run(
    g: &SignedGraph,
    s: Strategy,
    inp: &Inputs,
) -> Result<(FlowAssignment, ConstructionTrace), Failure> {
    match s {
        Strategy::Ladder => {
            let l =
                recognize_ladder(g).ok_or_else(|| reason("not a circular or Moebius ladder"))?;
            six_nzf_ladder(g, &l).map_err(reason)
        }
        Strategy::Cayley => {
            let spec = inp.cayley.ok_or_else(|| reason("no Cayley spec given"))?;
            six_nzf_abelian_cayley(g, spec).map_err(reason)
        }
        Strategy::BalHam => {
            let h = match inp.witness {
                Some(w) => witness_edges(g, w)?,
                None => find_balanced_hamiltonian_circuit(g)
                    .ok_or_else(|| reason("no balanced Hamiltonian circuit"))?,
            };
            six_nzf_balanced_hamiltonian(g, &h).map_err(reason)
        }
        Strategy::EvenEulerian => {
            let h = match inp.witness {
                Some(w) => witness_edges(g, w)?,
                None => {
                    let set: BTreeSet<EdgeId> = find_spanning_even_eulerian(g)
                        .map_err(reason)?
                        .ok_or_else(|| reason("no spanning even Eulerian subgraph"))?;
                    g.subgraph(set).map_err(reason)?
                }
            };
            six_nzf_spanning_even_eulerian(g, &h).map_err(reason)
        }
        Strategy::Kotzig => {
            let factors = match inp.witness.and_then(|w| w.parts.as_ref()) {
                Some(parts) if parts.len() == 3 => {
                    let mut refs = Vec::with_capacity(3);
                    for p in parts {
                        refs.push(g.subgraph(p.iter().copied()).map_err(reason)?);
                    }
                    [refs[0].clone(), refs[1].clone(), refs[2].clone()]
                }
                Some(_) => return Err(reason("witness \"parts\" must list three factors")),
                None => find_kotzig_triple(g)
                    .ok_or_else(|| reason("no Kotzig triple of perfect matchings"))?,
            };
            six_nzf_kotzig(g, [&factors[0], &factors[1], &factors[2]]).map_err(reason)
        }
        Strategy::Oracle => {
            if let Some(e) = inadmissibility_witness(g) {
                return Err(Failure::Reason(format!(
                    "graph is not flow-admissible: edge {e} lies in no signed circuit"
                )));
            }
            let report = exists_nzf(g, 6, FlowMode::Integer(6), inp.budget);
            if report.budget_exceeded {
                return Err(Failure::Budget(format!("{} nodes", report.stats.nodes)));
            }
            let fa = report
                .witness
                .ok_or_else(|| reason("no nowhere-zero 6-flow exists"))?;
            let mut trace = ConstructionTrace::new();
            trace.case("oracle");
            trace.achieved_k = Some(6);
            Ok((fa, trace))
        }
        Strategy::Auto => unreachable!("auto expands to concrete strategies"),
    }
}

/// `auto` tries ladder, Cayley (with a spec), balanced Hamiltonian, even
/// Eulerian, then the oracle; `with_oracle` false drops the last step.
pub fn construct(
    g: &SignedGraph,
    strategy: Strategy,
    inp: &Inputs,
    with_oracle: bool,
) -> Result<Construction, NoStrategySucceeded> {
    let order: Vec<Strategy> = match strategy {
        Strategy::Auto => {
            let mut v = vec![Strategy::Ladder];
            if inp.cayley.is_some() {
                v.push(Strategy::Cayley);
            }
            v.extend([Strategy::BalHam, Strategy::EvenEulerian]);
            if with_oracle {
                v.push(Strategy::Oracle);
            }
            v
        }
        s => vec![s],
    };
    let mut failures = Vec::new();
    for s in order {
        match run(g, s, inp) {
            Ok((flow, trace)) => {
                return Ok(Construction {
                    strategy: s,
                    flow,
                    trace,
                })
            }
            Err(f) => failures.push((s, f)),
        }
    }
    Err(NoStrategySucceeded(failures))
}
