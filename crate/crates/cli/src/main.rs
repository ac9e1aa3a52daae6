mod construct;
mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sff_core::cayley::{flow_number_odd_cayley, gen_cayley, CayleyError, CayleySpec};
use sff_core::certificate::{validate, validate_flow_file, Certificate, FlowCertificate, Payload};
use sff_core::flow::FlowMode;
use sff_core::generators::{fig2, gn};
use sff_core::graph::SignedGraph;
use sff_core::io::{graph_from_json, graph_to_json, GraphFile};
use sff_core::ladders::{gen_ladder, LadderKind, LadderSpec};
use sff_core::oracle::{exists_nzf, flow_number, FlowNumber};
use sff_core::reduction::{covering_pair_supereulerian, three_regularize, verify_reduction};

use construct::{construct, Inputs, Strategy, Witness};
use sweep::{Family, SweepConfig};

#[derive(Parser)]
#[command(name = "sff", version, about = "Nowhere-zero flows on signed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a certificate against a graph.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "cert")]
        cert: PathBuf,
    },
    /// Build a nowhere-zero 6-flow and write its certificate.
    Construct6 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: Strategy,
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Cayley spec sidecar (JSON) describing the graph.
        #[arg(long)]
        cayley_spec: Option<PathBuf>,
        #[command(flatten)]
        out: Outputs,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Reduce a supereulerian graph to a cubic graph with an even 2-factor.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        /// Spanning Eulerian subgraph to use as H1.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact search for a nowhere-zero flow, or the flow number without --k.
    Oracle {
        #[arg(long)]
        graph: Option<PathBuf>,
        graph_pos: Option<PathBuf>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, value_enum, default_value = "int")]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        kmax: i64,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Emit a graph file.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// Flow number of a signed Cayley graph on an odd-order group, with certificates.
    ClassifyCayley {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    /// CSV report over a family and its signature classes.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Outputs {
    #[arg(long)]
    cert_out: Option<PathBuf>,
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Int,
    Mod,
}

#[derive(Subcommand)]
enum Gen {
    /// Circular or Moebius ladder with n rungs; negative edges by canonical id.
    Ladder {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        negative: Vec<usize>,
    },
    /// Cayley graph of a product of cyclic groups.
    Cayley {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_delimiter = ',')]
        negative: Vec<usize>,
    },
    /// G_n: a 2n-circuit with every other edge doubled by a negative copy.
    Gn {
        #[arg(long)]
        n: usize,
    },
    /// The signed cube with flow number 6.
    Fig2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Circular,
    Moebius,
}

#[derive(Args)]
struct GroupArgs {
    /// Cyclic factor orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    orders: Vec<usize>,
    /// Elements separated by ';', coordinates by ','.
    #[arg(long)]
    connection: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Inclusive `a..b`.
    #[arg(long, default_value = "1..1")]
    range: String,
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, default_value_t = 8)]
    kmax: i64,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Seeded random subset of this many classes per graph.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Fail {
    Validation(anyhow::Error),
    Config(anyhow::Error),
    Budget(anyhow::Error),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Validation(_) => 1,
            Fail::Config(_) => 2,
            Fail::Budget(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Fail {
        Fail::Config(e)
    }
}

fn config(e: impl Into<anyhow::Error>) -> Fail {
    Fail::Config(e.into())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<SignedGraph> {
    graph_from_json(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Writes to `path`, or stdout when absent.
fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_connection(text: &str, rank: usize) -> anyhow::Result<Vec<Vec<usize>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|el| {
            let coords = el
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<usize>()
                        .with_context(|| format!("bad coordinate {c:?}"))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            if coords.len() != rank {
                return Err(anyhow!("element {el:?} needs {rank} coordinates"));
            }
            Ok(coords)
        })
        .collect()
}

fn group_spec(g: &GroupArgs) -> anyhow::Result<CayleySpec> {
    if g.orders.is_empty() {
        return Err(anyhow!("--orders is required"));
    }
    let text = g
        .connection
        .as_deref()
        .ok_or_else(|| anyhow!("--connection is required"))?;
    Ok(CayleySpec {
        orders: g.orders.clone(),
        connection: parse_connection(text, g.orders.len())?,
        negative: Default::default(),
    })
}

fn parse_range(text: &str) -> anyhow::Result<std::ops::RangeInclusive<usize>> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("range must look like a..b"))?;
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        return Err(anyhow!("empty range {text}"));
    }
    Ok(a..=b)
}

fn cmd_check(graph: &Path, cert: &Path) -> Result<(), Fail> {
    let g = load_graph(graph)?;
    let text = read(cert)?;
    let result = if let Ok(fc) = serde_json::from_str::<FlowCertificate>(&text) {
        validate_flow_file(&fc, &g)
            .map(|_| format!("flow certificate valid (mode {}, k = {})", fc.mode, fc.k))
    } else {
        let c: Certificate = serde_json::from_str(&text)
            .with_context(|| format!("parsing certificate {}", cert.display()))?;
        validate(&c, &g).map(|_| format!("{} certificate valid", c.kind()))
    };
    match result {
        Ok(msg) => {
            println!("ok: {msg}");
            Ok(())
        }
        Err(e) => Err(Fail::Validation(anyhow!(e))),
    }
}

fn cmd_construct(
    graph: &Path,
    strategy: Strategy,
    witness: Option<&Path>,
    cayley: Option<&Path>,
    out: &Outputs,
    budget: Option<u64>,
) -> Result<(), Fail> {
    let g = load_graph(graph)?;
    let witness: Option<Witness> = witness.map(load_json).transpose()?;
    let spec: Option<CayleySpec> = cayley.map(load_json).transpose()?;
    let inputs = Inputs {
        witness: witness.as_ref(),
        cayley: spec.as_ref(),
        budget,
    };
    let c = construct(&g, strategy, &inputs, true).map_err(|e| {
        if e.any_budget() {
            Fail::Budget(anyhow!("{e}"))
        } else {
            Fail::Validation(anyhow!("{e}"))
        }
    })?;
    let fa = c.flow.with_mode(FlowMode::Integer(6));
    let cert = FlowCertificate::from_flow(&g, &fa);
    validate_flow_file(&cert, &g)
        .map_err(|e| Fail::Validation(anyhow!("constructed certificate rejected: {e}")))?;
    emit(out.cert_out.as_deref(), &pretty(&cert))?;
    if let Some(p) = &out.trace_out {
        emit(
            Some(p),
            &pretty(&json!({"strategy": c.strategy.name(), "trace": c.trace})),
        )?;
    }
    Ok(())
}

fn cmd_reduce(graph: &Path, witness: Option<&Path>, out: Option<&Path>) -> Result<(), Fail> {
    let g = load_graph(graph)?;
    let h1 = match witness {
        Some(p) => {
            let w: Witness = load_json(p)?;
            let edges = w
                .edges
                .ok_or_else(|| anyhow!("witness has no \"edges\" list"))?;
            Some(g.subgraph(edges).map_err(config)?)
        }
        None => None,
    };
    let pair =
        covering_pair_supereulerian(&g, h1.as_ref()).map_err(|e| Fail::Validation(anyhow!(e)))?;
    let r = three_regularize(&g, &pair).map_err(|e| Fail::Validation(anyhow!(e)))?;
    verify_reduction(&g, &r)
        .map_err(|e| Fail::Validation(anyhow!("reduction check failed: {e}")))?;
    let g_prime = GraphFile::from_graph(&r.g_prime).map_err(|e| Fail::Validation(anyhow!(e)))?;
    let doc = json!({
        "g_prime": g_prime,
        "h1": pair.h1.edge_vec(),
        "h2": pair.h2.edge_vec(),
        "s": r.s,
        "j": r.j.edge_vec(),
        "bijection": r.bijection,
        "origin": r.origin,
        "trace": r.trace,
        "verified": true,
    });
    emit(out, &pretty(&doc))?;
    Ok(())
}

fn flow_json(g: &SignedGraph, fa: Option<&sff_core::flow::FlowAssignment>) -> Value {
    fa.map_or(Value::Null, |fa| {
        serde_json::to_value(FlowCertificate::from_flow(g, fa)).expect("serializable")
    })
}

fn cmd_oracle(
    graph: &Path,
    k: Option<i64>,
    mode: Mode,
    kmax: i64,
    budget: Option<u64>,
) -> Result<(), Fail> {
    let g = load_graph(graph)?;
    match k {
        Some(k) => {
            if k < 2 {
                return Err(config(anyhow!("--k must be at least 2")));
            }
            let m = match mode {
                Mode::Int => FlowMode::Integer(k),
                Mode::Mod => FlowMode::Modular(k),
            };
            let r = exists_nzf(&g, k, m, budget);
            let decision = if r.budget_exceeded {
                "budget-exceeded"
            } else if r.exists {
                "exists"
            } else {
                "not-exists"
            };
            let doc = json!({
                "decision": decision,
                "k": k,
                "mode": if m.is_modular() { "mod" } else { "int" },
                "nodes": r.stats.nodes,
                "max_depth": r.stats.max_depth,
                "witness": flow_json(&g, r.witness.as_ref()),
            });
            print!("{}", pretty(&doc));
            if r.budget_exceeded {
                return Err(Fail::Budget(anyhow!("node budget exhausted")));
            }
        }
        None => {
            let doc = match flow_number(&g, kmax, budget) {
                FlowNumber::Finite { k, witness } => {
                    json!({"status": "finite", "phi": k, "witness": flow_json(&g, Some(&witness))})
                }
                FlowNumber::Unbounded { k_max } => {
                    json!({"status": "above-kmax", "phi": null, "kmax": k_max})
                }
                FlowNumber::Infinite { edge } => {
                    json!({"status": "not-flow-admissible", "phi": null, "edge": edge})
                }
                FlowNumber::BudgetExceeded { k } => {
                    print!(
                        "{}",
                        pretty(&json!({"status": "budget-exceeded", "phi": null, "k": k}))
                    );
                    return Err(Fail::Budget(anyhow!("node budget exhausted at k = {k}")));
                }
            };
            print!("{}", pretty(&doc));
        }
    }
    Ok(())
}

fn cmd_gen(what: &Gen) -> Result<(), Fail> {
    let g = match what {
        Gen::Ladder { kind, n, negative } => {
            let kind = match kind {
                Kind::Circular => LadderKind::Circular,
                Kind::Moebius => LadderKind::Moebius,
            };
            gen_ladder(&LadderSpec::new(kind, *n).with_negative(negative.iter().copied()))
                .map_err(config)?
        }
        Gen::Cayley { group, negative } => {
            let mut spec = group_spec(group)?;
            spec.negative = negative.iter().copied().collect();
            gen_cayley(&spec).map_err(config)?
        }
        Gen::Gn { n } => {
            if *n == 0 {
                return Err(config(anyhow!("G_n needs n >= 1")));
            }
            gn(*n)
        }
        Gen::Fig2 => fig2(),
    };
    print!("{}", graph_to_json(&g).map_err(config)?);
    Ok(())
}

fn cmd_classify(spec_path: &Path, out: &Outputs) -> Result<(), Fail> {
    let spec: CayleySpec = load_json(spec_path)?;
    let g = gen_cayley(&spec).map_err(config)?;
    let doc = match flow_number_odd_cayley(&g, &spec, None) {
        Ok(c) => {
            let flow = Certificate::flow(&g, &c.flow, "sff-core/cayley");
            if let Some(p) = &out.cert_out {
                emit(Some(p), &pretty(&FlowCertificate::from_flow(&g, &c.flow)))?;
            }
            if let Some(p) = &out.trace_out {
                emit(Some(p), &pretty(&c.trace))?;
            }
            json!({"phi": c.phi, "certificate": flow, "supporting": c.certificates})
        }
        Err(CayleyError::NotFlowAdmissible(edge)) => {
            let cert =
                Certificate::new(&g, "sff-core/cayley", Payload::InadmissibilityEdge { edge });
            json!({"phi": null, "certificate": cert, "supporting": []})
        }
        Err(e @ (CayleyError::EvenOrder | CayleyError::Disconnected)) => {
            return Err(config(anyhow!(e)))
        }
        Err(e) => return Err(Fail::Validation(anyhow!(e))),
    };
    print!("{}", pretty(&doc));
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), Fail> {
    let cayley = match a.family {
        Family::Cayley => Some(group_spec(&a.group)?),
        _ => None,
    };
    let cfg = SweepConfig {
        family: a.family,
        range: parse_range(&a.range)?,
        cayley,
        kmax: a.kmax,
        budget: a.budget_nodes,
        threads: a.threads,
        sample: a.sample,
        seed: a.seed,
    };
    let summary = sweep::sweep(&cfg).map_err(|e| config(anyhow!(e)))?;
    emit(a.out.as_deref(), &summary.csv)?;
    if summary.disagreements > 0 {
        return Err(Fail::Validation(anyhow!(
            "{} rows disagree with the oracle",
            summary.disagreements
        )));
    }
    if summary.budget_rows > 0 {
        return Err(Fail::Budget(anyhow!(
            "{} rows exhausted the node budget",
            summary.budget_rows
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Check { graph, cert } => cmd_check(&graph, &cert),
        Command::Construct6 {
            graph,
            strategy,
            witness,
            cayley_spec,
            out,
            budget_nodes,
        } => cmd_construct(
            &graph,
            strategy,
            witness.as_deref(),
            cayley_spec.as_deref(),
            &out,
            budget_nodes,
        ),
        Command::Reduce {
            graph,
            witness,
            out,
        } => cmd_reduce(&graph, witness.as_deref(), out.as_deref()),
        Command::Oracle {
            graph,
            graph_pos,
            k,
            mode,
            kmax,
            budget_nodes,
        } => {
            let path = graph
                .or(graph_pos)
                .ok_or_else(|| config(anyhow!("a graph file is required")))?;
            cmd_oracle(&path, k, mode, kmax, budget_nodes)
        }
        Command::Gen { what } => cmd_gen(&what),
        Command::ClassifyCayley { spec, out } => cmd_classify(&spec, &out),
        Command::Sweep(a) => cmd_sweep(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.code();
            let (Fail::Validation(e) | Fail::Config(e) | Fail::Budget(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
