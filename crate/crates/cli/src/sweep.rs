use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sff_core::admissibility::flow_admissible;
use sff_core::cayley::{
    flow_number_odd_cayley, gen_cayley, hamilton_decomposition, six_nzf_abelian_cayley, CayleySpec,
};
use sff_core::generators::gn;
use sff_core::graph::{EdgeId, SignedGraph};
use sff_core::ladders::{gen_ladder, six_nzf_ladder, Ladder, LadderKind, LadderSpec};
use sff_core::oracle::{flow_number, FlowNumber};

use crate::construct::{construct, Inputs, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Gn,
    Cl,
    Ml,
    Cayley,
}

pub struct SweepConfig {
    pub family: Family,
    pub range: RangeInclusive<usize>,
    pub cayley: Option<CayleySpec>,
    pub kmax: i64,
    pub budget: Option<u64>,
    pub threads: usize,
    pub sample: Option<usize>,
    pub seed: u64,
}

enum Shape {
    Gn,
    Ladder(Ladder),
    Cayley {
        spec: CayleySpec,
        decomposition: Option<[BTreeSet<EdgeId>; 3]>,
    },
}

struct Instance {
    id: String,
    base: SignedGraph,
    cotree: Vec<EdgeId>,
    mask: u64,
    shape: usize,
}

pub struct Summary {
    pub csv: String,
    pub disagreements: usize,
    pub budget_rows: usize,
}

pub const HEADER: &str =
    "instance,vertices,edges,negative_parity,admissible,constructed_k,oracle_phi,agree";

/// Smallest bound the constructed flow meets, or why there is none.
enum Built {
    K(i64),
    Exact(i64),
    Failed,
}

fn masks(count: u64, cfg: &SweepConfig, stream: u64) -> Vec<u64> {
    match cfg.sample {
        Some(s) if (s as u64) < count => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream);
            let mut picked: Vec<u64> = rand::seq::index::sample(&mut rng, count as usize, s)
                .into_iter()
                .map(|i| i as u64)
                .collect();
            picked.sort_unstable();
            picked
        }
        _ => (0..count).collect(),
    }
}

fn instances(cfg: &SweepConfig) -> Result<(Vec<Shape>, Vec<Instance>), String> {
    let mut shapes = Vec::new();
    let mut out = Vec::new();
    let mut push_all = |shapes: &mut Vec<Shape>,
                        shape: Shape,
                        base: SignedGraph,
                        prefix: String,
                        all_classes: bool,
                        stream: u64| {
        let cotree = base.cotree_edges();
        let count = if all_classes { 1u64 << cotree.len() } else { 1 };
        let width = format!("{}", count.saturating_sub(1)).len();
        let idx = shapes.len();
        shapes.push(shape);
        let chosen = if all_classes {
            masks(count, cfg, stream)
        } else {
            vec![0]
        };
        for mask in chosen {
            let id = if all_classes {
                format!("{prefix}-c{mask:0width$}")
            } else {
                prefix.clone()
            };
            out.push(Instance {
                id,
                base: base.clone(),
                cotree: cotree.clone(),
                mask,
                shape: idx,
            });
        }
    };
    match cfg.family {
        Family::Gn => {
            for n in cfg.range.clone() {
                if n == 0 {
                    return Err("G_n needs n >= 1".into());
                }
                push_all(
                    &mut shapes,
                    Shape::Gn,
                    gn(n),
                    format!("gn{n:03}"),
                    false,
                    n as u64,
                );
            }
        }
        Family::Cl | Family::Ml => {
            let kind = if cfg.family == Family::Cl {
                LadderKind::Circular
            } else {
                LadderKind::Moebius
            };
            let tag = if cfg.family == Family::Cl { "cl" } else { "ml" };
            for n in cfg.range.clone() {
                let base = gen_ladder(&LadderSpec::new(kind, n)).map_err(|e| e.to_string())?;
                if base.cotree_edges().len() > 24 {
                    return Err(format!("{tag}{n} has too many signature classes"));
                }
                push_all(
                    &mut shapes,
                    Shape::Ladder(Ladder::canonical(kind, n)),
                    base,
                    format!("{tag}{n:03}"),
                    true,
                    n as u64,
                );
            }
        }
        Family::Cayley => {
            let mut spec = cfg
                .cayley
                .clone()
                .ok_or("the cayley family needs --orders and --connection")?;
            spec.negative.clear();
            let base = gen_cayley(&spec).map_err(|e| e.to_string())?;
            if base.cotree_edges().len() > 24 {
                return Err("Cayley graph has too many signature classes".into());
            }
            let decomposition = if spec.order() % 2 == 1 && spec.degree() == 6 {
                hamilton_decomposition(&base, &spec)
            } else {
                None
            };
            let prefix = format!(
                "z{}-s{}",
                spec.orders
                    .iter()
                    .map(|o| o.to_string())
                    .collect::<Vec<_>>()
                    .join("x"),
                spec.connection
                    .iter()
                    .map(|c| c
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join("."))
                    .collect::<Vec<_>>()
                    .join("_")
            );
            push_all(
                &mut shapes,
                Shape::Cayley {
                    spec,
                    decomposition,
                },
                base,
                prefix,
                true,
                0,
            );
        }
    }
    Ok((shapes, out))
}

fn build(g: &SignedGraph, shape: &Shape, budget: Option<u64>) -> Built {
    let bound = |fa: &sff_core::flow::FlowAssignment| Built::K(fa.max_abs() + 1);
    match shape {
        Shape::Gn => {
            let inputs = Inputs {
                witness: None,
                cayley: None,
                budget,
            };
            construct(g, Strategy::Auto, &inputs, false)
                .map(|c| bound(&c.flow))
                .unwrap_or(Built::Failed)
        }
        Shape::Ladder(l) => six_nzf_ladder(g, l)
            .map(|(fa, _)| bound(&fa))
            .unwrap_or(Built::Failed),
        Shape::Cayley {
            spec,
            decomposition,
        } => {
            let signed = CayleySpec {
                negative: g.negative_edges().into_iter().collect(),
                ..spec.clone()
            };
            if spec.order() % 2 == 1 && g.is_connected() {
                let parts = decomposition
                    .as_ref()
                    .map(|d| d.clone().map(|p| g.subgraph(p).expect("same edges")));
                flow_number_odd_cayley(g, &signed, parts.as_ref())
                    .map(|c| Built::Exact(c.phi))
                    .unwrap_or(Built::Failed)
            } else {
                six_nzf_abelian_cayley(g, &signed)
                    .map(|(fa, _)| bound(&fa))
                    .unwrap_or(Built::Failed)
            }
        }
    }
}

fn row(inst: &Instance, shapes: &[Shape], cfg: &SweepConfig) -> (String, bool, bool) {
    let g = match shapes[inst.shape] {
        Shape::Gn => inst.base.clone(),
        _ => inst.base.signature_class(&inst.cotree, inst.mask),
    };
    let admissible = flow_admissible(&g);
    let built = build(&g, &shapes[inst.shape], cfg.budget);
    let phi = flow_number(&g, cfg.kmax, cfg.budget);
    let constructed = match built {
        Built::K(k) | Built::Exact(k) => k.to_string(),
        Built::Failed => "none".into(),
    };
    let oracle = match &phi {
        FlowNumber::Finite { k, .. } => k.to_string(),
        FlowNumber::Infinite { .. } => "inf".into(),
        FlowNumber::Unbounded { k_max } => format!(">{k_max}"),
        FlowNumber::BudgetExceeded { .. } => "budget".into(),
    };
    let budget = matches!(phi, FlowNumber::BudgetExceeded { .. });
    let agree = match (&built, &phi) {
        (_, FlowNumber::BudgetExceeded { .. }) => None,
        (Built::Failed, FlowNumber::Infinite { .. }) => Some(true),
        (Built::Exact(k), FlowNumber::Finite { k: p, .. }) => Some(k == p),
        (Built::K(k), FlowNumber::Finite { k: p, .. }) => Some(*k <= 6 && p <= k),
        _ => Some(false),
    };
    let agree_text = match agree {
        None => "budget",
        Some(true) => "yes",
        Some(false) => "no",
    };
    let line = format!(
        "{},{},{},{},{},{},{},{}",
        inst.id,
        g.vertex_count(),
        g.edge_count(),
        if g.negative_count() % 2 == 0 {
            "even"
        } else {
            "odd"
        },
        admissible,
        constructed,
        oracle,
        agree_text
    );
    (line, agree == Some(false), budget)
}

/// Rows run on `threads` workers and are emitted in instance order.
pub fn sweep(cfg: &SweepConfig) -> Result<Summary, String> {
    let (shapes, insts) = instances(cfg)?;
    let results: Mutex<Vec<Option<(String, bool, bool)>>> = Mutex::new(vec![None; insts.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..cfg.threads.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= insts.len() {
                    break;
                }
                let r = row(&insts[i], &shapes, cfg);
                results.lock().expect("no poisoned worker")[i] = Some(r);
            });
        }
    });
    let mut csv = String::from(HEADER);
    csv.push('\n');
    let (mut disagreements, mut budget_rows) = (0, 0);
    for r in results.into_inner().expect("no poisoned worker") {
        let (line, bad, budget) = r.expect("every row computed");
        csv.push_str(&line);
        csv.push('\n');
        disagreements += bad as usize;
        budget_rows += budget as usize;
    }
    Ok(Summary {
        csv,
        disagreements,
        budget_rows,
    })
}
