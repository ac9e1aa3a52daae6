//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
//!
//! `SFF_ACCEPTANCE=2,7` restricts the run to the listed criteria.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sff_core::admissibility::{all_circuits, flow_admissible};
use sff_core::cayley::{
    flow_number_odd_cayley, gen_cayley, hamilton_decomposition, CayleyError, CayleySpec,
};
use sff_core::flow::{boundary, check_flow, combine, FlowAssignment, FlowMode, Orientation};
use sff_core::generators::{fig2, gn};
use sff_core::graph::{Sign, SignedGraph, SwitchingSet, VertexId};
use sff_core::ladders::{
    extend_flow, extend_ladder, gen_ladder, template_flow, ExtenderSpec, Variant,
};
use sff_core::oracle::{antibalanced_2factor, exists_nzf, flow_number, FlowNumber};
use sff_core::reduction::{covering_pair_supereulerian, three_regularize, verify_reduction};
use sff_core::sixflow::six_nzf_balanced_hamiltonian;
use sff_core::templates::{apply_corners, Circle, Family, TemplateSet};

const SEED: u64 = 0x5eed_0006;

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Result<String, String>,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn octagon(chords: [(VertexId, VertexId); 2]) -> SignedGraph {
    let mut edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8, Sign::Positive)).collect();
    edges.extend(chords.map(|(a, b)| (a, b, Sign::Negative)));
    SignedGraph::build_graph(8, &edges).unwrap()
}

fn templates() -> Result<String, String> {
    let set = TemplateSet::embedded();
    let expected = [
        ("fig3", 3),
        ("fig4", 4),
        ("fig8", 4),
        ("fig9", 4),
        ("fig10", 6),
        ("fig11", 4),
        ("fig12", 4),
    ];
    for (name, k) in expected {
        let t = set.get(name).map_err(|e| e.to_string())?;
        ensure(t.k == k, || format!("{name} is declared at k = {}", t.k))?;
        let (g, fa) = match t.family {
            Family::Corners => {
                // u1 = 0 on an octagon; fig3 crosses its chords, fig4 does not.
                let (g, corners) = if name == "fig3" {
                    (
                        octagon([(0, 4), (2, 6)]),
                        BTreeMap::from([("u1", 0), ("u2", 2), ("v1", 4), ("v2", 6)]),
                    )
                } else {
                    (
                        octagon([(0, 2), (4, 6)]),
                        BTreeMap::from([("u1", 0), ("v1", 2), ("u2", 6), ("v2", 4)]),
                    )
                };
                let circle = Circle::from_circuit(&g, &(0..8).collect())
                    .ok_or("octagon rim is not a circuit")?;
                let chords = BTreeMap::from([("e1", 8), ("e2", 9)]);
                let fa =
                    apply_corners(&g, t, &circle, &corners, &chords).map_err(|e| e.to_string())?;
                (g, fa)
            }
            Family::CircularLadder => {
                let (spec, fa) = template_flow(t).map_err(|e| format!("{name}: {e}"))?;
                (gen_ladder(&spec).map_err(|e| e.to_string())?, fa)
            }
        };
        ensure(fa.mode == FlowMode::Integer(k), || {
            format!("{name} realized at {:?}", fa.mode)
        })?;
        check_flow(&g, &fa, true).map_err(|v| format!("{name}: {v}"))?;
    }
    Ok("7 templates verified at 3, 4, 4, 4, 6, 4, 4".into())
}

fn sharpness() -> Result<String, String> {
    let mut out = Vec::new();
    for (name, g) in [("G3", gn(3)), ("fig2", fig2())] {
        ensure(g.edge_count() <= 14, || {
            format!("{name} has {} edges", g.edge_count())
        })?;
        let start = Instant::now();
        let five = exists_nzf(&g, 5, FlowMode::Integer(5), None);
        ensure(!five.budget_exceeded && !five.exists, || {
            format!("{name}: 5-NZF not refuted")
        })?;
        let six = exists_nzf(&g, 6, FlowMode::Integer(6), None);
        let w = six
            .witness
            .ok_or_else(|| format!("{name}: no 6-NZF found"))?;
        check_flow(&g, &w, true).map_err(|v| format!("{name}: witness rejected: {v}"))?;
        let took = start.elapsed();
        ensure(took < secs(60), || format!("{name} took {took:?}"))?;
        out.push(format!("{name} refuted at 5 in {} nodes", five.stats.nodes));
    }
    Ok(out.join(", "))
}

/// Hamiltonian circuit `0 .. n-1` with a balanced sign pattern plus a random
/// chord matching; the circuit is the generator's witness.
fn hamiltonian_cubic(rng: &mut ChaCha8Rng, n: usize) -> Option<SignedGraph> {
    let mut verts: Vec<VertexId> = (0..n).collect();
    verts.shuffle(rng);
    let chords: Vec<(VertexId, VertexId)> = verts
        .chunks(2)
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect();
    if chords
        .iter()
        .any(|&(a, b)| b - a == 1 || (a == 0 && b == n - 1))
    {
        return None;
    }
    let mut rim: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    if rim.iter().filter(|&&x| x).count() % 2 == 1 {
        rim[rng.gen_range(0..n)] ^= true;
    }
    let sign = |neg: bool| if neg { Sign::Negative } else { Sign::Positive };
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, sign(rim[i]))).collect();
    edges.extend(chords.iter().map(|&(a, b)| (a, b, sign(rng.gen_bool(0.5)))));
    let g = SignedGraph::build_graph(n, &edges).ok()?;
    flow_admissible(&g).then_some(g)
}

fn balanced_hamiltonian() -> Result<String, String> {
    const CORPUS: usize = 240;
    const ORACLE_SAMPLE: usize = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut corpus = Vec::new();
    while corpus.len() < CORPUS {
        let n = 2 * rng.gen_range(2..=7);
        if let Some(g) = hamiltonian_cubic(&mut rng, n) {
            corpus.push(g);
        }
    }
    for (i, g) in corpus.iter().enumerate() {
        let h = g.subgraph(0..g.vertex_count()).map_err(|e| e.to_string())?;
        let (fa, _) =
            six_nzf_balanced_hamiltonian(g, &h).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(fa.mode.k() <= 6, || {
            format!("instance {i} reached k = {}", fa.mode.k())
        })?;
        check_flow(g, &fa.with_mode(FlowMode::Integer(6)), true)
            .map_err(|v| format!("instance {i}: {v}"))?;
    }
    let picked = rand::seq::index::sample(&mut rng, CORPUS, ORACLE_SAMPLE);
    for i in picked.iter() {
        let r = exists_nzf(&corpus[i], 6, FlowMode::Integer(6), None);
        ensure(r.exists, || {
            format!("oracle finds no 6-NZF on instance {i}")
        })?;
    }
    let sizes: BTreeSet<usize> = corpus.iter().map(SignedGraph::vertex_count).collect();
    Ok(format!(
        "{CORPUS} instances on {sizes:?} vertices, oracle agrees on {ORACLE_SAMPLE}"
    ))
}

fn reduction() -> Result<String, String> {
    const INSTANCES: usize = 150;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut done = 0;
    let mut tries = 0;
    while done < INSTANCES {
        tries += 1;
        let n = rng.gen_range(2..=10);
        let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        for _ in 0..rng.gen_range(0..=n) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                edges.push((a, b));
            }
        }
        let signed: Vec<_> = edges
            .into_iter()
            .map(|(a, b)| {
                (
                    a,
                    b,
                    if rng.gen_bool(0.35) {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    },
                )
            })
            .collect();
        let g = SignedGraph::build_graph(n, &signed).map_err(|e| e.to_string())?;
        if !flow_admissible(&g) {
            continue;
        }
        let pair =
            covering_pair_supereulerian(&g, None).map_err(|e| format!("covering pair: {e}"))?;
        let r = three_regularize(&g, &pair).map_err(|e| format!("three_regularize: {e}"))?;
        verify_reduction(&g, &r).map_err(|v| format!("instance {done}: {v}"))?;
        done += 1;
    }
    Ok(format!(
        "{INSTANCES} reductions verified ({tries} graphs drawn)"
    ))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn odd_cayley() -> Result<String, String> {
    let mut instances = 0u64;
    let mut by_phi: BTreeMap<String, u64> = BTreeMap::new();
    for n in [3usize, 5, 7, 9] {
        let pairs: Vec<usize> = (1..=(n - 1) / 2).collect();
        for size in [1usize, 2, 3] {
            for choice in 0u32..(1 << pairs.len()) {
                if choice.count_ones() as usize != size {
                    continue;
                }
                let gens: Vec<usize> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| choice >> i & 1 == 1)
                    .map(|(_, &a)| a)
                    .collect();
                if gens.iter().fold(n, |acc, &a| gcd(acc, a)) != 1 {
                    continue;
                }
                let connection: Vec<usize> = gens.iter().flat_map(|&a| [a, n - a]).collect();
                let spec = CayleySpec::cyclic(n, &connection);
                let base = gen_cayley(&spec).map_err(|e| e.to_string())?;
                let decomposition = hamilton_decomposition(&base, &spec);
                if size == 3 && decomposition.is_none() {
                    return Err(format!("Z{n} {connection:?}: no Hamilton decomposition"));
                }
                let cotree = base.cotree_edges();
                for mask in 0u64..(1 << cotree.len()) {
                    let g = base.signature_class(&cotree, mask);
                    let signed = CayleySpec {
                        negative: g.negative_edges().into_iter().collect(),
                        ..spec.clone()
                    };
                    let parts = decomposition
                        .as_ref()
                        .map(|d| d.clone().map(|p| g.subgraph(p).expect("same edges")));
                    let claimed = match flow_number_odd_cayley(&g, &signed, parts.as_ref()) {
                        Ok(c) => Some(c.phi),
                        Err(CayleyError::NotFlowAdmissible(_)) => None,
                        Err(e) => return Err(format!("Z{n} {connection:?} class {mask}: {e}")),
                    };
                    let phi = match flow_number(&g, 6, None) {
                        FlowNumber::Finite { k, .. } => Some(k),
                        FlowNumber::Infinite { .. } => None,
                        other => {
                            return Err(format!(
                                "Z{n} {connection:?} class {mask}: oracle gave {other:?}"
                            ))
                        }
                    };
                    ensure(claimed == phi, || {
                        format!("Z{n} {connection:?} class {mask}: classifier {claimed:?}, oracle {phi:?}")
                    })?;
                    *by_phi
                        .entry(phi.map_or("inf".into(), |k| k.to_string()))
                        .or_default() += 1;
                    instances += 1;
                }
            }
        }
    }
    Ok(format!(
        "{instances} classes, no disagreement, phi counts {by_phi:?}"
    ))
}

/// Connected loopless cubic multigraphs on `n` vertices, one per isomorphism class.
fn cubic_multigraphs(n: usize) -> Vec<Vec<(VertexId, VertexId)>> {
    fn rec(
        n: usize,
        left: &mut [usize],
        edges: &mut Vec<(VertexId, VertexId)>,
        out: &mut Vec<Vec<(VertexId, VertexId)>>,
    ) {
        let Some(a) = (0..n).find(|&v| left[v] > 0) else {
            out.push(edges.clone());
            return;
        };
        let from = edges.last().filter(|e| e.0 == a).map_or(a + 1, |e| e.1);
        for b in from..n {
            if left[b] == 0 || edges.iter().filter(|&&e| e == (a, b)).count() >= 3 {
                continue;
            }
            left[a] -= 1;
            left[b] -= 1;
            edges.push((a, b));
            rec(n, left, edges, out);
            edges.pop();
            left[a] += 1;
            left[b] += 1;
        }
    }
    let mut labeled = Vec::new();
    rec(n, &mut vec![3; n], &mut Vec::new(), &mut labeled);
    let mut reps: Vec<(Vec<u32>, Vec<Vec<u8>>)> = Vec::new();
    let mut out = Vec::new();
    for edges in labeled {
        let g = SignedGraph::build_graph(
            n,
            &edges
                .iter()
                .map(|&(a, b)| (a, b, Sign::Positive))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        if !g.is_connected() {
            continue;
        }
        let mut adj = vec![vec![0u8; n]; n];
        for &(a, b) in &edges {
            adj[a][b] += 1;
            adj[b][a] += 1;
        }
        let inv = invariant(&adj);
        if reps.iter().any(|(i, r)| *i == inv && isomorphic(r, &adj)) {
            continue;
        }
        reps.push((inv, adj));
        out.push(edges);
    }
    out
}

fn invariant(adj: &[Vec<u8>]) -> Vec<u32> {
    let n = adj.len();
    let mut per: Vec<u32> = (0..n)
        .map(|v| {
            let multi = adj[v].iter().filter(|&&m| m > 1).count() as u32;
            let tri = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| adj[v][a] > 0 && adj[a][b] > 0 && adj[b][v] > 0)
                .count() as u32;
            multi * 1000 + tri
        })
        .collect();
    per.sort_unstable();
    per
}

fn isomorphic(a: &[Vec<u8>], b: &[Vec<u8>]) -> bool {
    fn extend(a: &[Vec<u8>], b: &[Vec<u8>], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = map.len();
        if v == a.len() {
            return true;
        }
        for w in 0..b.len() {
            if used[w] || (0..v).any(|u| a[v][u] != b[w][map[u]]) {
                continue;
            }
            used[w] = true;
            map.push(w);
            if extend(a, b, map, used) {
                return true;
            }
            map.pop();
            used[w] = false;
        }
        false
    }
    extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
}

fn antibalanced_factor() -> Result<String, String> {
    let (mut graphs, mut classes, mut with_factor) = (0, 0, 0);
    // Connected loopless cubic multigraphs on 2, 4, 6, 8 vertices: 1, 2, 6, 20.
    for (n, census) in [(2usize, 1), (4, 2), (6, 6), (8, 20)] {
        let reps = cubic_multigraphs(n);
        ensure(reps.len() == census, || {
            format!(
                "{} cubic multigraphs on {n} vertices, expected {census}",
                reps.len()
            )
        })?;
        for edges in reps {
            graphs += 1;
            let base = SignedGraph::build_graph(
                n,
                &edges
                    .iter()
                    .map(|&(a, b)| (a, b, Sign::Positive))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let cotree = base.cotree_edges();
            for mask in 0u64..(1 << cotree.len()) {
                let g = base.signature_class(&cotree, mask);
                let factor = antibalanced_2factor(&g)
                    .map_err(|e| e.to_string())?
                    .is_some();
                let z4 = exists_nzf(&g, 4, FlowMode::Modular(4), None);
                ensure(!z4.budget_exceeded, || "budget".into())?;
                ensure(factor == z4.exists, || {
                    format!(
                        "{edges:?} class {mask}: factor {factor}, Z4-NZF {}",
                        z4.exists
                    )
                })?;
                classes += 1;
                with_factor += factor as usize;
            }
        }
    }
    Ok(format!("{graphs} cubic multigraphs, {classes} classes, {with_factor} with an antibalanced 2-factor"))
}

fn extenders() -> Result<String, String> {
    let set = TemplateSet::embedded();
    let bases = [
        ("fig8", 0, Variant::One),
        ("fig9", 0, Variant::Two),
        ("fig10", 3, Variant::Two),
        ("fig11", 1, Variant::One),
        ("fig12", 1, Variant::One),
    ];
    let mut checked = 0;
    for (name, i, variant) in bases {
        let t = set.get(name).map_err(|e| e.to_string())?;
        let (base, fa) = template_flow(t).map_err(|e| e.to_string())?;
        for q in 1..=3 {
            let spec = ExtenderSpec {
                base: base.clone(),
                i,
                m: 4 * q,
            };
            let (g, l) = extend_ladder(&spec).map_err(|e| format!("{name} q={q}: {e}"))?;
            let ext = extend_flow(&fa, &spec, variant).map_err(|e| format!("{name} q={q}: {e}"))?;
            ensure(ext.mode.k() == t.k, || {
                format!("{name} q={q}: k = {}", ext.mode.k())
            })?;
            check_flow(&g, &ext, true).map_err(|v| format!("{name} q={q}: {v}"))?;
            let larger = spec.extended_spec().map_err(|e| e.to_string())?;
            ensure(larger.n == base.n + 4 * q, || {
                format!("{name} q={q}: {} rungs", larger.n)
            })?;
            let canonical = l.canonical_graph(&g).map_err(|e| e.to_string())?;
            ensure(
                canonical == gen_ladder(&larger).map_err(|e| e.to_string())?,
                || format!("{name} q={q}: not canonical"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} extensions verified"))
}

fn random_graph(rng: &mut ChaCha8Rng) -> SignedGraph {
    let n = rng.gen_range(2..=7);
    let m = rng.gen_range(n - 1..=12);
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    while edges.len() < m {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((a, b));
        }
    }
    let signed: Vec<_> = edges
        .into_iter()
        .map(|(a, b)| {
            (
                a,
                b,
                if rng.gen_bool(0.4) {
                    Sign::Negative
                } else {
                    Sign::Positive
                },
            )
        })
        .collect();
    SignedGraph::build_graph(n, &signed).unwrap()
}

fn random_switch(rng: &mut ChaCha8Rng, g: &SignedGraph) -> SwitchingSet {
    SwitchingSet(
        (0..g.vertex_count())
            .filter(|_| rng.gen_bool(0.5))
            .collect(),
    )
}

fn random_orientation(rng: &mut ChaCha8Rng, g: &SignedGraph) -> Orientation {
    Orientation::from_pairs(
        (0..g.edge_id_bound())
            .map(|e| {
                let t: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
                if g.e(e).sign.is_negative() {
                    [t, t]
                } else {
                    [t, -t]
                }
            })
            .collect(),
    )
}

fn random_assignment(rng: &mut ChaCha8Rng, g: &SignedGraph, k: i64) -> FlowAssignment {
    FlowAssignment {
        orientation: random_orientation(rng, g),
        values: (0..g.edge_id_bound())
            .map(|_| rng.gen_range(-(k - 1)..k))
            .collect(),
        mode: FlowMode::Integer(k),
    }
}

fn phi_label(p: &FlowNumber) -> String {
    match p {
        FlowNumber::Finite { k, .. } => k.to_string(),
        FlowNumber::Infinite { .. } => "inf".into(),
        FlowNumber::Unbounded { k_max } => format!(">{k_max}"),
        FlowNumber::BudgetExceeded { .. } => "budget".into(),
    }
}

fn properties() -> Result<String, String> {
    const TRIALS: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut valid_flows = 0;
    for t in 0..TRIALS {
        let g = random_graph(&mut rng);
        let u = random_switch(&mut rng, &g);
        let s = g.switch_at(&u).map_err(|e| e.to_string())?;

        for c in all_circuits(&g) {
            ensure(g.sign_of_edges(&c) == s.sign_of_edges(&c), || {
                format!("trial {t}: circuit {c:?} changed sign")
            })?;
        }

        let fa = if rng.gen_bool(0.5) {
            exists_nzf(&g, 6, FlowMode::Integer(6), None)
                .witness
                .unwrap_or_else(|| random_assignment(&mut rng, &g, 6))
        } else {
            random_assignment(&mut rng, &g, 6)
        };
        let before = check_flow(&g, &fa, true).is_ok();
        valid_flows += before as usize;
        ensure(
            before == check_flow(&s, &fa.switched(&g, &u), true).is_ok(),
            || format!("trial {t}: flow verdict changed"),
        )?;

        ensure(flow_admissible(&g) == flow_admissible(&s), || {
            format!("trial {t}: admissibility changed")
        })?;

        let (p, q) = (flow_number(&g, 6, None), flow_number(&s, 6, None));
        ensure(phi_label(&p) == phi_label(&q), || {
            format!("trial {t}: phi {p:?} vs {q:?}")
        })?;

        let (f1, f2) = (
            random_assignment(&mut rng, &g, 4),
            random_assignment(&mut rng, &g, 5),
        );
        let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let sum = combine(a, &f1, b, &f2).map_err(|e| e.to_string())?;
        for v in 0..g.vertex_count() {
            let lhs = boundary(&g, &sum, v).map_err(|e| e.to_string())?;
            let rhs = a * boundary(&g, &f1, v).map_err(|e| e.to_string())?
                + b * boundary(&g, &f2, v).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || {
                format!("trial {t}: boundary at {v} is {lhs}, expected {rhs}")
            })?;
        }

        let k = rng.gen_range(2..=5);
        if exists_nzf(&g, k, FlowMode::Integer(k), None).exists {
            ensure(
                exists_nzf(&g, k + 1, FlowMode::Integer(k + 1), None).exists,
                || format!("trial {t}: {k}-NZF but no {}-NZF", k + 1),
            )?;
        }
    }
    Ok(format!(
        "{TRIALS} trials of each property, {valid_flows} with a valid flow"
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "figure templates",
            limit: secs(1),
            run: templates,
        },
        Criterion {
            name: "sharpness of 6",
            limit: secs(120),
            run: sharpness,
        },
        Criterion {
            name: "balanced Hamiltonian 6-NZF",
            limit: secs(600),
            run: balanced_hamiltonian,
        },
        Criterion {
            name: "cubic reduction",
            limit: secs(300),
            run: reduction,
        },
        Criterion {
            name: "odd cyclic Cayley flow number",
            limit: secs(1800),
            run: odd_cayley,
        },
        Criterion {
            name: "antibalanced 2-factor vs Z4-NZF",
            limit: secs(1800),
            run: antibalanced_factor,
        },
        Criterion {
            name: "extender soundness",
            limit: secs(10),
            run: extenders,
        },
        Criterion {
            name: "property suites",
            limit: secs(1800),
            run: properties,
        },
    ];
    let only: Option<BTreeSet<usize>> = std::env::var("SFF_ACCEPTANCE")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let verdict = match result {
            Ok(detail) if took <= c.limit => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over the {:?} limit: {detail}", c.limit),
            Err(why) => format!("FAIL  {why}"),
        };
        failed += verdict.starts_with("FAIL") as usize;
        println!(
            "criterion {id} ({}): {verdict} [{:.2}s]",
            c.name,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
