//! Flow templates read from versioned JSON tables.
//!
//! Each file holds `{"version": 1, "name", "family", "n"?, "k", "rows": [...]}`.
//! A row reads `"<slot>: <a> <op> <b> = <value>"`, where `op` is `->` (flow from
//! `a` to `b` along a positive edge or path), `<>` (negative edge, both halves
//! pointing away from its ends) or `><` (negative edge, both halves pointing in).
//! Ladder families name their edges `r{i}` (rung `x_i y_i`), `cx{i}` (`x_i x_{i+1}`)
//! and `cy{i}`; the `corners` family names the arcs between four corners of a
//! Hamiltonian circuit and two chords `e1`, `e2`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::flow::{check_flow, FlowAssignment, FlowMode};
use crate::graph::{EdgeId, SignedGraph, VertexId};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Along,
    Extroverted,
    Introverted,
}

impl Op {
    /// Half-edge directions at `a` and `b`.
    pub fn taus(self) -> (i8, i8) {
        match self {
            Op::Along => (1, -1),
            Op::Extroverted => (1, 1),
            Op::Introverted => (-1, -1),
        }
    }

    pub fn is_negative(self) -> bool {
        self != Op::Along
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub slot: String,
    pub a: String,
    pub op: Op,
    pub b: String,
    pub value: i64,
}

impl FromStr for Row {
    type Err = String;

    fn from_str(s: &str) -> Result<Row, String> {
        let (slot, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("missing ':' in {s:?}"))?;
        let (lhs, value) = rest
            .split_once('=')
            .ok_or_else(|| format!("missing '=' in {s:?}"))?;
        let parts: Vec<&str> = lhs.split_whitespace().collect();
        let [a, op, b] = parts[..] else {
            return Err(format!("expected '<a> <op> <b>' in {s:?}"));
        };
        let op = match op {
            "->" => Op::Along,
            "<>" => Op::Extroverted,
            "><" => Op::Introverted,
            other => return Err(format!("unknown operator {other:?}")),
        };
        let value = value
            .trim()
            .parse()
            .map_err(|_| format!("bad value in {s:?}"))?;
        Ok(Row {
            slot: slot.trim().to_string(),
            a: a.to_string(),
            op,
            b: b.to_string(),
            value,
        })
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            Op::Along => "->",
            Op::Extroverted => "<>",
            Op::Introverted => "><",
        };
        write!(
            f,
            "{}: {} {} {} = {}",
            self.slot, self.a, op, self.b, self.value
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Corners,
    CircularLadder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub family: Family,
    /// Rung count for ladder families; 0 otherwise.
    pub n: usize,
    pub k: i64,
    pub rows: Vec<Row>,
}

impl Template {
    pub fn row(&self, slot: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.slot == slot)
    }
}

#[derive(Deserialize)]
struct TemplateFile {
    version: u32,
    name: String,
    family: String,
    #[serde(default)]
    n: usize,
    k: i64,
    rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("{file}: {reason}")]
    Parse { file: String, reason: String },
    #[error("template {0:?} is not available")]
    Missing(String),
    #[error("template {name:?} does not fit: {reason}")]
    Mismatch { name: String, reason: String },
    #[error("cannot read {0}")]
    Io(String),
}

fn parse(file: &str, text: &str) -> Result<Template, TemplateError> {
    let err = |reason: String| TemplateError::Parse {
        file: file.to_string(),
        reason,
    };
    let raw: TemplateFile = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    if raw.version != FORMAT_VERSION {
        return Err(err(format!("unsupported version {}", raw.version)));
    }
    let family = match raw.family.as_str() {
        "corners" => Family::Corners,
        "circular-ladder" => Family::CircularLadder,
        other => return Err(err(format!("unknown family {other:?}"))),
    };
    let rows = raw
        .rows
        .iter()
        .map(|r| r.parse())
        .collect::<Result<Vec<Row>, String>>()
        .map_err(err)?;
    let mut seen = std::collections::BTreeSet::new();
    if let Some(dup) = rows.iter().find(|r| !seen.insert(r.slot.clone())) {
        return Err(err(format!("slot {:?} appears twice", dup.slot)));
    }
    Ok(Template {
        name: raw.name,
        family,
        n: raw.n,
        k: raw.k,
        rows,
    })
}

const EMBEDDED: [(&str, &str); 7] = [
    ("fig3.json", include_str!("../data/templates/fig3.json")),
    ("fig4.json", include_str!("../data/templates/fig4.json")),
    ("fig8.json", include_str!("../data/templates/fig8.json")),
    ("fig9.json", include_str!("../data/templates/fig9.json")),
    ("fig10.json", include_str!("../data/templates/fig10.json")),
    ("fig11.json", include_str!("../data/templates/fig11.json")),
    ("fig12.json", include_str!("../data/templates/fig12.json")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateSet {
    by_name: BTreeMap<String, Template>,
}

impl TemplateSet {
    pub fn embedded() -> TemplateSet {
        let by_name = EMBEDDED
            .iter()
            .map(|(file, text)| {
                let t = parse(file, text).expect("embedded templates parse");
                (t.name.clone(), t)
            })
            .collect();
        TemplateSet { by_name }
    }

    /// Embedded tables, replaced by any `*.json` table found in `dir`.
    pub fn load_dir(dir: &Path) -> Result<TemplateSet, TemplateError> {
        let mut set = TemplateSet::embedded();
        let entries =
            std::fs::read_dir(dir).map_err(|_| TemplateError::Io(dir.display().to_string()))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths
            .into_iter()
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
        {
            let text = std::fs::read_to_string(&path)
                .map_err(|_| TemplateError::Io(path.display().to_string()))?;
            let t = parse(&path.display().to_string(), &text)?;
            set.by_name.insert(t.name.clone(), t);
        }
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Result<&Template, TemplateError> {
        self.by_name
            .get(name)
            .ok_or_else(|| TemplateError::Missing(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.by_name.keys().map(String::as_str)
    }
}

/// Tables in use: `SFF_DATA_DIR` if set (read once), else the embedded ones.
pub fn active() -> Result<&'static TemplateSet, TemplateError> {
    static ACTIVE: OnceLock<Result<TemplateSet, TemplateError>> = OnceLock::new();
    ACTIVE
        .get_or_init(|| match std::env::var_os("SFF_DATA_DIR") {
            Some(dir) => TemplateSet::load_dir(Path::new(&dir)),
            None => Ok(TemplateSet::embedded()),
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// A Hamiltonian circuit read as a cyclic vertex sequence; `edges[i]` joins
/// `verts[i]` and `verts[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub verts: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub pos: Vec<usize>,
}

impl Circle {
    /// Starts at the smallest vertex; `None` unless `edges` is a Hamiltonian circuit.
    pub fn from_circuit(
        g: &SignedGraph,
        edges: &std::collections::BTreeSet<EdgeId>,
    ) -> Option<Circle> {
        let n = g.vertex_count();
        if n < 2
            || edges.len() != n
            || (0..n).any(|v| g.degree_in(edges, v) != 2)
            || !g.is_connected_set(edges)
        {
            return None;
        }
        let tour = g.euler_tour_from(edges, 0).ok()?;
        let verts: Vec<VertexId> = tour.iter().map(|h| g.e(h.edge).endpoint(h.side)).collect();
        let mut pos = vec![0; n];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        Some(Circle {
            edges: tour.iter().map(|h| h.edge).collect(),
            verts,
            pos,
        })
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Position one step from `i`; `forward` follows `edges`.
    pub fn step(&self, i: usize, forward: bool) -> usize {
        let n = self.len();
        if forward {
            (i + 1) % n
        } else {
            (i + n - 1) % n
        }
    }

    pub fn edge_at(&self, i: usize, forward: bool) -> EdgeId {
        if forward {
            self.edges[i]
        } else {
            self.edges[self.step(i, false)]
        }
    }

    /// Positions from `a` to `b` inclusive, walking in one direction.
    pub fn walk(&self, a: usize, b: usize, forward: bool) -> Vec<usize> {
        let mut out = vec![a];
        let mut i = a;
        while i != b {
            i = self.step(i, forward);
            out.push(i);
        }
        out
    }

    /// Edges between consecutive positions of a walk.
    pub fn walk_edges(&self, walk: &[usize], forward: bool) -> Vec<EdgeId> {
        walk[..walk.len().saturating_sub(1)]
            .iter()
            .map(|&i| self.edge_at(i, forward))
            .collect()
    }
}

/// Integer flow of a `corners` template placed on `circle`.
///
/// A segment row covers the arc between its two corners that avoids every other
/// corner; chord rows bind to `chords`. Edges outside the template carry 0.
pub fn apply_corners(
    g: &SignedGraph,
    t: &Template,
    circle: &Circle,
    corners: &BTreeMap<&str, VertexId>,
    chords: &BTreeMap<&str, EdgeId>,
) -> Result<FlowAssignment, TemplateError> {
    let bad = |reason: String| TemplateError::Mismatch {
        name: t.name.clone(),
        reason,
    };
    if t.family != Family::Corners {
        return Err(bad("not a corners template".into()));
    }
    let corner = |c: &str| {
        corners
            .get(c)
            .copied()
            .ok_or_else(|| bad(format!("corner {c:?} not bound")))
    };
    let mut fa = FlowAssignment::zero(g, FlowMode::Integer(t.k));
    let orient =
        |fa: &mut FlowAssignment, e: EdgeId, a: VertexId, (ta, tb): (i8, i8), value: i64| {
            let edge = g.e(e);
            let sa = edge.side_of(a).expect("endpoint");
            let mut tau = [tb; 2];
            tau[sa] = ta;
            fa.orientation.set(e, tau);
            fa.values[e] = value;
        };
    for row in &t.rows {
        let (a, b) = (corner(&row.a)?, corner(&row.b)?);
        if let Some(&e) = chords.get(row.slot.as_str()) {
            let edge = g.edge(e).ok_or_else(|| bad(format!("chord {e} missing")))?;
            if edge.other(a) != b || edge.side_of(a).is_none() {
                return Err(bad(format!(
                    "chord {e} does not join {} and {}",
                    row.a, row.b
                )));
            }
            if edge.sign.is_negative() != row.op.is_negative() {
                return Err(bad(format!("chord {e} has the wrong sign")));
            }
            orient(&mut fa, e, a, row.op.taus(), row.value);
            continue;
        }
        if row.op != Op::Along {
            return Err(bad(format!("segment {} must use '->'", row.slot)));
        }
        let others: Vec<usize> = corners
            .values()
            .filter(|&&c| c != a && c != b)
            .map(|&c| circle.pos[c])
            .collect();
        let (pa, pb) = (circle.pos[a], circle.pos[b]);
        let fits: Vec<bool> = [true, false]
            .into_iter()
            .filter(|&fw| circle.walk(pa, pb, fw).iter().all(|p| !others.contains(p)))
            .collect();
        let [forward] = fits[..] else {
            return Err(bad(format!(
                "segment {} is not determined by its corners",
                row.slot
            )));
        };
        let walk = circle.walk(pa, pb, forward);
        for (i, e) in circle.walk_edges(&walk, forward).into_iter().enumerate() {
            if g.e(e).sign.is_negative() {
                return Err(bad(format!("circle edge {e} is negative")));
            }
            orient(
                &mut fa,
                e,
                circle.verts[walk[i]],
                Op::Along.taus(),
                row.value,
            );
        }
    }
    check_flow(g, &fa, false).map_err(|v| bad(v.to_string()))?;
    Ok(fa)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let row: Row = "r0: x0 >< y0 = 3".parse().unwrap();
        assert_eq!(row.op, Op::Introverted);
        assert_eq!(row.value, 3);
        assert_eq!(row.to_string(), "r0: x0 >< y0 = 3");
        assert!("r0 x0 -> y0 = 1".parse::<Row>().is_err());
        assert!("r0: x0 => y0 = 1".parse::<Row>().is_err());
    }

    #[test]
    fn embedded_set_is_complete() {
        let set = TemplateSet::embedded();
        let names: Vec<_> = set.names().collect();
        assert_eq!(
            names,
            ["fig10", "fig11", "fig12", "fig3", "fig4", "fig8", "fig9"]
        );
        let ks: Vec<i64> = ["fig3", "fig4", "fig8", "fig9", "fig10", "fig11", "fig12"]
            .iter()
            .map(|n| set.get(n).unwrap().k)
            .collect();
        assert_eq!(ks, [3, 4, 4, 4, 6, 4, 4]);
    }

    #[test]
    fn corner_templates_conserve_flow_on_an_octagon() {
        use crate::graph::Sign::{Negative as N, Positive as P};
        let mut edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8, P)).collect();
        edges.push((0, 4, N));
        edges.push((2, 6, N));
        let g = SignedGraph::build_graph(8, &edges).unwrap();
        let circle = Circle::from_circuit(&g, &(0..8).collect()).unwrap();
        let set = TemplateSet::embedded();
        let chords = BTreeMap::from([("e1", 8), ("e2", 9)]);
        let corners = BTreeMap::from([("u1", 0), ("u2", 2), ("v1", 4), ("v2", 6)]);
        let f = apply_corners(&g, set.get("fig3").unwrap(), &circle, &corners, &chords).unwrap();
        assert!((0..8).all(|e| f.values[e] == 1));
        assert_eq!((f.values[8], f.values[9]), (2, 2));

        edges.truncate(8);
        edges.push((0, 2, N));
        edges.push((4, 6, N));
        let g = SignedGraph::build_graph(8, &edges).unwrap();
        let corners = BTreeMap::from([("u1", 0), ("v1", 2), ("u2", 6), ("v2", 4)]);
        let f = apply_corners(&g, set.get("fig4").unwrap(), &circle, &corners, &chords).unwrap();
        assert_eq!(f.values[2..4], [3, 3]);
        check_flow(&g, &f, true).unwrap();
    }

    #[test]
    fn misplaced_corners_are_rejected() {
        use crate::graph::Sign::{Negative as N, Positive as P};
        let mut edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8, P)).collect();
        edges.push((0, 4, N));
        edges.push((2, 6, N));
        let g = SignedGraph::build_graph(8, &edges).unwrap();
        let circle = Circle::from_circuit(&g, &(0..8).collect()).unwrap();
        let chords = BTreeMap::from([("e1", 8), ("e2", 9)]);
        let corners = BTreeMap::from([("u1", 0), ("u2", 4), ("v1", 2), ("v2", 6)]);
        let err = apply_corners(
            &g,
            TemplateSet::embedded().get("fig3").unwrap(),
            &circle,
            &corners,
            &chords,
        );
        assert!(matches!(err, Err(TemplateError::Mismatch { .. })));
    }

    #[test]
    fn bad_version_is_rejected() {
        let text = r#"{"version": 2, "name": "x", "family": "corners", "k": 3, "rows": []}"#;
        assert!(matches!(
            parse("x.json", text),
            Err(TemplateError::Parse { .. })
        ));
    }
}
