//! Signed multigraphs with stable edge ids and half-edge incidence.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, VecDeque};
use std::hash::{Hash, Hasher};

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_i64(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

impl Edge {
    /// Endpoint at `side` (0 is `u`, 1 is `v`).
    pub fn endpoint(&self, side: usize) -> VertexId {
        if side == 0 {
            self.u
        } else {
            self.v
        }
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn side_of(&self, w: VertexId) -> Option<usize> {
        if w == self.u {
            Some(0)
        } else if w == self.v {
            Some(1)
        } else {
            None
        }
    }
}

/// The half of `edge` lying at its endpoint `side`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub side: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge entry {index} is a loop at vertex {vertex}")]
    LoopRejected { index: usize, vertex: VertexId },
    #[error("edge entry {index} has endpoint {vertex} outside 0..{n}")]
    BadEndpoint {
        index: usize,
        vertex: VertexId,
        n: usize,
    },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {edge} is not incident with vertex {vertex}")]
    NotIncident { edge: EdgeId, vertex: VertexId },
    #[error("edge {0} is negative and cannot be contracted")]
    NegativeEdgeInContractionSet(EdgeId),
    #[error("subgraphs belong to different parent graphs")]
    MixedParents,
    #[error("subgraph does not belong to this graph")]
    ForeignSubgraph,
    #[error("symmetric difference of an empty list")]
    NoParts,
    #[error("not eulerian: {0}")]
    NotEulerian(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SwitchingSet(pub BTreeSet<VertexId>);

impl SwitchingSet {
    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }
}

/// Edge subset of a parent graph, identified by the parent's fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgraphRef {
    parent: u64,
    edges: BTreeSet<EdgeId>,
    spanning: bool,
}

impl SubgraphRef {
    pub fn parent(&self) -> u64 {
        self.parent
    }

    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }

    pub fn edge_vec(&self) -> Vec<EdgeId> {
        self.edges.iter().copied().collect()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_spanning(&self) -> bool {
        self.spanning
    }

    pub fn widened(mut self) -> SubgraphRef {
        self.spanning = true;
        self
    }

    /// Endpoints of the edge subset, or every vertex when widened.
    pub fn vertices(&self, g: &SignedGraph) -> BTreeSet<VertexId> {
        if self.spanning {
            return (0..g.vertex_count()).collect();
        }
        let mut out = BTreeSet::new();
        for &e in &self.edges {
            if let Some(edge) = g.edge(e) {
                out.insert(edge.u);
                out.insert(edge.v);
            }
        }
        out
    }
}

pub enum Balance {
    Balanced(SwitchingSet),
    Unbalanced(SubgraphRef),
}

/// Result of contracting a positive edge set.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: SignedGraph,
    /// Old vertex id to new vertex id.
    pub vertex_map: Vec<VertexId>,
    pub loops_removed: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Option<Edge>>,
    adj: Vec<Vec<HalfEdge>>,
}

impl SignedGraph {
    pub fn empty(n: usize) -> SignedGraph {
        SignedGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn build_graph(
        n: usize,
        edges: &[(VertexId, VertexId, Sign)],
    ) -> Result<SignedGraph, GraphError> {
        let mut g = SignedGraph::empty(n);
        for (index, &(u, v, sign)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::BadEndpoint {
                        index,
                        vertex: w,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::LoopRejected { index, vertex: u });
            }
            g.push_edge(u, v, sign);
        }
        Ok(g)
    }

    pub(crate) fn push_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub(crate) fn push_edge(&mut self, u: VertexId, v: VertexId, sign: Sign) -> EdgeId {
        debug_assert!(u != v && u < self.n && v < self.n);
        let id = self.edges.len();
        self.edges.push(Some(Edge { u, v, sign }));
        self.adj[u].push(HalfEdge { edge: id, side: 0 });
        self.adj[v].push(HalfEdge { edge: id, side: 1 });
        id
    }

    pub(crate) fn delete_edge(&mut self, e: EdgeId) {
        if let Some(edge) = self.edges[e].take() {
            self.adj[edge.u].retain(|h| h.edge != e);
            self.adj[edge.v].retain(|h| h.edge != e);
        }
    }

    /// Moves the endpoint of `e` at `side` to vertex `w`.
    pub(crate) fn reattach(&mut self, e: EdgeId, side: usize, w: VertexId) {
        let edge = self.edges[e].as_mut().expect("live edge");
        let old = edge.endpoint(side);
        if side == 0 {
            edge.u = w;
        } else {
            edge.v = w;
        }
        debug_assert!(edge.u != edge.v);
        self.adj[old].retain(|h| !(h.edge == e && h.side == side));
        let list = &mut self.adj[w];
        let pos = list.partition_point(|h| (h.edge, h.side) < (e, side));
        list.insert(pos, HalfEdge { edge: e, side });
    }

    #[cfg(test)]
    pub(crate) fn set_sign(&mut self, e: EdgeId, sign: Sign) {
        if let Some(edge) = self.edges[e].as_mut() {
            edge.sign = sign;
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    /// One past the largest edge id ever allocated.
    pub fn edge_id_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn has_id_gaps(&self) -> bool {
        self.edges.iter().any(|e| e.is_none())
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(e).and_then(|x| x.as_ref())
    }

    /// Panicking accessor for ids already known to be live.
    pub fn e(&self, e: EdgeId) -> Edge {
        self.edges[e].expect("live edge id")
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|e| (i, e)))
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges().map(|(i, _)| i).collect()
    }

    pub fn incident(&self, v: VertexId) -> &[HalfEdge] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.n).all(|v| self.degree(v) == d)
    }

    pub fn negative_edges(&self) -> Vec<EdgeId> {
        self.edges()
            .filter(|(_, e)| e.sign.is_negative())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn negative_count(&self) -> usize {
        self.edges().filter(|(_, e)| e.sign.is_negative()).count()
    }

    /// Edge ids joining `a` and `b`, ascending.
    pub fn edges_between(&self, a: VertexId, b: VertexId) -> Vec<EdgeId> {
        self.adj[a]
            .iter()
            .filter(|h| self.e(h.edge).other(a) == b)
            .map(|h| h.edge)
            .collect()
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.n.hash(&mut h);
        self.edges.hash(&mut h);
        h.finish()
    }

    pub fn subgraph<I: IntoIterator<Item = EdgeId>>(
        &self,
        edges: I,
    ) -> Result<SubgraphRef, GraphError> {
        let mut set = BTreeSet::new();
        for e in edges {
            if self.edge(e).is_none() {
                return Err(GraphError::UnknownEdge(e));
            }
            set.insert(e);
        }
        Ok(SubgraphRef {
            parent: self.fingerprint(),
            edges: set,
            spanning: false,
        })
    }

    pub fn full_subgraph(&self) -> SubgraphRef {
        SubgraphRef {
            parent: self.fingerprint(),
            edges: self.edge_ids().into_iter().collect(),
            spanning: true,
        }
    }

    pub(crate) fn check_ref(&self, h: &SubgraphRef) -> Result<(), GraphError> {
        if h.parent != self.fingerprint() {
            return Err(GraphError::ForeignSubgraph);
        }
        Ok(())
    }

    /// Copy with every sign replaced by `f(id, edge)`.
    pub fn map_signs(&self, mut f: impl FnMut(EdgeId, &Edge) -> Sign) -> SignedGraph {
        let mut g = self.clone();
        for (i, slot) in g.edges.iter_mut().enumerate() {
            if let Some(edge) = slot.as_mut() {
                edge.sign = f(i, edge);
            }
        }
        g
    }

    pub fn switch_at(&self, u: &SwitchingSet) -> Result<SignedGraph, GraphError> {
        if let Some(&v) = u.0.iter().find(|&&v| v >= self.n) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.map_signs(|_, e| {
            if u.contains(e.u) != u.contains(e.v) {
                e.sign.flip()
            } else {
                e.sign
            }
        }))
    }

    pub fn sign_of_edges<'a, I: IntoIterator<Item = &'a EdgeId>>(&self, edges: I) -> Sign {
        edges
            .into_iter()
            .fold(Sign::Positive, |acc, &e| acc * self.e(e).sign)
    }

    pub fn sign_of(&self, h: &SubgraphRef) -> Result<Sign, GraphError> {
        self.check_ref(h)?;
        Ok(self.sign_of_edges(h.edges()))
    }

    /// Potentials on a spanning forest of the edges accepted by `allowed`.
    ///
    /// Returns per-vertex potential, BFS parent edge, depth, component index,
    /// and for each component the first non-tree edge closing an unbalanced
    /// circuit (if any).
    pub(crate) fn potentials(&self, allowed: impl Fn(EdgeId) -> bool) -> Potentials {
        let mut pot = vec![Sign::Positive; self.n];
        let mut parent: Vec<Option<EdgeId>> = vec![None; self.n];
        let mut depth = vec![0usize; self.n];
        let mut comp = vec![usize::MAX; self.n];
        let mut conflict = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if comp[root] != usize::MAX {
                continue;
            }
            let c = conflict.len();
            conflict.push(None);
            comp[root] = c;
            queue.push_back(root);
            while let Some(a) = queue.pop_front() {
                for h in &self.adj[a] {
                    if !allowed(h.edge) {
                        continue;
                    }
                    let edge = self.e(h.edge);
                    let b = edge.other(a);
                    if comp[b] == usize::MAX {
                        comp[b] = c;
                        pot[b] = pot[a] * edge.sign;
                        parent[b] = Some(h.edge);
                        depth[b] = depth[a] + 1;
                        queue.push_back(b);
                    } else if pot[a] * pot[b] * edge.sign == Sign::Negative && conflict[c].is_none()
                    {
                        conflict[c] = Some(h.edge);
                    }
                }
            }
        }
        Potentials {
            pot,
            parent,
            depth,
            comp,
            conflict,
        }
    }

    /// Edges of the forest path between `a` and `b`.
    pub(crate) fn tree_path(
        &self,
        p: &Potentials,
        mut a: VertexId,
        mut b: VertexId,
    ) -> Vec<EdgeId> {
        let mut left = Vec::new();
        let mut right = Vec::new();
        while a != b {
            if p.depth[a] >= p.depth[b] {
                let e = p.parent[a].expect("tree path");
                left.push(e);
                a = self.e(e).other(a);
            } else {
                let e = p.parent[b].expect("tree path");
                right.push(e);
                b = self.e(e).other(b);
            }
        }
        right.reverse();
        left.extend(right);
        left
    }

    pub fn is_balanced(&self) -> Balance {
        let p = self.potentials(|_| true);
        if let Some(e) = p.conflict.iter().flatten().next() {
            let edge = self.e(*e);
            let mut circuit = self.tree_path(&p, edge.u, edge.v);
            circuit.push(*e);
            return Balance::Unbalanced(self.subgraph(circuit).expect("live edges"));
        }
        let set = (0..self.n)
            .filter(|&v| p.pot[v] == Sign::Negative)
            .collect();
        Balance::Balanced(SwitchingSet(set))
    }

    /// Switching set making every edge of the given forest positive.
    pub fn switching_for_forest(&self, forest: &BTreeSet<EdgeId>) -> SwitchingSet {
        let p = self.potentials(|e| forest.contains(&e));
        SwitchingSet(
            (0..self.n)
                .filter(|&v| p.pot[v] == Sign::Negative)
                .collect(),
        )
    }

    pub fn split_vertex(
        &self,
        v: VertexId,
        f: &BTreeSet<EdgeId>,
    ) -> Result<(SignedGraph, VertexId), GraphError> {
        if v >= self.n {
            return Err(GraphError::UnknownVertex(v));
        }
        for &e in f {
            match self.edge(e) {
                None => return Err(GraphError::UnknownEdge(e)),
                Some(edge) if edge.side_of(v).is_none() => {
                    return Err(GraphError::NotIncident { edge: e, vertex: v })
                }
                _ => {}
            }
        }
        let mut g = self.clone();
        let fresh = g.push_vertex();
        for &e in f {
            let side = g.e(e).side_of(v).expect("incident");
            g.reattach(e, side, fresh);
        }
        Ok((g, fresh))
    }

    pub fn contract_edges(&self, s: &BTreeSet<EdgeId>) -> Result<Contraction, GraphError> {
        for &e in s {
            match self.edge(e) {
                None => return Err(GraphError::UnknownEdge(e)),
                Some(edge) if edge.sign.is_negative() => {
                    return Err(GraphError::NegativeEdgeInContractionSet(e))
                }
                _ => {}
            }
        }
        let mut root: Vec<VertexId> = (0..self.n).collect();
        fn find(root: &mut [VertexId], mut x: VertexId) -> VertexId {
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        for &e in s {
            let edge = self.e(e);
            let (a, b) = (find(&mut root, edge.u), find(&mut root, edge.v));
            if a != b {
                root[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut vertex_map = vec![0; self.n];
        let mut next = 0;
        for v in 0..self.n {
            let r = find(&mut root, v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            vertex_map[v] = label[r];
        }
        let mut g = SignedGraph::empty(next);
        let mut loops_removed = Vec::new();
        for (i, slot) in self.edges.iter().enumerate() {
            let keep = match slot {
                Some(edge) if !s.contains(&i) => {
                    let (a, b) = (vertex_map[edge.u], vertex_map[edge.v]);
                    if a == b {
                        loops_removed.push(i);
                        None
                    } else {
                        Some(Edge {
                            u: a,
                            v: b,
                            sign: edge.sign,
                        })
                    }
                }
                _ => None,
            };
            g.edges.push(keep);
            if let Some(edge) = keep {
                g.adj[edge.u].push(HalfEdge { edge: i, side: 0 });
                g.adj[edge.v].push(HalfEdge { edge: i, side: 1 });
            }
        }
        Ok(Contraction {
            graph: g,
            vertex_map,
            loops_removed,
        })
    }

    /// Copy with the given edges deleted; remaining ids unchanged.
    pub fn without_edges(&self, removed: &BTreeSet<EdgeId>) -> SignedGraph {
        let mut g = self.clone();
        for &e in removed {
            if e < g.edges.len() {
                g.delete_edge(e);
            }
        }
        g
    }

    /// Connected components as vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let p = self.potentials(|_| true);
        let mut out = vec![Vec::new(); p.conflict.len()];
        for v in 0..self.n {
            out[p.comp[v]].push(v);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Edges outside a breadth-first spanning forest. Fixing the forest positive,
    /// each subset of these edges names one signature class up to switching.
    pub fn cotree_edges(&self) -> Vec<EdgeId> {
        let p = self.potentials(|_| true);
        let tree: BTreeSet<EdgeId> = p.parent.iter().flatten().copied().collect();
        self.edge_ids()
            .into_iter()
            .filter(|e| !tree.contains(e))
            .collect()
    }

    /// Class representative: bit `b` of `mask` makes `cotree[b]` negative, every
    /// other edge positive.
    pub fn signature_class(&self, cotree: &[EdgeId], mask: u64) -> SignedGraph {
        let negative: BTreeSet<EdgeId> = (0..cotree.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| cotree[b])
            .collect();
        self.map_signs(|e, _| {
            if negative.contains(&e) {
                Sign::Negative
            } else {
                Sign::Positive
            }
        })
    }

    /// Degree of `v` counting only edges in `edges`.
    pub fn degree_in(&self, edges: &BTreeSet<EdgeId>, v: VertexId) -> usize {
        self.adj[v]
            .iter()
            .filter(|h| edges.contains(&h.edge))
            .count()
    }

    pub fn is_even_set(&self, edges: &BTreeSet<EdgeId>) -> bool {
        let mut deg = vec![0usize; self.n];
        for &e in edges {
            let edge = self.e(e);
            deg[edge.u] += 1;
            deg[edge.v] += 1;
        }
        deg.iter().all(|d| d % 2 == 0)
    }

    /// Partition of an edge set into its connected pieces, ordered by smallest edge id.
    pub fn edge_components(&self, edges: &BTreeSet<EdgeId>) -> Vec<BTreeSet<EdgeId>> {
        let p = self.potentials(|e| edges.contains(&e));
        let mut by_comp: Vec<BTreeSet<EdgeId>> = vec![BTreeSet::new(); p.conflict.len()];
        for &e in edges {
            by_comp[p.comp[self.e(e).u]].insert(e);
        }
        let mut out: Vec<_> = by_comp.into_iter().filter(|c| !c.is_empty()).collect();
        out.sort_by_key(|c| *c.iter().next().expect("nonempty"));
        out
    }

    pub fn is_connected_set(&self, edges: &BTreeSet<EdgeId>) -> bool {
        self.edge_components(edges).len() <= 1
    }

    /// Closed walk through every edge of `comp` once, as departing half edges.
    pub fn euler_tour(&self, comp: &SubgraphRef) -> Result<Vec<HalfEdge>, GraphError> {
        self.check_ref(comp)?;
        let start = match comp
            .edges()
            .iter()
            .map(|&e| self.e(e).u.min(self.e(e).v))
            .min()
        {
            Some(s) => s,
            None => return Ok(Vec::new()),
        };
        self.euler_tour_from(comp.edges(), start)
    }

    pub(crate) fn euler_tour_from(
        &self,
        edges: &BTreeSet<EdgeId>,
        start: VertexId,
    ) -> Result<Vec<HalfEdge>, GraphError> {
        if !self.is_even_set(edges) {
            return Err(GraphError::NotEulerian("odd degree vertex".into()));
        }
        if !self.is_connected_set(edges) {
            return Err(GraphError::NotEulerian("disconnected".into()));
        }
        if edges.is_empty() {
            return Ok(Vec::new());
        }
        if self.degree_in(edges, start) == 0 {
            return Err(GraphError::NotEulerian(
                "start vertex not on the subgraph".into(),
            ));
        }
        let mut used = vec![false; self.edges.len()];
        let mut ptr = vec![0usize; self.n];
        let mut stack: Vec<(VertexId, Option<HalfEdge>)> = vec![(start, None)];
        let mut walk = Vec::with_capacity(edges.len());
        while let Some(&(v, via)) = stack.last() {
            let list = &self.adj[v];
            while ptr[v] < list.len()
                && (used[list[ptr[v]].edge] || !edges.contains(&list[ptr[v]].edge))
            {
                ptr[v] += 1;
            }
            if ptr[v] < list.len() {
                let h = list[ptr[v]];
                used[h.edge] = true;
                stack.push((self.e(h.edge).other(v), Some(h)));
            } else {
                stack.pop();
                if let Some(h) = via {
                    walk.push(h);
                }
            }
        }
        walk.reverse();
        Ok(walk)
    }

    pub fn boundary_cut(&self, h: &SubgraphRef) -> Result<BTreeSet<EdgeId>, GraphError> {
        self.check_ref(h)?;
        let inside = h.vertices(self);
        Ok(self
            .edges()
            .filter(|(_, e)| inside.contains(&e.u) != inside.contains(&e.v))
            .map(|(i, _)| i)
            .collect())
    }

    /// Shortest path between `a` and `b` inside `edges`; among shortest paths the
    /// one whose edge-id sequence read from `a` is lexicographically least.
    pub fn shortest_path_in(
        &self,
        edges: &BTreeSet<EdgeId>,
        a: VertexId,
        b: VertexId,
    ) -> Option<Vec<EdgeId>> {
        let mut dist = vec![usize::MAX; self.n];
        dist[b] = 0;
        let mut queue = VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            for h in &self.adj[x] {
                if !edges.contains(&h.edge) {
                    continue;
                }
                let y = self.e(h.edge).other(x);
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist[a] == usize::MAX {
            return None;
        }
        let mut path = Vec::with_capacity(dist[a]);
        let mut x = a;
        while x != b {
            let h = self.adj[x]
                .iter()
                .find(|h| edges.contains(&h.edge) && dist[self.e(h.edge).other(x)] + 1 == dist[x])
                .expect("distance decreases");
            path.push(h.edge);
            x = self.e(h.edge).other(x);
        }
        Some(path)
    }
}

pub(crate) struct Potentials {
    pub pot: Vec<Sign>,
    pub parent: Vec<Option<EdgeId>>,
    pub depth: Vec<usize>,
    pub comp: Vec<usize>,
    pub conflict: Vec<Option<EdgeId>>,
}

/// Edges occurring in an odd number of the parts.
pub fn symmetric_difference(parts: &[SubgraphRef]) -> Result<SubgraphRef, GraphError> {
    let first = parts.first().ok_or(GraphError::NoParts)?;
    if parts.iter().any(|p| p.parent != first.parent) {
        return Err(GraphError::MixedParents);
    }
    let mut edges = BTreeSet::new();
    for p in parts {
        for &e in &p.edges {
            if !edges.remove(&e) {
                edges.insert(e);
            }
        }
    }
    Ok(SubgraphRef {
        parent: first.parent,
        edges,
        spanning: false,
    })
}

pub(crate) fn xor_into(acc: &mut BTreeSet<EdgeId>, part: impl IntoIterator<Item = EdgeId>) {
    for e in part {
        if !acc.remove(&e) {
            acc.insert(e);
        }
    }
}

/// Vertex bijection `phi` with `b.edge(e) == phi(a.edge(e))` for every id, signs equal.
pub fn edge_id_isomorphism(a: &SignedGraph, b: &SignedGraph) -> Option<Vec<VertexId>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_ids() != b.edge_ids() {
        return None;
    }
    if a.edges().any(|(e, edge)| edge.sign != b.e(e).sign) {
        return None;
    }
    let mut phi = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for comp in a.components() {
        let seed = comp
            .iter()
            .flat_map(|&v| a.incident(v))
            .map(|h| h.edge)
            .min();
        let Some(seed) = seed else { continue };
        let mut found = None;
        for flip in [false, true] {
            if let Some(local) = propagate(a, b, seed, flip) {
                found = Some(local);
                break;
            }
        }
        for (x, y) in found? {
            if taken[y] {
                return None;
            }
            taken[y] = true;
            phi[x] = y;
        }
    }
    for x in 0..n {
        if phi[x] == usize::MAX {
            let y = (0..n).find(|&y| !taken[y] && b.degree(y) == 0)?;
            phi[x] = y;
            taken[y] = true;
        }
    }
    Some(phi)
}

fn propagate(
    a: &SignedGraph,
    b: &SignedGraph,
    seed: EdgeId,
    flip: bool,
) -> Option<Vec<(VertexId, VertexId)>> {
    let mut map = std::collections::BTreeMap::new();
    let (ea, eb) = (a.e(seed), b.e(seed));
    let (x, y) = if flip { (eb.v, eb.u) } else { (eb.u, eb.v) };
    map.insert(ea.u, x);
    map.insert(ea.v, y);
    let mut queue = VecDeque::from([ea.u, ea.v]);
    while let Some(w) = queue.pop_front() {
        let image = map[&w];
        for h in a.incident(w) {
            let target = b.e(h.edge);
            let side = target.side_of(image)?;
            let other_a = a.e(h.edge).other(w);
            let other_b = target.endpoint(1 - side);
            match map.get(&other_a) {
                Some(&m) if m != other_b => return None,
                Some(_) => {}
                None => {
                    map.insert(other_a, other_b);
                    queue.push_back(other_a);
                }
            }
        }
    }
    Some(map.into_iter().collect())
}
