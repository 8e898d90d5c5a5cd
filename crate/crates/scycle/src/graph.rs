//! Rooted multigraphs with loops and parallel edges, plus the elementary
//! algorithms everything else builds on: vertex deletion, biconnected
//! blocks, and deterministic shortest paths.
//!
//! Vertex and edge ids are dense non-negative indices, stable under
//! deletion (deleted slots are left vacant). All iteration orders are by
//! ascending id so that every operation in the crate is deterministic.
//! Graph values are immutable once built; operations that "modify" a
//! graph return a new one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::GraphError;

/// Identifier of a vertex, dense within a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Identifier of an edge. Parallel edges get distinct ids; a loop has
/// both endpoints equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite multigraph together with a distinguished root-vertex set S.
#[derive(Debug, Clone)]
pub struct RootedGraph {
    names: Vec<String>,
    vertex_present: Vec<bool>,
    /// Edge slot: `None` when the edge has been deleted.
    edges: Vec<Option<(VertexId, VertexId)>>,
    roots: BTreeSet<VertexId>,
    /// Per vertex: incident `(edge, other endpoint)`, ascending by edge id.
    /// A loop appears once, as `(e, v)`.
    adj: Vec<Vec<(EdgeId, VertexId)>>,
}

impl RootedGraph {
    pub fn new() -> Self {
        RootedGraph {
            names: Vec::new(),
            vertex_present: Vec::new(),
            edges: Vec::new(),
            roots: BTreeSet::new(),
            adj: Vec::new(),
        }
    }

    /// Adds a vertex with an autogenerated name `v<k>`.
    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.vertex_present.len() as u32;
        self.add_named_vertex(format!("v{id}"))
    }

    pub fn add_named_vertex(&mut self, name: impl Into<String>) -> VertexId {
        let id = VertexId(self.vertex_present.len() as u32);
        self.names.push(name.into());
        self.vertex_present.push(true);
        self.adj.push(Vec::new());
        id
    }

    /// Adds an edge; `u == v` makes a loop. Parallel edges are kept distinct.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let e = EdgeId(self.edges.len() as u32);
        self.edges.push(Some((u, v)));
        self.adj[u.0 as usize].push((e, v));
        if u != v {
            self.adj[v.0 as usize].push((e, u));
        }
        Ok(e)
    }

    pub fn mark_root(&mut self, v: VertexId) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        self.roots.insert(v);
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v.0))
        }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        (v.0 as usize) < self.vertex_present.len() && self.vertex_present[v.0 as usize]
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        (e.0 as usize) < self.edges.len() && self.edges[e.0 as usize].is_some()
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        self.edges
            .get(e.0 as usize)
            .copied()
            .flatten()
            .ok_or(GraphError::UnknownEdge(e.0))
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e.0 as usize), Some(Some((u, v))) if u == v)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v.0 as usize]
    }

    pub fn is_root(&self, v: VertexId) -> bool {
        self.roots.contains(&v)
    }

    pub fn roots(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.roots.iter().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_present
            .iter()
            .enumerate()
            .filter(|(_, p)| **p)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_some())
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_present.iter().filter(|p| **p).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    /// Incident `(edge, other endpoint)` pairs, ascending by edge id.
    /// A loop appears once.
    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adj[v.0 as usize]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.0 as usize]
            .iter()
            .map(|&(_, w)| if w == v { 2 } else { 1 })
            .sum()
    }

    /// Returns the subgraph obtained by removing the vertices in `xs`
    /// together with all incident edges. Roots are restricted accordingly.
    /// Ids of surviving vertices and edges are unchanged.
    pub fn delete_vertices(&self, xs: &BTreeSet<VertexId>) -> Result<RootedGraph, GraphError> {
        for &v in xs {
            self.check_vertex(v)?;
        }
        let mut g = self.clone();
        for &v in xs {
            g.vertex_present[v.0 as usize] = false;
            g.roots.remove(&v);
        }
        for slot in g.edges.iter_mut() {
            if let Some((u, v)) = *slot {
                if xs.contains(&u) || xs.contains(&v) {
                    *slot = None;
                }
            }
        }
        for (i, list) in g.adj.iter_mut().enumerate() {
            if !g.vertex_present[i] {
                list.clear();
            } else {
                list.retain(|&(e, _)| g.edges[e.0 as usize].is_some());
            }
        }
        Ok(g)
    }

    /// Like `delete_vertices` but for edges only.
    pub fn delete_edges(&self, es: &BTreeSet<EdgeId>) -> Result<RootedGraph, GraphError> {
        for &e in es {
            if !self.contains_edge(e) {
                return Err(GraphError::UnknownEdge(e.0));
            }
        }
        let mut g = self.clone();
        for &e in es {
            g.edges[e.0 as usize] = None;
        }
        for list in g.adj.iter_mut() {
            list.retain(|&(e, _)| !es.contains(&e));
        }
        Ok(g)
    }
}

impl Default for RootedGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// A simple path: alternating vertices and edges, no repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Path {
    /// Validates incidence and distinctness against `g`.
    pub fn new(
        g: &RootedGraph,
        vertices: Vec<VertexId>,
        edges: Vec<EdgeId>,
    ) -> Result<Path, GraphError> {
        if vertices.is_empty() || edges.len() + 1 != vertices.len() {
            return Err(GraphError::InvalidPath(
                "vertex/edge counts do not alternate".into(),
            ));
        }
        let mut seen_v = BTreeSet::new();
        for &v in &vertices {
            if !g.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v.0));
            }
            if !seen_v.insert(v) {
                return Err(GraphError::InvalidPath(format!("repeated vertex {v}")));
            }
        }
        let mut seen_e = BTreeSet::new();
        for (i, &e) in edges.iter().enumerate() {
            let (a, b) = g.endpoints(e)?;
            let (u, v) = (vertices[i], vertices[i + 1]);
            if !((a, b) == (u, v) || (a, b) == (v, u)) {
                return Err(GraphError::InvalidPath(format!(
                    "edge {e} is not incident with step {u}-{v}"
                )));
            }
            if !seen_e.insert(e) {
                return Err(GraphError::InvalidPath(format!("repeated edge {e}")));
            }
        }
        Ok(Path { vertices, edges })
    }

    pub fn single(v: VertexId) -> Path {
        Path {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Vertices other than the two endpoints.
    pub fn interior(&self) -> &[VertexId] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        Path {
            vertices: self.vertices.iter().rev().copied().collect(),
            edges: self.edges.iter().rev().copied().collect(),
        }
    }

    /// Splits at a vertex on the path: `(first..=v, v..=last)`.
    pub fn split_at(&self, v: VertexId) -> (Path, Path) {
        let i = self
            .vertices
            .iter()
            .position(|&x| x == v)
            .expect("split vertex not on path");
        (
            Path {
                vertices: self.vertices[..=i].to_vec(),
                edges: self.edges[..i].to_vec(),
            },
            Path {
                vertices: self.vertices[i..].to_vec(),
                edges: self.edges[i..].to_vec(),
            },
        )
    }

    /// Concatenation; `self.last()` must equal `other.first()` and the
    /// result must be simple.
    pub fn concat(&self, other: &Path) -> Result<Path, GraphError> {
        if self.last() != other.first() {
            return Err(GraphError::InvalidPath("concat endpoints differ".into()));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(GraphError::InvalidPath(format!(
                    "concat repeats vertex {v}"
                )));
            }
        }
        let mut seen_e = BTreeSet::new();
        for &e in &edges {
            if !seen_e.insert(e) {
                return Err(GraphError::InvalidPath(format!("concat repeats edge {e}")));
            }
        }
        Ok(Path { vertices, edges })
    }
}

/// A simple cycle: `edges[i]` joins `vertices[i]` and `vertices[(i+1) % n]`.
/// A loop edge is a cycle of length 1; two parallel edges form a cycle of
/// length 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn new(
        g: &RootedGraph,
        vertices: Vec<VertexId>,
        edges: Vec<EdgeId>,
    ) -> Result<Cycle, GraphError> {
        if vertices.is_empty() || vertices.len() != edges.len() {
            return Err(GraphError::InvalidCycle(
                "a cycle alternates n vertices and n edges".into(),
            ));
        }
        let n = vertices.len();
        let mut seen_v = BTreeSet::new();
        for &v in &vertices {
            if !g.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v.0));
            }
            if !seen_v.insert(v) {
                return Err(GraphError::InvalidCycle(format!("repeated vertex {v}")));
            }
        }
        let mut seen_e = BTreeSet::new();
        for (i, &e) in edges.iter().enumerate() {
            let (a, b) = g.endpoints(e)?;
            let (u, v) = (vertices[i], vertices[(i + 1) % n]);
            if !((a, b) == (u, v) || (a, b) == (v, u)) {
                return Err(GraphError::InvalidCycle(format!(
                    "edge {e} is not incident with step {u}-{v}"
                )));
            }
            if !seen_e.insert(e) {
                return Err(GraphError::InvalidCycle(format!("repeated edge {e}")));
            }
        }
        if n == 1 && !g.is_loop(edges[0]) {
            return Err(GraphError::InvalidCycle(
                "a 1-cycle must be a loop edge".into(),
            ));
        }
        Ok(Cycle { vertices, edges })
    }

    /// Closes a path `u ... v` with a final edge back from `v` to `u`.
    pub fn close_path(g: &RootedGraph, path: &Path, closing: EdgeId) -> Result<Cycle, GraphError> {
        let mut edges = path.edges().to_vec();
        edges.push(closing);
        Cycle::new(g, path.vertices().to_vec(), edges)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.iter().copied().collect()
    }

    pub fn is_s_cycle(&self, g: &RootedGraph) -> bool {
        self.vertices.iter().any(|&v| g.is_root(v))
    }

    pub fn disjoint_from(&self, other: &Cycle) -> bool {
        let mine = self.vertex_set();
        other.vertices.iter().all(|v| !mine.contains(v))
    }

    /// Rotation/reflection-invariant key; used for deterministic ordering
    /// and deduplication.
    pub fn canonical_key(&self) -> (usize, Vec<u32>, Vec<u32>) {
        let n = self.vertices.len();
        let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
        for rev in [false, true] {
            let (vs, es): (Vec<u32>, Vec<u32>) = if rev {
                // Reversed traversal: vertices reversed, edge order shifts.
                let vs: Vec<u32> = self.vertices.iter().rev().map(|v| v.0).collect();
                let mut es: Vec<u32> = self.edges.iter().rev().map(|e| e.0).collect();
                es.rotate_right(1);
                (vs, es)
            } else {
                (
                    self.vertices.iter().map(|v| v.0).collect(),
                    self.edges.iter().map(|e| e.0).collect(),
                )
            };
            for r in 0..n {
                let mut v2 = vs.clone();
                v2.rotate_left(r);
                let mut e2 = es.clone();
                e2.rotate_left(r);
                if best.as_ref().is_none_or(|b| (&v2, &e2) < (&b.0, &b.1)) {
                    best = Some((v2, e2));
                }
            }
        }
        let (v, e) = best.unwrap();
        (n, v, e)
    }

    /// The two arcs of the cycle between distinct `a` and `b`, each
    /// returned as a path from `a` to `b`. Meaningful for cycles with at
    /// least two vertices.
    pub fn arcs_between(&self, a: VertexId, b: VertexId) -> (Path, Path) {
        assert_ne!(a, b);
        let n = self.vertices.len();
        let ia = self.vertices.iter().position(|&x| x == a).unwrap();
        let walk = |from: usize, to: usize| -> (Vec<VertexId>, Vec<EdgeId>) {
            let mut vs = vec![self.vertices[from]];
            let mut es = Vec::new();
            let mut i = from;
            while self.vertices[i] != self.vertices[to] {
                es.push(self.edges[i]);
                i = (i + 1) % n;
                vs.push(self.vertices[i]);
            }
            (vs, es)
        };
        let ib = self.vertices.iter().position(|&x| x == b).unwrap();
        let (v1, e1) = walk(ia, ib);
        let (v2r, e2r) = walk(ib, ia);
        let p1 = Path {
            vertices: v1,
            edges: e1,
        };
        let p2 = Path {
            vertices: v2r.into_iter().rev().collect(),
            edges: e2r.into_iter().rev().collect(),
        };
        (p1, p2)
    }
}

/// A subgraph given by explicit vertex and edge sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    pub fn from_edges(g: &RootedGraph, edges: impl IntoIterator<Item = EdgeId>) -> Subgraph {
        let mut s = Subgraph::default();
        for e in edges {
            let (u, v) = g.endpoints(e).expect("edge in host graph");
            s.edges.insert(e);
            s.vertices.insert(u);
            s.vertices.insert(v);
        }
        s
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        Subgraph {
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Connected components (vertex sets) of the subgraph restricted to
    /// `allowed` vertices.
    pub fn components_avoiding(
        &self,
        g: &RootedGraph,
        forbidden: &BTreeSet<VertexId>,
    ) -> Vec<BTreeSet<VertexId>> {
        let mut comps = Vec::new();
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for &start in &self.vertices {
            if forbidden.contains(&start) || seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(u) = stack.pop() {
                comp.insert(u);
                for &(e, w) in g.incident(u) {
                    if !self.edges.contains(&e) || forbidden.contains(&w) {
                        continue;
                    }
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// True when the subgraph (restricted to its own vertices/edges) has no
    /// cycle: for a multigraph this is exactly `m = n - c`.
    pub fn is_forest(&self, g: &RootedGraph) -> bool {
        for &e in &self.edges {
            if g.is_loop(e) {
                return false;
            }
        }
        let comps = self.components_avoiding(g, &BTreeSet::new());
        self.edges.len() + comps.len() == self.vertices.len()
    }
}

/// One block of the block decomposition: a maximal subgraph without a cut
/// vertex. Bridges and loops form single-edge blocks; isolated vertices
/// form edgeless blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Block {
    /// A block contains a cycle iff it is a loop block or has at least two
    /// edges.
    pub fn has_cycle(&self, g: &RootedGraph) -> bool {
        if self.edges.len() >= 2 {
            return true;
        }
        self.edges.iter().any(|&e| g.is_loop(e))
    }
}

/// Biconnected blocks of `g`, in a deterministic order.
pub fn blocks(g: &RootedGraph) -> Vec<Block> {
    struct Dfs<'a> {
        g: &'a RootedGraph,
        num: BTreeMap<VertexId, usize>,
        low: BTreeMap<VertexId, usize>,
        counter: usize,
        edge_stack: Vec<EdgeId>,
        out: Vec<Block>,
    }

    impl Dfs<'_> {
        fn run(&mut self, u: VertexId, parent_edge: Option<EdgeId>) {
            self.counter += 1;
            self.num.insert(u, self.counter);
            self.low.insert(u, self.counter);
            for &(e, w) in self.g.incident(u) {
                if Some(e) == parent_edge {
                    continue;
                }
                if w == u {
                    // Loop: its own block.
                    self.out.push(Block {
                        vertices: BTreeSet::from([u]),
                        edges: BTreeSet::from([e]),
                    });
                    continue;
                }
                match self.num.get(&w).copied() {
                    None => {
                        self.edge_stack.push(e);
                        self.run(w, Some(e));
                        let low_w = self.low[&w];
                        let low_u = self.low[&u];
                        self.low.insert(u, low_u.min(low_w));
                        if low_w >= self.num[&u] {
                            // Pop the block rooted at edge e.
                            let mut edges = BTreeSet::new();
                            while let Some(top) = self.edge_stack.pop() {
                                edges.insert(top);
                                if top == e {
                                    break;
                                }
                            }
                            let mut vertices = BTreeSet::new();
                            for &be in &edges {
                                let (a, b) = self.g.endpoints(be).unwrap();
                                vertices.insert(a);
                                vertices.insert(b);
                            }
                            self.out.push(Block { vertices, edges });
                        }
                    }
                    Some(num_w) if num_w < self.num[&u] => {
                        // Back edge.
                        self.edge_stack.push(e);
                        let low_u = self.low[&u];
                        self.low.insert(u, low_u.min(num_w));
                    }
                    Some(_) => {
                        // Already handled from the other side.
                    }
                }
            }
        }
    }

    let mut dfs = Dfs {
        g,
        num: BTreeMap::new(),
        low: BTreeMap::new(),
        counter: 0,
        edge_stack: Vec::new(),
        out: Vec::new(),
    };
    for v in g.vertices() {
        if !dfs.num.contains_key(&v) {
            dfs.run(v, None);
        }
    }
    // Isolated vertices (no incident edge) form K1 blocks.
    let covered: BTreeSet<VertexId> = dfs
        .out
        .iter()
        .flat_map(|b| b.vertices.iter().copied())
        .collect();
    for v in g.vertices() {
        if !covered.contains(&v) && g.incident(v).is_empty() {
            dfs.out.push(Block {
                vertices: BTreeSet::from([v]),
                edges: BTreeSet::new(),
            });
        }
    }
    dfs.out
}

/// Deterministic shortest path from `u` to `v` avoiding `forbidden`
/// vertices and `forbidden_edges`. Among minimum-length paths the
/// lexicographically smallest vertex sequence is returned, with parallel
/// edges resolved to the smallest edge id.
pub fn shortest_path_avoiding(
    g: &RootedGraph,
    u: VertexId,
    v: VertexId,
    forbidden: &BTreeSet<VertexId>,
    forbidden_edges: &BTreeSet<EdgeId>,
) -> Result<Option<Path>, GraphError> {
    if !g.contains_vertex(u) {
        return Err(GraphError::UnknownVertex(u.0));
    }
    if !g.contains_vertex(v) {
        return Err(GraphError::UnknownVertex(v.0));
    }
    for &f in forbidden {
        if !g.contains_vertex(f) {
            return Err(GraphError::UnknownVertex(f.0));
        }
    }
    if forbidden.contains(&u) || forbidden.contains(&v) {
        return Ok(None);
    }
    if u == v {
        return Ok(Some(Path::single(u)));
    }
    // BFS distances to v.
    let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
    dist.insert(v, 0);
    let mut frontier = vec![v];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            let d = dist[&x];
            for &(e, w) in g.incident(x) {
                if w == x || forbidden.contains(&w) || forbidden_edges.contains(&e) {
                    continue;
                }
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let Some(&total) = dist.get(&u) else {
        return Ok(None);
    };
    // Greedy reconstruction: smallest next vertex that stays on a shortest
    // path, then smallest connecting edge id.
    let mut vertices = vec![u];
    let mut edges = Vec::new();
    let mut cur = u;
    let mut remaining = total;
    while remaining > 0 {
        let mut best: Option<(VertexId, EdgeId)> = None;
        for &(e, w) in g.incident(cur) {
            if w == cur || forbidden.contains(&w) || forbidden_edges.contains(&e) {
                continue;
            }
            if dist.get(&w) == Some(&(remaining - 1)) {
                match best {
                    Some((bw, be)) if (w, e) >= (bw, be) => {}
                    _ => best = Some((w, e)),
                }
            }
        }
        let (w, e) = best.expect("BFS distance is realizable");
        vertices.push(w);
        edges.push(e);
        cur = w;
        remaining -= 1;
    }
    Ok(Some(Path { vertices, edges }))
}

/// `shortest_path_avoiding` with no forbidden edges.
pub fn shortest_path(
    g: &RootedGraph,
    u: VertexId,
    v: VertexId,
    forbidden: &BTreeSet<VertexId>,
) -> Result<Option<Path>, GraphError> {
    shortest_path_avoiding(g, u, v, forbidden, &BTreeSet::new())
}

// ---------------------------------------------------------------------------
// The ".rg" text format.
// ---------------------------------------------------------------------------

/// Parses the line-oriented rooted-graph format:
///
/// ```text
/// # comment
/// vertex <name>
/// edge <name> <name>
/// root <name>
/// ```
///
/// Parsing is strict: undeclared names, duplicate `vertex` lines, and
/// unknown directives are errors carrying the offending line number.
pub fn parse_rg(text: &str) -> Result<RootedGraph, GraphError> {
    let mut g = RootedGraph::new();
    let mut by_name: BTreeMap<String, VertexId> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut parts = line.split_whitespace();
        let Some(directive) = parts.next() else {
            continue;
        };
        let err = |message: String| GraphError::Parse {
            line: line_no,
            message,
        };
        match directive {
            "vertex" => {
                let name = parts
                    .next()
                    .ok_or_else(|| err("vertex needs a name".into()))?;
                if parts.next().is_some() {
                    return Err(err("vertex takes exactly one name".into()));
                }
                if by_name.contains_key(name) {
                    return Err(err(format!("duplicate vertex {name}")));
                }
                let id = g.add_named_vertex(name);
                by_name.insert(name.to_string(), id);
            }
            "edge" => {
                let a = parts
                    .next()
                    .ok_or_else(|| err("edge needs two endpoints".into()))?;
                let b = parts
                    .next()
                    .ok_or_else(|| err("edge needs two endpoints".into()))?;
                if parts.next().is_some() {
                    return Err(err("edge takes exactly two endpoints".into()));
                }
                let &u = by_name
                    .get(a)
                    .ok_or_else(|| err(format!("undeclared vertex {a}")))?;
                let &v = by_name
                    .get(b)
                    .ok_or_else(|| err(format!("undeclared vertex {b}")))?;
                g.add_edge(u, v).unwrap();
            }
            "root" => {
                let a = parts.next().ok_or_else(|| err("root needs a name".into()))?;
                if parts.next().is_some() {
                    return Err(err("root takes exactly one name".into()));
                }
                let &v = by_name
                    .get(a)
                    .ok_or_else(|| err(format!("undeclared vertex {a}")))?;
                g.mark_root(v).unwrap();
            }
            other => {
                return Err(err(format!("unknown directive {other}")));
            }
        }
    }
    Ok(g)
}

/// Writes `g` in the .rg format using the stored vertex names.
pub fn write_rg(g: &RootedGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {}\n", g.vertex_name(v)));
    }
    for e in g.edge_ids() {
        let (u, v) = g.endpoints(e).unwrap();
        out.push_str(&format!("edge {} {}\n", g.vertex_name(u), g.vertex_name(v)));
    }
    for r in g.roots() {
        out.push_str(&format!("root {}\n", g.vertex_name(r)));
    }
    out
}

/// Canonical .rg text: names replaced by the rank of each vertex id, edges
/// listed with sorted endpoints in sorted order. Two graphs that differ
/// only in names or id gaps canonicalize identically.
pub fn canonical_rg_text(g: &RootedGraph) -> String {
    let order: Vec<VertexId> = g.vertices().collect();
    let rank: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = String::new();
    for i in 0..order.len() {
        out.push_str(&format!("vertex {i}\n"));
    }
    let mut pairs: Vec<(usize, usize)> = g
        .edge_ids()
        .map(|e| {
            let (u, v) = g.endpoints(e).unwrap();
            let (a, b) = (rank[&u], rank[&v]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort();
    for (a, b) in pairs {
        out.push_str(&format!("edge {a} {b}\n"));
    }
    for r in g.roots() {
        out.push_str(&format!("root {}\n", rank[&r]));
    }
    out
}

/// Hex SHA-256 digest of the canonical .rg text; binds certificates to the
/// instance they were issued for.
pub fn graph_hash(g: &RootedGraph) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(canonical_rg_text(g).as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
