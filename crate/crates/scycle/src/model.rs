//! Subdivision models: embeddings of catalog patterns into a host graph,
//! and the path machinery built on them (mid decomposition with gates,
//! W-paths, small hitting sets inside a model).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::ModelError;
use crate::graph::{EdgeId, Path, RootedGraph, Subgraph, VertexId};
use crate::pattern::PatternId;

/// A certifying path of a model: the image of one pattern edge. For a
/// loop pattern edge the walk is closed (`first == last`); otherwise it is
/// a simple open path. Interior vertices are everything but the ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertPath {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl CertPath {
    pub fn open(path: &Path) -> CertPath {
        CertPath {
            vertices: path.vertices().to_vec(),
            edges: path.edges().to_vec(),
        }
    }

    /// A closed walk anchored at `vertices[0] == vertices[last]`.
    pub fn closed(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> CertPath {
        CertPath { vertices, edges }
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

    pub fn is_closed(&self) -> bool {
        self.vertices.len() >= 2 && self.first() == self.last()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn interior(&self) -> &[VertexId] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    /// Open cert paths convert to plain paths.
    pub fn to_path(&self, g: &RootedGraph) -> Result<Path, ModelError> {
        Path::new(g, self.vertices.clone(), self.edges.clone())
            .map_err(|e| ModelError::Invalid(format!("certifying path is not a path: {e}")))
    }

    fn validate(
        &self,
        g: &RootedGraph,
        from: VertexId,
        to: VertexId,
        loop_edge: bool,
    ) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::Invalid(m));
        if self.edges.is_empty() || self.vertices.len() != self.edges.len() + 1 {
            return bad("certifying path must alternate and have >= 1 edge".into());
        }
        if self.first() != from || self.last() != to {
            return bad(format!(
                "certifying path runs {}..{} but the pattern edge needs {}..{}",
                self.first(),
                self.last(),
                from,
                to
            ));
        }
        if loop_edge != self.is_closed() {
            return bad("closedness of a certifying path must match the pattern edge".into());
        }
        let body = if loop_edge {
            &self.vertices[..self.vertices.len() - 1]
        } else {
            &self.vertices[..]
        };
        let mut seen = BTreeSet::new();
        for &v in body {
            if !g.contains_vertex(v) {
                return bad(format!("unknown vertex {v}"));
            }
            if !seen.insert(v) {
                return bad(format!("certifying path repeats vertex {v}"));
            }
        }
        let mut seen_e = BTreeSet::new();
        for (i, &e) in self.edges.iter().enumerate() {
            let (a, b) = g
                .endpoints(e)
                .map_err(|_| ModelError::Invalid(format!("unknown edge {e}")))?;
            let (u, v) = (self.vertices[i], self.vertices[i + 1]);
            if !((a, b) == (u, v) || (a, b) == (v, u)) {
                return bad(format!("edge {e} not incident with step {u}-{v}"));
            }
            if !seen_e.insert(e) {
                return bad(format!("certifying path repeats edge {e}"));
            }
        }
        Ok(())
    }
}

/// Where a host vertex sits inside a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loc {
    Branch(usize),
    Interior { edge: usize, vertex: VertexId },
}

/// An embedding of a pattern into the host graph: an injective branch map
/// plus internally disjoint certifying paths whose union is an S-cycle
/// subgraph.
#[derive(Debug, Clone)]
pub struct SubdivisionModel {
    pattern: PatternId,
    branch: Vec<VertexId>,
    paths: Vec<CertPath>,
}

impl SubdivisionModel {
    pub fn new(
        g: &RootedGraph,
        pattern: PatternId,
        branch: Vec<VertexId>,
        paths: Vec<CertPath>,
    ) -> Result<SubdivisionModel, ModelError> {
        let bad = |m: String| Err(ModelError::Invalid(m));
        if branch.len() != pattern.vertex_count() {
            return bad(format!(
                "{} needs {} branch vertices, got {}",
                pattern.name(),
                pattern.vertex_count(),
                branch.len()
            ));
        }
        let branch_set: BTreeSet<VertexId> = branch.iter().copied().collect();
        if branch_set.len() != branch.len() {
            return bad("branch map must be injective".into());
        }
        for &v in &branch {
            if !g.contains_vertex(v) {
                return bad(format!("unknown branch vertex {v}"));
            }
        }
        if paths.len() != pattern.edge_count() {
            return bad(format!(
                "{} needs {} certifying paths, got {}",
                pattern.name(),
                pattern.edge_count(),
                paths.len()
            ));
        }
        for (i, cp) in paths.iter().enumerate() {
            let (u, v) = pattern.edges()[i];
            cp.validate(g, branch[u], branch[v], pattern.is_loop_edge(i))?;
        }
        // Interiors pairwise disjoint and disjoint from every branch vertex;
        // edges globally distinct.
        let mut interior_seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut edge_seen: BTreeSet<EdgeId> = BTreeSet::new();
        for (i, cp) in paths.iter().enumerate() {
            let inner: Vec<VertexId> = if cp.is_closed() {
                cp.vertices[1..cp.vertices.len() - 1].to_vec()
            } else {
                cp.interior().to_vec()
            };
            for v in inner {
                if branch_set.contains(&v) {
                    return bad(format!(
                        "interior vertex {v} of path {i} is a branch vertex"
                    ));
                }
                if !interior_seen.insert(v) {
                    return bad(format!("interior vertex {v} lies on two paths"));
                }
            }
            for &e in &cp.edges {
                if !edge_seen.insert(e) {
                    return bad(format!("edge {e} lies on two certifying paths"));
                }
            }
        }
        let model = SubdivisionModel {
            pattern,
            branch,
            paths,
        };
        let union = model.union(g);
        if !is_s_cycle_subgraph(g, &union) {
            let witness = find_root_free_cycle(g, &union)
                .map(|c| {
                    c.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("-")
                })
                .unwrap_or_default();
            return bad(format!("model union has a root-free cycle: {witness}"));
        }
        Ok(model)
    }

    pub fn pattern(&self) -> PatternId {
        self.pattern
    }

    pub fn branch(&self) -> &[VertexId] {
        &self.branch
    }

    pub fn branch_vertex(&self, i: usize) -> VertexId {
        self.branch[i]
    }

    pub fn cert_path(&self, e: usize) -> &CertPath {
        &self.paths[e]
    }

    pub fn union(&self, g: &RootedGraph) -> Subgraph {
        let mut s = Subgraph::from_edges(g, self.paths.iter().flat_map(|p| p.edges.iter().copied()));
        for &b in &self.branch {
            s.vertices.insert(b);
        }
        s
    }

    pub fn locate(&self, v: VertexId) -> Option<Loc> {
        if let Some(i) = self.branch.iter().position(|&b| b == v) {
            return Some(Loc::Branch(i));
        }
        for (e, cp) in self.paths.iter().enumerate() {
            let inner = if cp.is_closed() {
                &cp.vertices[1..cp.vertices.len() - 1]
            } else {
                cp.interior()
            };
            if inner.contains(&v) {
                return Some(Loc::Interior { edge: e, vertex: v });
            }
        }
        None
    }

    /// Roots of the host graph lying on the model.
    pub fn roots_on(&self, g: &RootedGraph) -> BTreeSet<VertexId> {
        self.union(g)
            .vertices
            .iter()
            .copied()
            .filter(|&v| g.is_root(v))
            .collect()
    }
}

/// A cycle of the subgraph avoiding every root, as a vertex sequence of
/// the host graph. Used to name the offending cycle in diagnostics.
pub fn find_root_free_cycle(g: &RootedGraph, w: &Subgraph) -> Option<Vec<VertexId>> {
    let mut sub = RootedGraph::new();
    let mut back: Vec<VertexId> = Vec::new();
    let mut fwd: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for &v in &w.vertices {
        if g.is_root(v) {
            continue;
        }
        let nv = sub.add_vertex();
        fwd.insert(v, nv);
        back.push(v);
    }
    for &e in &w.edges {
        let (a, b) = g.endpoints(e).unwrap();
        if let (Some(&na), Some(&nb)) = (fwd.get(&a), fwd.get(&b)) {
            sub.add_edge(na, nb).unwrap();
        }
    }
    let cycles = crate::oracle::enumerate_all_cycles(&sub, 200_000).ok()?;
    cycles
        .first()
        .map(|c| c.vertices().iter().map(|v| back[v.0 as usize]).collect())
}

/// True iff every cycle of the subgraph is an S-cycle; equivalently,
/// removing all roots leaves a forest.
pub fn is_s_cycle_subgraph(g: &RootedGraph, w: &Subgraph) -> bool {
    let rootless = Subgraph {
        vertices: w
            .vertices
            .iter()
            .copied()
            .filter(|&v| !g.is_root(v))
            .collect(),
        edges: w
            .edges
            .iter()
            .copied()
            .filter(|&e| {
                let (u, v) = g.endpoints(e).unwrap();
                !g.is_root(u) && !g.is_root(v)
            })
            .collect(),
    };
    rootless.is_forest(g)
}

/// The mid decomposition of a path: the minimal interior subpath holding
/// every interior root, its endpoints (the gates), and the end components.
#[derive(Debug, Clone)]
pub struct MidDecomposition {
    pub mid: Option<Path>,
    /// `(gate nearer the path's first endpoint, gate nearer its last)`;
    /// equal for a single interior root.
    pub gates: Option<(VertexId, VertexId)>,
    /// Components of P - V(P_mid) containing the first and last endpoint.
    /// When the mid part is empty both tails are the whole path.
    pub tails: (Path, Path),
}

/// Computes P_mid, gates, and tails of `p` with respect to `roots`.
/// Endpoints of `p` are excluded from the mid part by definition.
pub fn mid_decompose(g: &RootedGraph, p: &Path, roots: &BTreeSet<VertexId>) -> MidDecomposition {
    assert!(p.vertices().len() >= 2, "mid decomposition needs >= 2 vertices");
    let vs = p.vertices();
    let n = vs.len();
    let interior_root_positions: Vec<usize> = (1..n - 1)
        .filter(|&i| roots.contains(&vs[i]))
        .collect();
    if interior_root_positions.is_empty() {
        return MidDecomposition {
            mid: None,
            gates: None,
            tails: (p.clone(), p.clone()),
        };
    }
    let lo = *interior_root_positions.first().unwrap();
    let hi = *interior_root_positions.last().unwrap();
    let sub = |a: usize, b: usize| -> Path {
        Path::new(
            g,
            vs[a..=b].to_vec(),
            p.edges()[a..b].to_vec(),
        )
        .expect("subpath of a path")
    };
    MidDecomposition {
        mid: Some(sub(lo, hi)),
        gates: Some((vs[lo], vs[hi])),
        tails: (sub(0, lo - 1), sub(hi + 1, n - 1)),
    }
}

/// A path attached to a subgraph W: endpoints on W, interior outside W,
/// not itself an edge of W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPath {
    pub path: Path,
}

impl WPath {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.path.first(), self.path.last())
    }
}

/// Deterministic search for a W-path with one endpoint in `f1` and the
/// other in `f2`: shortest first, then lexicographically smallest vertex
/// sequence, then smallest edge ids. Vertices in `forbidden` are unusable.
pub fn find_w_path(
    g: &RootedGraph,
    w: &Subgraph,
    f1: &BTreeSet<VertexId>,
    f2: &BTreeSet<VertexId>,
    forbidden: &BTreeSet<VertexId>,
) -> Option<WPath> {
    let usable_start: Vec<VertexId> = f1
        .iter()
        .copied()
        .filter(|v| !forbidden.contains(v))
        .collect();
    let targets: BTreeSet<VertexId> = f2
        .iter()
        .copied()
        .filter(|v| !forbidden.contains(v))
        .collect();
    if usable_start.is_empty() || targets.is_empty() {
        return None;
    }
    let outside = |v: VertexId| !w.contains_vertex(v) && !forbidden.contains(&v);

    // Backward BFS: dist_b[x] = edges from outside vertex x to reach f2.
    let mut dist_b: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut frontier: Vec<VertexId> = Vec::new();
    for v in g.vertices() {
        if !outside(v) {
            continue;
        }
        if g.incident(v).iter().any(|&(_, t)| t != v && targets.contains(&t)) {
            dist_b.insert(v, 1);
            frontier.push(v);
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            let d = dist_b[&x];
            for &(_, y) in g.incident(x) {
                if y != x && outside(y) && !dist_b.contains_key(&y) {
                    dist_b.insert(y, d + 1);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }

    // Best total length per start vertex.
    let mut best: Option<(usize, VertexId)> = None;
    for &u in &usable_start {
        let mut l = usize::MAX;
        for &(e, t) in g.incident(u) {
            if t == u {
                continue;
            }
            if targets.contains(&t) && t != u && !w.contains_edge(e) {
                l = l.min(1);
            }
            if outside(t) {
                if let Some(&d) = dist_b.get(&t) {
                    l = l.min(d + 1);
                }
            }
        }
        if l < usize::MAX {
            match best {
                Some((bl, bu)) if (l, u) >= (bl, bu) => {}
                _ => best = Some((l, u)),
            }
        }
    }
    let (total, start) = best?;

    // Greedy forward reconstruction.
    let mut vertices = vec![start];
    let mut edges = Vec::new();
    let mut cur = start;
    let mut remaining = total;
    while remaining > 0 {
        let mut step: Option<(VertexId, EdgeId)> = None;
        for &(e, t) in g.incident(cur) {
            if t == cur {
                continue;
            }
            let ok = if remaining == 1 {
                targets.contains(&t) && !(vertices.len() == 1 && w.contains_edge(e))
            } else {
                outside(t) && dist_b.get(&t) == Some(&(remaining - 1))
            };
            if ok {
                match step {
                    Some((bt, be)) if (t, e) >= (bt, be) => {}
                    _ => step = Some((t, e)),
                }
            }
        }
        let (t, e) = step.expect("reconstruction follows BFS distances");
        vertices.push(t);
        edges.push(e);
        cur = t;
        remaining -= 1;
    }
    let path = Path::new(g, vertices, edges).expect("simple by construction");
    Some(WPath { path })
}

// ---------------------------------------------------------------------------
// Pattern cycles realized through a model.
// ---------------------------------------------------------------------------

/// One cycle of the abstract pattern, as pattern-edge steps with a
/// direction flag (true = traversed against the tuple orientation).
pub type PatternCycle = Vec<(usize, bool)>;

/// All cycles of the pattern, deterministic order.
pub fn pattern_cycles(pattern: PatternId) -> Vec<PatternCycle> {
    let pg = pattern.to_graph();
    let cycles = crate::oracle::enumerate_all_cycles(&pg, 1_000_000)
        .expect("catalog patterns are tiny");
    let edges = pattern.edges();
    cycles
        .iter()
        .map(|c| {
            let vs = c.vertices();
            let _n = vs.len();
            c.edges()
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let idx = e.0 as usize;
                    let (a, b) = edges[idx];
                    let from = vs[i].0 as usize;
                    let reversed = a != b && a != from;
                    (idx, reversed)
                })
                .collect()
        })
        .collect()
}

/// Realizes a pattern cycle as a cycle of the host graph.
pub fn realize_pattern_cycle(
    g: &RootedGraph,
    model: &SubdivisionModel,
    pc: &PatternCycle,
) -> crate::graph::Cycle {
    if pc.len() == 1 && model.pattern().is_loop_edge(pc[0].0) {
        let cp = model.cert_path(pc[0].0);
        let n = cp.vertices().len();
        return crate::graph::Cycle::new(g, cp.vertices()[..n - 1].to_vec(), cp.edges().to_vec())
            .expect("closed certifying path realizes a cycle");
    }
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut edges: Vec<EdgeId> = Vec::new();
    for &(e, reversed) in pc {
        let cp = model.cert_path(e);
        let (vs, es): (Vec<VertexId>, Vec<EdgeId>) = if reversed {
            (
                cp.vertices().iter().rev().copied().collect(),
                cp.edges().iter().rev().copied().collect(),
            )
        } else {
            (cp.vertices().to_vec(), cp.edges().to_vec())
        };
        vertices.extend_from_slice(&vs[..vs.len() - 1]);
        edges.extend_from_slice(&es);
    }
    crate::graph::Cycle::new(g, vertices, edges).expect("pattern cycle realizes a cycle")
}

/// All cycles of the model's union, realized in the host.
pub fn model_cycles(g: &RootedGraph, model: &SubdivisionModel) -> Vec<crate::graph::Cycle> {
    pattern_cycles(model.pattern())
        .iter()
        .map(|pc| realize_pattern_cycle(g, model, pc))
        .collect()
}

/// The first model cycle avoiding vertex `u`, if any.
pub fn model_cycle_avoiding(
    g: &RootedGraph,
    model: &SubdivisionModel,
    u: VertexId,
) -> Option<crate::graph::Cycle> {
    model_cycles(g, model)
        .into_iter()
        .find(|c| !c.contains_vertex(u))
}

// ---------------------------------------------------------------------------
// Small hitting sets inside a model.
// ---------------------------------------------------------------------------

/// A hitting set U of roots with |U| <= |E(H)| - |V(H)| + 1 whose deletion
/// makes the model union acyclic. Greedy over pattern cycles: each
/// surviving cycle gives up a root-carrying certifying path.
pub fn small_hitting_set(
    g: &RootedGraph,
    model: &SubdivisionModel,
) -> Result<BTreeSet<VertexId>, ModelError> {
    let pattern = model.pattern();
    let cycles = pattern_cycles(pattern);
    let rooted = |e: usize| -> Option<VertexId> {
        model
            .cert_path(e)
            .vertices()
            .iter()
            .copied()
            .find(|&v| g.is_root(v))
    };
    let mut alive: BTreeSet<usize> = (0..pattern.edge_count()).collect();
    let mut chosen: Vec<usize> = Vec::new();
    loop {
        let surviving = cycles
            .iter()
            .find(|pc| pc.iter().all(|&(e, _)| alive.contains(&e)));
        let Some(pc) = surviving else { break };
        let pick = pc
            .iter()
            .map(|&(e, _)| e)
            .filter(|&e| rooted(e).is_some())
            .min()
            .ok_or_else(|| {
                ModelError::Structure {
                    step: "small_hitting_set".into(),
                    explanation: "a pattern cycle has no root on any certifying path".into(),
                }
            })?;
        alive.remove(&pick);
        chosen.push(pick);
    }
    let bound = pattern.edge_count() - pattern.vertex_count() + 1;
    debug_assert!(chosen.len() <= bound, "cycle-rank bound violated: {chosen:?}");
    let mut u = BTreeSet::new();
    for e in chosen {
        u.insert(rooted(e).unwrap());
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_of(g: &RootedGraph, vs: &[VertexId], es: &[EdgeId]) -> Path {
        Path::new(g, vs.to_vec(), es.to_vec()).unwrap()
    }

    /// theta3 with certifying paths of length 2 and a root in the middle
    /// of each path.
    fn theta3_len2() -> (RootedGraph, SubdivisionModel) {
        let mut g = RootedGraph::new();
        let w1 = g.add_vertex();
        let w2 = g.add_vertex();
        let mids: Vec<VertexId> = (0..3).map(|_| g.add_vertex()).collect();
        let mut paths = Vec::new();
        for &m in &mids {
            let e1 = g.add_edge(w1, m).unwrap();
            let e2 = g.add_edge(m, w2).unwrap();
            paths.push(CertPath::open(&path_of(&g, &[w1, m, w2], &[e1, e2])));
            g.mark_root(m).unwrap();
        }
        let model = SubdivisionModel::new(&g, PatternId::Theta3, vec![w1, w2], paths).unwrap();
        (g, model)
    }

    #[test]
    fn s_cycle_subgraph_examples() {
        // Rooted triangle: the only cycle contains the root.
        let mut g = RootedGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        let e1 = g.add_edge(a, b).unwrap();
        let e2 = g.add_edge(b, c).unwrap();
        let e3 = g.add_edge(c, a).unwrap();
        g.mark_root(a).unwrap();
        let w = Subgraph::from_edges(&g, [e1, e2, e3]);
        assert!(is_s_cycle_subgraph(&g, &w));

        // Two disjoint triangles, only one rooted.
        let d = g.add_vertex();
        let e = g.add_vertex();
        let f = g.add_vertex();
        let e4 = g.add_edge(d, e).unwrap();
        let e5 = g.add_edge(e, f).unwrap();
        let e6 = g.add_edge(f, d).unwrap();
        let w2 = Subgraph::from_edges(&g, [e1, e2, e3, e4, e5, e6]);
        assert!(!is_s_cycle_subgraph(&g, &w2));
    }

    #[test]
    fn theta3_with_one_branch_root_is_s_cycle_subgraph() {
        let mut g = RootedGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let es: Vec<EdgeId> = (0..3).map(|_| g.add_edge(a, b).unwrap()).collect();
        g.mark_root(a).unwrap();
        let w = Subgraph::from_edges(&g, es);
        assert!(is_s_cycle_subgraph(&g, &w));
    }

    #[test]
    fn mid_decompose_two_roots() {
        // v - a - s1 - b - s2 - c - w with roots {s1, s2}.
        let mut g = RootedGraph::new();
        let vs: Vec<VertexId> = (0..7).map(|_| g.add_vertex()).collect();
        let mut es = Vec::new();
        for i in 0..6 {
            es.push(g.add_edge(vs[i], vs[i + 1]).unwrap());
        }
        let roots = BTreeSet::from([vs[2], vs[4]]);
        let p = path_of(&g, &vs, &es);
        let d = mid_decompose(&g, &p, &roots);
        let mid = d.mid.unwrap();
        assert_eq!(mid.vertices(), &[vs[2], vs[3], vs[4]]);
        assert_eq!(d.gates, Some((vs[2], vs[4])));
        assert_eq!(d.tails.0.vertices(), &[vs[0], vs[1]]);
        assert_eq!(d.tails.1.vertices(), &[vs[5], vs[6]]);
    }

    #[test]
    fn mid_decompose_no_interior_roots() {
        let mut g = RootedGraph::new();
        let vs: Vec<VertexId> = (0..3).map(|_| g.add_vertex()).collect();
        let es = vec![
            g.add_edge(vs[0], vs[1]).unwrap(),
            g.add_edge(vs[1], vs[2]).unwrap(),
        ];
        let p = path_of(&g, &vs, &es);
        let d = mid_decompose(&g, &p, &BTreeSet::new());
        assert!(d.mid.is_none());
        assert!(d.gates.is_none());
        assert_eq!(d.tails.0.vertices(), p.vertices());
    }

    #[test]
    fn mid_decompose_single_root_degenerate() {
        // v - s - w with root s: mid is the single vertex s, both gates s.
        let mut g = RootedGraph::new();
        let vs: Vec<VertexId> = (0..3).map(|_| g.add_vertex()).collect();
        let es = vec![
            g.add_edge(vs[0], vs[1]).unwrap(),
            g.add_edge(vs[1], vs[2]).unwrap(),
        ];
        g.mark_root(vs[1]).unwrap();
        let p = path_of(&g, &vs, &es);
        let d = mid_decompose(&g, &p, &BTreeSet::from([vs[1]]));
        let mid = d.mid.unwrap();
        assert_eq!(mid.vertices(), &[vs[1]]);
        assert_eq!(d.gates, Some((vs[1], vs[1])));
        assert_eq!(d.tails.0.vertices(), &[vs[0]]);
        assert_eq!(d.tails.1.vertices(), &[vs[2]]);
    }

    #[test]
    fn mid_gates_are_roots_and_partition_holds() {
        let (g, model) = theta3_len2();
        let roots: BTreeSet<VertexId> = g.roots().collect();
        let p = model.cert_path(0).to_path(&g).unwrap();
        let d = mid_decompose(&g, &p, &roots);
        if let Some((a, b)) = d.gates {
            assert!(g.is_root(a) && g.is_root(b));
        }
        let mid = d.mid.unwrap();
        let total = d.tails.0.vertices().len() + d.tails.1.vertices().len() + mid.vertices().len();
        assert_eq!(total, p.vertices().len());
    }

    #[test]
    fn find_w_path_prefers_short_and_excludes_w_edges() {
        // Triangle abc plus pendant path a-x-b.
        let mut g = RootedGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        let x = g.add_vertex();
        let e1 = g.add_edge(a, b).unwrap();
        let e2 = g.add_edge(b, c).unwrap();
        let e3 = g.add_edge(c, a).unwrap();
        g.add_edge(a, x).unwrap();
        g.add_edge(x, b).unwrap();
        let w = Subgraph::from_edges(&g, [e1, e2, e3]);
        let p = find_w_path(
            &g,
            &w,
            &BTreeSet::from([a]),
            &BTreeSet::from([b]),
            &BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(p.path.vertices(), &[a, x, b]);

        // W covering the whole graph leaves nothing.
        let whole = Subgraph::from_edges(&g, g.edge_ids());
        assert!(find_w_path(
            &g,
            &whole,
            &BTreeSet::from([a]),
            &BTreeSet::from([b]),
            &BTreeSet::new()
        )
        .is_none());
    }

    #[test]
    fn find_w_path_in_k4() {
        let mut g = RootedGraph::new();
        let vs: Vec<VertexId> = (0..4).map(|_| g.add_vertex()).collect();
        let mut tri = Vec::new();
        for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
            tri.push(g.add_edge(vs[i], vs[j]).unwrap());
        }
        for i in 0..3 {
            g.add_edge(vs[i], vs[3]).unwrap();
        }
        let w = Subgraph::from_edges(&g, tri);
        let p = find_w_path(
            &g,
            &w,
            &BTreeSet::from([vs[0]]),
            &BTreeSet::from([vs[1]]),
            &BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(p.path.vertices(), &[vs[0], vs[3], vs[1]]);
    }

    #[test]
    fn small_hitting_set_theta3() {
        let (g, model) = theta3_len2();
        let u = small_hitting_set(&g, &model).unwrap();
        assert!(u.len() <= 2);
        assert!(u.iter().all(|&v| g.is_root(v)));
        let union = model.union(&g);
        let rest = Subgraph {
            vertices: union.vertices.difference(&u).copied().collect(),
            edges: union
                .edges
                .iter()
                .copied()
                .filter(|&e| {
                    let (a, b) = g.endpoints(e).unwrap();
                    !u.contains(&a) && !u.contains(&b)
                })
                .collect(),
        };
        assert!(rest.is_forest(&g));
    }

    #[test]
    fn small_hitting_set_bare_cycle_is_one_root() {
        let mut g = RootedGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        let e1 = g.add_edge(a, b).unwrap();
        let e2 = g.add_edge(b, c).unwrap();
        let e3 = g.add_edge(c, a).unwrap();
        g.mark_root(b).unwrap();
        let cp = CertPath::closed(vec![a, b, c, a], vec![e1, e2, e3]);
        let model = SubdivisionModel::new(&g, PatternId::Loop1, vec![a], vec![cp]).unwrap();
        let u = small_hitting_set(&g, &model).unwrap();
        assert_eq!(u, BTreeSet::from([b]));
    }

    #[test]
    fn model_rejects_root_free_cycle() {
        let mut g = RootedGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let e1 = g.add_edge(a, b).unwrap();
        let e2 = g.add_edge(a, b).unwrap();
        let e3 = g.add_edge(a, b).unwrap();
        // No roots at all: theta3 model must be rejected.
        let paths = vec![
            CertPath::open(&Path::new(&g, vec![a, b], vec![e1]).unwrap()),
            CertPath::open(&Path::new(&g, vec![a, b], vec![e2]).unwrap()),
            CertPath::open(&Path::new(&g, vec![a, b], vec![e3]).unwrap()),
        ];
        let err = SubdivisionModel::new(&g, PatternId::Theta3, vec![a, b], paths);
        assert!(err.is_err());
    }

    #[test]
    fn pattern_cycles_realize_in_theta3_model() {
        let (g, model) = theta3_len2();
        let cycles = model_cycles(&g, &model);
        assert_eq!(cycles.len(), 3);
        for c in &cycles {
            assert_eq!(c.len(), 4);
            assert!(c.is_s_cycle(&g));
        }
    }
}
