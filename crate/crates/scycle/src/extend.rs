//! Extension finding and model upgrades.
//!
//! `find_extension` follows the constructive dichotomy: an S-cycle C
//! avoiding a root hitting set T of W either touches W in one vertex or
//! yields a W-path X with W + X again an S-cycle subgraph.
//! `find_pattern_upgrade` classifies where X attaches and either rebuilds
//! the model for the next pattern in the chain or extracts two disjoint
//! S-cycles.

use std::collections::BTreeSet;

use crate::error::ModelError;
use crate::graph::{Cycle, EdgeId, Path, RootedGraph, Subgraph, VertexId};
use crate::model::{
    is_s_cycle_subgraph, model_cycles, CertPath, Loc, SubdivisionModel, WPath,
};
use crate::oracle::PackingCertificate;
use crate::pattern::PatternId;

/// Outcome of the extension search.
#[derive(Debug, Clone)]
pub enum ExtensionOutcome {
    /// C meets W in exactly this vertex.
    Contact(VertexId),
    /// A W-extension contained in C.
    Extension(WPath),
}

fn violation(step: &str, explanation: impl Into<String>) -> ModelError {
    ModelError::Structure {
        step: step.into(),
        explanation: explanation.into(),
    }
}

fn union_with_path(w: &Subgraph, p: &Path) -> Subgraph {
    let mut u = w.clone();
    for &v in p.vertices() {
        u.vertices.insert(v);
    }
    for &e in p.edges() {
        u.edges.insert(e);
    }
    u
}

/// True when adding `p` keeps the union an S-cycle subgraph.
pub fn is_extension(g: &RootedGraph, model: &SubdivisionModel, p: &Path) -> bool {
    let u = union_with_path(&model.union(g), p);
    is_s_cycle_subgraph(g, &u)
}

/// Given a hitting set `t` of the model consisting of roots and an S-cycle
/// `c` of `g - t`, reports a one-vertex contact or extracts a W-extension.
/// Errors signal that the caller's "no two disjoint S-cycles" assumption
/// failed or that a contract was violated.
pub fn find_extension(
    g: &RootedGraph,
    model: &SubdivisionModel,
    t: &BTreeSet<VertexId>,
    c: &Cycle,
) -> Result<ExtensionOutcome, ModelError> {
    debug_assert!(t.iter().all(|&v| g.is_root(v)), "T must consist of roots");
    let w = model.union(g);
    if c.vertices().iter().any(|v| t.contains(v)) {
        return Err(violation("find_extension", "cycle meets the hitting set T"));
    }
    let n = c.len();
    let touched: Vec<usize> = (0..n)
        .filter(|&i| w.contains_vertex(c.vertices()[i]))
        .collect();
    if touched.is_empty() {
        return Err(violation(
            "find_extension",
            "cycle is disjoint from W although W has an S-cycle",
        ));
    }
    if touched.len() == 1 {
        return Ok(ExtensionOutcome::Contact(c.vertices()[touched[0]]));
    }

    // The W-paths of C: maximal segments between consecutive W-visits.
    let mut segments: Vec<Path> = Vec::new();
    let m = touched.len();
    for k in 0..m {
        let i = touched[k];
        let j = touched[(k + 1) % m];
        let steps = (j + n - i) % n;
        debug_assert!(steps >= 1);
        let vertices: Vec<VertexId> = (0..=steps).map(|s| c.vertices()[(i + s) % n]).collect();
        let edges: Vec<EdgeId> = (0..steps).map(|s| c.edges()[(i + s) % n]).collect();
        if steps == 1 && w.contains_edge(edges[0]) {
            continue; // an edge of W, not a W-path
        }
        segments.push(Path::new(g, vertices, edges).expect("cycle segment is simple"));
    }
    if segments.is_empty() {
        return Err(violation(
            "find_extension",
            "cycle lies inside W yet avoids its hitting set",
        ));
    }

    let accept = |p: &Path| -> Result<ExtensionOutcome, ModelError> {
        if !is_extension(g, model, p) {
            return Err(violation(
                "find_extension",
                "candidate W-path breaks the S-cycle subgraph invariant",
            ));
        }
        Ok(ExtensionOutcome::Extension(WPath { path: p.clone() }))
    };

    // A W-path carrying a root extends W directly.
    for seg in &segments {
        if seg.vertices().iter().any(|&v| g.is_root(v)) {
            return accept(seg);
        }
    }

    // Otherwise some root v of C lies on W with both cycle edges in W; a
    // segment then jumps between two components of W - (T + v).
    let roots_on_w: BTreeSet<VertexId> = c
        .vertices()
        .iter()
        .copied()
        .filter(|&v| g.is_root(v) && w.contains_vertex(v))
        .collect();
    for &v in &roots_on_w {
        let mut forb = t.clone();
        forb.insert(v);
        let comps = w.components_avoiding(g, &forb);
        let comp_of = |x: VertexId| comps.iter().position(|comp| comp.contains(&x));
        for seg in &segments {
            let (a, b) = (seg.first(), seg.last());
            if a == v || b == v {
                continue;
            }
            if comp_of(a) != comp_of(b) {
                return accept(seg);
            }
        }
    }
    Err(violation(
        "find_extension",
        "no extension exists: evidence of two disjoint S-cycles or a contract breach",
    ))
}

/// Chord pair search: `p` is a chord of cycle `c` of the model.
/// The two cycles of c + p other than c are tested for a disjoint partner
/// cycle inside the model; the rooted one and its partner form the pair.
pub fn two_disjoint_from_chord(
    g: &RootedGraph,
    model: &SubdivisionModel,
    c: &Cycle,
    p: &Path,
) -> Option<PackingCertificate> {
    let (v, w) = (p.first(), p.last());
    if v == w || !c.contains_vertex(v) || !c.contains_vertex(w) {
        return None;
    }
    let (arc1, arc2) = c.arcs_between(v, w);
    let mut candidates = Vec::new();
    for arc in [arc1, arc2] {
        // arc runs v..w; close it with p traversed w..v.
        let rev = p.reversed();
        let mut vertices = arc.vertices().to_vec();
        let mut edges = arc.edges().to_vec();
        if rev.vertices().len() >= 2 {
            vertices.extend_from_slice(&rev.vertices()[1..rev.vertices().len() - 1]);
        }
        edges.extend_from_slice(rev.edges());
        if let Ok(cycle) = Cycle::new(g, vertices, edges) {
            candidates.push(cycle);
        }
    }
    let zs = model_cycles(g, model);
    for cand in candidates {
        if !cand.is_s_cycle(g) {
            continue;
        }
        for z in &zs {
            if z.disjoint_from(&cand) {
                return Some(PackingCertificate {
                    cycles: vec![cand, z.clone()],
                });
            }
        }
    }
    None
}

/// Result of classifying an extension against the current model.
#[derive(Debug, Clone)]
pub enum UpgradeOutcome {
    Upgraded(SubdivisionModel),
    DisjointPair(PackingCertificate),
}

// ---------------------------------------------------------------------------
// Segment splicing helpers for the rebuild tables.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Seg {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Seg {
    fn from_path(p: &Path) -> Seg {
        Seg {
            vertices: p.vertices().to_vec(),
            edges: p.edges().to_vec(),
        }
    }

    fn first(&self) -> VertexId {
        self.vertices[0]
    }

    fn last(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    fn rev(mut self) -> Seg {
        self.vertices.reverse();
        self.edges.reverse();
        self
    }

    fn join(parts: Vec<Seg>) -> Seg {
        let mut it = parts.into_iter();
        let mut acc = it.next().expect("join needs at least one part");
        for part in it {
            assert_eq!(acc.last(), part.first(), "segments must chain");
            acc.vertices.extend_from_slice(&part.vertices[1..]);
            acc.edges.extend_from_slice(&part.edges);
        }
        acc
    }
}

struct Ctx<'a> {
    g: &'a RootedGraph,
    model: &'a SubdivisionModel,
    x: Seg,
}

impl<'a> Ctx<'a> {
    fn b(&self, i: usize) -> VertexId {
        self.model.branch_vertex(i)
    }

    /// Whole certifying path `e` in tuple orientation.
    fn whole(&self, e: usize) -> Seg {
        let cp = self.model.cert_path(e);
        Seg {
            vertices: cp.vertices().to_vec(),
            edges: cp.edges().to_vec(),
        }
    }

    /// Sub-segment of open certifying path `e` from host vertex `x` to `y`.
    fn between(&self, e: usize, x: VertexId, y: VertexId) -> Seg {
        let cp = self.model.cert_path(e);
        let vs = cp.vertices();
        let ix = vs.iter().position(|&v| v == x).expect("x on path");
        let iy = vs.iter().position(|&v| v == y).expect("y on path");
        let (lo, hi) = (ix.min(iy), ix.max(iy));
        let seg = Seg {
            vertices: vs[lo..=hi].to_vec(),
            edges: cp.edges()[lo..hi].to_vec(),
        };
        if ix <= iy {
            seg
        } else {
            seg.rev()
        }
    }

    /// First pattern edge between pattern vertices `u` and `v`, as a
    /// segment oriented from branch(u) to branch(v).
    fn seg_uv(&self, u: usize, v: usize) -> Seg {
        let pattern = self.model.pattern();
        let e = pattern.edges_between(u, v)[0];
        let (a, _) = pattern.edges()[e];
        let s = self.whole(e);
        if a == u {
            s
        } else {
            s.rev()
        }
    }

    /// Whole path `e` oriented to start at host vertex `from`.
    fn oriented(&self, e: usize, from: VertexId) -> Seg {
        let s = self.whole(e);
        if s.first() == from {
            s
        } else {
            s.rev()
        }
    }

    /// The attachment path oriented to start at `from`.
    fn xseg(&self, from: VertexId) -> Seg {
        if self.x.first() == from {
            self.x.clone()
        } else {
            self.x.clone().rev()
        }
    }

    fn build(
        &self,
        pattern: PatternId,
        branch: Vec<VertexId>,
        segs: Vec<Seg>,
    ) -> Result<SubdivisionModel, ModelError> {
        let paths: Vec<CertPath> = segs
            .into_iter()
            .map(|s| {
                let p = Path::new(self.g, s.vertices, s.edges).map_err(|e| {
                    ModelError::Invalid(format!("upgrade produced a non-path: {e}"))
                })?;
                Ok(CertPath::open(&p))
            })
            .collect::<Result<_, ModelError>>()?;
        SubdivisionModel::new(self.g, pattern, branch, paths)
    }
}

/// Classifies the endpoints of extension `x` and either rebuilds the model
/// for the upgraded pattern or extracts a disjoint S-cycle pair via the
/// chord split. A structure violation means the case analysis has no
/// outcome, which the caller treats as evidence of a fault.
pub fn find_pattern_upgrade(
    g: &RootedGraph,
    model: &SubdivisionModel,
    x: &WPath,
) -> Result<UpgradeOutcome, ModelError> {
    if !is_extension(g, model, &x.path) {
        return Err(violation("find_pattern_upgrade", "X is not a W-extension"));
    }
    let (p, q) = x.endpoints();
    let la = model
        .locate(p)
        .ok_or_else(|| violation("find_pattern_upgrade", "endpoint not on W"))?;
    let lb = model
        .locate(q)
        .ok_or_else(|| violation("find_pattern_upgrade", "endpoint not on W"))?;
    let ctx = Ctx {
        g,
        model,
        x: Seg::from_path(&x.path),
    };
    let built = match model.pattern() {
        PatternId::Loop1 => upgrade_loop1(&ctx, p, q)?,
        PatternId::Loop2 => upgrade_loop2(&ctx, la, lb, p, q)?,
        PatternId::Theta3 => upgrade_theta3(&ctx, la, lb)?,
        PatternId::K3Plus => upgrade_k3plus(&ctx, la, lb)?,
        PatternId::K3Pp => upgrade_k3pp(&ctx, la, lb)?,
        PatternId::K4 => upgrade_k4(&ctx, la, lb)?,
        PatternId::K4Plus => upgrade_k4plus(&ctx, la, lb)?,
        PatternId::W4 => upgrade_w4(&ctx, la, lb)?,
        PatternId::K33 => upgrade_k33(&ctx, la, lb)?,
        _ => None,
    };
    if let Some(m) = built {
        return Ok(UpgradeOutcome::Upgraded(m));
    }
    // No upgrade cell: the case analysis promises two disjoint S-cycles.
    for z in model_cycles(g, model) {
        if z.contains_vertex(p) && z.contains_vertex(q) {
            if let Some(pair) = two_disjoint_from_chord(g, model, &z, &x.path) {
                return Ok(UpgradeOutcome::DisjointPair(pair));
            }
        }
    }
    Err(violation(
        "find_pattern_upgrade",
        format!(
            "no upgrade and no disjoint pair for attachment {:?}/{:?} on {}",
            la,
            lb,
            model.pattern().name()
        ),
    ))
}

/// Builds a theta3 model from a cycle (realized from `petal_edge`) plus an
/// attachment between `a` and `b` on it.
fn theta_from_cycle(
    ctx: &Ctx,
    cycle: &Cycle,
    a: VertexId,
    b: VertexId,
) -> Result<SubdivisionModel, ModelError> {
    let (arc1, arc2) = cycle.arcs_between(a, b);
    ctx.build(
        PatternId::Theta3,
        vec![a, b],
        vec![
            Seg::from_path(&arc1),
            Seg::from_path(&arc2),
            ctx.xseg(a),
        ],
    )
}

fn upgrade_loop1(
    ctx: &Ctx,
    p: VertexId,
    q: VertexId,
) -> Result<Option<SubdivisionModel>, ModelError> {
    let cycle = crate::model::realize_pattern_cycle(ctx.g, ctx.model, &vec![(0usize, false)]);
    Ok(Some(theta_from_cycle(ctx, &cycle, p, q)?))
}

fn upgrade_loop2(
    ctx: &Ctx,
    la: Loc,
    lb: Loc,
    p: VertexId,
    q: VertexId,
) -> Result<Option<SubdivisionModel>, ModelError> {
    let petal = |loc: Loc| -> Option<usize> {
        match loc {
            Loc::Branch(_) => None,
            Loc::Interior { edge, .. } => Some(edge),
        }
    };
    let realize = |e: usize| crate::model::realize_pattern_cycle(ctx.g, ctx.model, &vec![(e, false)]);
    match (petal(la), petal(lb)) {
        (None, Some(e)) => Ok(Some(theta_from_cycle(ctx, &realize(e), p, q)?)),
        (Some(e), None) => Ok(Some(theta_from_cycle(ctx, &realize(e), p, q)?)),
        (Some(e1), Some(e2)) if e1 != e2 => {
            // Two petals joined through their interiors: K3plus centered at
            // the shared vertex.
            let anchor = ctx.b(0);
            let c1 = realize(e1);
            let c2 = realize(e2);
            let (r1, r2) = c1.arcs_between(anchor, p);
            let (t1, t2) = c2.arcs_between(anchor, q);
            Ok(Some(ctx.build(
                PatternId::K3Plus,
                vec![anchor, p, q],
                vec![
                    Seg::from_path(&r1),
                    Seg::from_path(&r2),
                    Seg::from_path(&t1),
                    Seg::from_path(&t2),
                    ctx.xseg(p),
                ],
            )?))
        }
        _ => Ok(None),
    }
}

fn upgrade_theta3(ctx: &Ctx, la: Loc, lb: Loc) -> Result<Option<SubdivisionModel>, ModelError> {
    match (la, lb) {
        (Loc::Interior { edge: i, vertex: p }, Loc::Interior { edge: j, vertex: q }) if i != j => {
            let k = (0..3).find(|e| *e != i && *e != j).unwrap();
            let (w1, w2) = (ctx.b(0), ctx.b(1));
            Ok(Some(ctx.build(
                PatternId::K4,
                vec![p, q, w1, w2],
                vec![
                    ctx.xseg(p),
                    ctx.between(i, p, w1),
                    ctx.between(i, p, w2),
                    ctx.between(j, q, w1),
                    ctx.between(j, q, w2),
                    ctx.whole(k),
                ],
            )?))
        }
        (Loc::Branch(b), Loc::Interior { edge: i, vertex: q })
        | (Loc::Interior { edge: i, vertex: q }, Loc::Branch(b)) => {
            // Branch-to-interior: K3plus centered at the branch vertex.
            let wb = ctx.b(b);
            let wo = ctx.b(1 - b);
            let others: Vec<usize> = (0..3).filter(|e| *e != i).collect();
            Ok(Some(ctx.build(
                PatternId::K3Plus,
                vec![wb, q, wo],
                vec![
                    ctx.xseg(wb),
                    ctx.between(i, wb, q),
                    ctx.oriented(others[0], wb),
                    ctx.oriented(others[1], wb),
                    ctx.between(i, q, wo),
                ],
            )?))
        }
        _ => Ok(None),
    }
}

/// Side data for K3plus: certifying-path indices and the far branch.
fn k3plus_side(e: usize) -> Option<([usize; 2], usize)> {
    match e {
        0 | 1 => Some(([0, 1], 1)),
        2 | 3 => Some(([2, 3], 2)),
        _ => None,
    }
}

fn upgrade_k3plus(ctx: &Ctx, la: Loc, lb: Loc) -> Result<Option<SubdivisionModel>, ModelError> {
    let partner = |e: usize| if e.is_multiple_of(2) { e + 1 } else { e - 1 };
    // Q-path between the far branches, oriented far -> other_far.
    let qseg = |far: usize| -> Seg {
        if far == 1 {
            ctx.whole(4)
        } else {
            ctx.whole(4).rev()
        }
    };
    let other_side_first = |far: usize| -> usize {
        if far == 1 {
            2
        } else {
            0
        }
    };
    match (la, lb) {
        (Loc::Branch(0), _) | (_, Loc::Branch(0)) => Ok(None),
        (Loc::Branch(1), Loc::Branch(2)) | (Loc::Branch(2), Loc::Branch(1)) => {
            // Third parallel route between v1 and v2: all sides doubled.
            Ok(Some(ctx.build(
                PatternId::K3Pp,
                vec![ctx.b(0), ctx.b(1), ctx.b(2)],
                vec![
                    ctx.whole(0),
                    ctx.whole(1),
                    ctx.whole(4),
                    ctx.xseg(ctx.b(1)),
                    ctx.whole(2).rev(),
                    ctx.whole(3).rev(),
                ],
            )?))
        }
        (Loc::Branch(b), Loc::Interior { edge: e, vertex: q })
        | (Loc::Interior { edge: e, vertex: q }, Loc::Branch(b)) => {
            let Some((_, far)) = k3plus_side(e) else {
                return Ok(None); // endpoint on Q: same certifying path
            };
            if far == b {
                return Ok(None); // same certifying path closure
            }
            let farv = ctx.b(far);
            let vb = ctx.b(b);
            Ok(Some(ctx.build(
                PatternId::K4,
                vec![ctx.b(0), farv, vb, q],
                vec![
                    ctx.whole(partner(e)),
                    ctx.whole(other_side_first(far)),
                    ctx.between(e, ctx.b(0), q),
                    qseg(far),
                    ctx.between(e, farv, q),
                    ctx.xseg(vb),
                ],
            )?))
        }
        (Loc::Interior { edge: e1, vertex: p }, Loc::Interior { edge: e2, vertex: q }) => {
            if e1 == e2 {
                return Ok(None);
            }
            // Order: doubled-side endpoint first, Q endpoint last.
            let (e1, p, e2, q) = if k3plus_side(e1).is_none() || (k3plus_side(e2).is_some() && e1 > e2)
            {
                (e2, q, e1, p)
            } else {
                (e1, p, e2, q)
            };
            let Some((side1, far1)) = k3plus_side(e1) else {
                return Ok(None); // both on Q
            };
            let far1v = ctx.b(far1);
            if side1.contains(&e2) {
                // Parallel paths of one doubled side.
                let other_far = 3 - far1;
                return Ok(Some(ctx.build(
                    PatternId::K4,
                    vec![ctx.b(0), far1v, p, q],
                    vec![
                        Seg::join(vec![ctx.whole(other_side_first(far1)), qseg(other_far)]),
                        ctx.between(e1, ctx.b(0), p),
                        ctx.between(e2, ctx.b(0), q),
                        ctx.between(e1, far1v, p),
                        ctx.between(e2, far1v, q),
                        ctx.xseg(p),
                    ],
                )?));
            }
            match k3plus_side(e2) {
                None => {
                    // e2 is the Q path.
                    let other_far = 3 - far1;
                    Ok(Some(ctx.build(
                        PatternId::K4,
                        vec![ctx.b(0), far1v, p, q],
                        vec![
                            ctx.whole(partner(e1)),
                            ctx.between(e1, ctx.b(0), p),
                            Seg::join(vec![
                                ctx.whole(other_side_first(far1)),
                                ctx.between(4, ctx.b(other_far), q),
                            ]),
                            ctx.between(e1, far1v, p),
                            ctx.between(4, far1v, q),
                            ctx.xseg(p),
                        ],
                    )?))
                }
                Some((_, far2)) => {
                    // Interiors of the two distinct doubled sides.
                    let far2v = ctx.b(far2);
                    Ok(Some(ctx.build(
                        PatternId::K4,
                        vec![ctx.b(0), far1v, p, q],
                        vec![
                            ctx.whole(partner(e1)),
                            ctx.between(e1, ctx.b(0), p),
                            ctx.between(e2, ctx.b(0), q),
                            ctx.between(e1, far1v, p),
                            Seg::join(vec![qseg(far1), ctx.between(e2, far2v, q)]),
                            ctx.xseg(p),
                        ],
                    )?))
                }
            }
        }
        _ => Ok(None),
    }
}

/// Tuple of a K3pp side, by certifying-path index.
fn k3pp_tuple(e: usize) -> (usize, usize) {
    match e {
        0 | 1 => (0, 1),
        2 | 3 => (1, 2),
        _ => (2, 0),
    }
}

fn upgrade_k3pp(ctx: &Ctx, la: Loc, lb: Loc) -> Result<Option<SubdivisionModel>, ModelError> {
    let partner = |e: usize| if e.is_multiple_of(2) { e + 1 } else { e - 1 };
    // First path of the side {u, v}, oriented u -> v.
    let side_seg = |u: usize, v: usize| -> Seg {
        let e = ctx.model.pattern().edges_between(u, v)[0];
        let (a, _) = k3pp_tuple(e);
        let s = ctx.whole(e);
        if a == u {
            s
        } else {
            s.rev()
        }
    };
    // Both paths of the side {u, v}, each oriented u -> v.
    let side_pair = |u: usize, v: usize| -> [Seg; 2] {
        let pair = ctx.model.pattern().edges_between(u, v);
        let orient = |e: usize| -> Seg {
            let (a, _) = k3pp_tuple(e);
            let s = ctx.whole(e);
            if a == u {
                s
            } else {
                s.rev()
            }
        };
        [orient(pair[0]), orient(pair[1])]
    };
    match (la, lb) {
        (Loc::Branch(i), Loc::Branch(j)) => {
            // Triple the side {i, j}.
            let k = 3 - i - j;
            let [p1, p2] = side_pair(i, j);
            let [q1, q2] = side_pair(j, k);
            let [r1, r2] = side_pair(k, i);
            Ok(Some(ctx.build(
                PatternId::K3Ppp,
                vec![ctx.b(i), ctx.b(j), ctx.b(k)],
                vec![p1, p2, ctx.xseg(ctx.b(i)), q1, q2, r1, r2],
            )?))
        }
        (Loc::Branch(i), Loc::Interior { edge: e, vertex: q })
        | (Loc::Interior { edge: e, vertex: q }, Loc::Branch(i)) => {
            let (a, b) = k3pp_tuple(e);
            if i == a || i == b {
                return Ok(None);
            }
            Ok(Some(ctx.build(
                PatternId::K4,
                vec![ctx.b(a), ctx.b(b), q, ctx.b(i)],
                vec![
                    ctx.oriented(partner(e), ctx.b(a)),
                    ctx.between(e, ctx.b(a), q),
                    side_seg(a, i),
                    ctx.between(e, ctx.b(b), q),
                    side_seg(b, i),
                    ctx.xseg(q),
                ],
            )?))
        }
        (Loc::Interior { edge: e1, vertex: p }, Loc::Interior { edge: e2, vertex: q }) => {
            if e1 == e2 {
                return Ok(None);
            }
            let (e1, p, e2, q) = if e1 <= e2 { (e1, p, e2, q) } else { (e2, q, e1, p) };
            let (a1, b1) = k3pp_tuple(e1);
            let (a2, b2) = k3pp_tuple(e2);
            if partner(e1) == e2 {
                // Same doubled side: route a..b through the third vertex.
                let c = 3 - a1 - b1;
                return Ok(Some(ctx.build(
                    PatternId::K4,
                    vec![ctx.b(a1), ctx.b(b1), p, q],
                    vec![
                        Seg::join(vec![side_seg(a1, c), side_seg(c, b1)]),
                        ctx.between(e1, ctx.b(a1), p),
                        ctx.between(e2, ctx.b(a1), q),
                        ctx.between(e1, ctx.b(b1), p),
                        ctx.between(e2, ctx.b(b1), q),
                        ctx.xseg(p),
                    ],
                )?));
            }
            // Distinct sides sharing exactly one branch vertex s.
            let shared = [a1, b1]
                .into_iter()
                .find(|v| *v == a2 || *v == b2)
                .expect("triangle sides share a vertex");
            let a = a1 + b1 - shared;
            let c = a2 + b2 - shared;
            Ok(Some(ctx.build(
                PatternId::K4,
                vec![ctx.b(a), ctx.b(shared), p, q],
                vec![
                    ctx.oriented(partner(e1), ctx.b(a)),
                    ctx.between(e1, ctx.b(a), p),
                    Seg::join(vec![side_seg(a, c), ctx.between(e2, ctx.b(c), q)]),
                    ctx.between(e1, ctx.b(shared), p),
                    ctx.between(e2, ctx.b(shared), q),
                    ctx.xseg(p),
                ],
            )?))
        }
    }
}

/// Parts-and-interiors K33 rebuild shared by K4 and K4plus: the two host
/// paths are vertex-disjoint, each split by an interior attachment point.
fn k33_from_disjoint_interiors(
    ctx: &Ctx,
    e1: usize,
    p: VertexId,
    e2: usize,
    q: VertexId,
) -> Result<SubdivisionModel, ModelError> {
    let (a1, a2) = ctx.model.pattern().edges()[e1];
    let (b1, b2) = ctx.model.pattern().edges()[e2];
    ctx.build(
        PatternId::K33,
        vec![ctx.b(a1), ctx.b(a2), q, ctx.b(b1), ctx.b(b2), p],
        vec![
            ctx.seg_uv(a1, b1),
            ctx.seg_uv(a1, b2),
            ctx.between(e1, ctx.b(a1), p),
            ctx.seg_uv(a2, b1),
            ctx.seg_uv(a2, b2),
            ctx.between(e1, ctx.b(a2), p),
            ctx.between(e2, q, ctx.b(b1)),
            ctx.between(e2, q, ctx.b(b2)),
            ctx.xseg(q),
        ],
    )
}

/// Hub-and-rim W4 rebuild shared by K4 and K4plus: branch `x` becomes the
/// hub, the split path plus the two remaining vertices the rim.
fn w4_from_branch_and_interior(
    ctx: &Ctx,
    x: usize,
    e: usize,
    q: VertexId,
) -> Result<SubdivisionModel, ModelError> {
    let (s, t) = ctx.model.pattern().edges()[e];
    let u = (0..4).find(|v| *v != x && *v != s && *v != t).unwrap();
    ctx.build(
        PatternId::W4,
        vec![ctx.b(s), q, ctx.b(t), ctx.b(u), ctx.b(x)],
        vec![
            ctx.between(e, ctx.b(s), q),
            ctx.between(e, q, ctx.b(t)),
            ctx.seg_uv(t, u),
            ctx.seg_uv(u, s),
            ctx.seg_uv(x, s),
            ctx.xseg(ctx.b(x)),
            ctx.seg_uv(x, t),
            ctx.seg_uv(x, u),
        ],
    )
}

fn upgrade_k4(ctx: &Ctx, la: Loc, lb: Loc) -> Result<Option<SubdivisionModel>, ModelError> {
    let edges = ctx.model.pattern().edges();
    match (la, lb) {
        (Loc::Branch(i), Loc::Branch(j)) => {
            let mut others: Vec<usize> = (0..4).filter(|v| *v != i && *v != j).collect();
            others.sort();
            let (o1, o2) = (others[0], others[1]);
            Ok(Some(ctx.build(
                PatternId::K4Plus,
                vec![ctx.b(i), ctx.b(j), ctx.b(o1), ctx.b(o2)],
                vec![
                    ctx.seg_uv(i, j),
                    ctx.xseg(ctx.b(i)),
                    ctx.seg_uv(i, o1),
                    ctx.seg_uv(i, o2),
                    ctx.seg_uv(j, o1),
                    ctx.seg_uv(j, o2),
                    ctx.seg_uv(o1, o2),
                ],
            )?))
        }
        (Loc::Branch(i), Loc::Interior { edge: e, vertex: q })
        | (Loc::Interior { edge: e, vertex: q }, Loc::Branch(i)) => {
            let (s, t) = edges[e];
            if i == s || i == t {
                return Ok(None);
            }
            Ok(Some(w4_from_branch_and_interior(ctx, i, e, q)?))
        }
        (Loc::Interior { edge: e1, vertex: p }, Loc::Interior { edge: e2, vertex: q }) => {
            if e1 == e2 {
                return Ok(None);
            }
            let (a1, a2) = edges[e1];
            let (b1, b2) = edges[e2];
            if a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 {
                return Ok(None);
            }
            Ok(Some(k33_from_disjoint_interiors(ctx, e1, p, e2, q)?))
        }
    }
}

fn upgrade_k4plus(ctx: &Ctx, la: Loc, lb: Loc) -> Result<Option<SubdivisionModel>, ModelError> {
    let edges = ctx.model.pattern().edges();
    match (la, lb) {
        (Loc::Branch(i), Loc::Branch(j)) => {
            let (i, j) = (i.min(j), i.max(j));
            if (i, j) == (0, 1) {
                // Triple route between the doubled pair.
                return Ok(Some(ctx.build(
                    PatternId::K4Ppp,
                    vec![ctx.b(0), ctx.b(1), ctx.b(2), ctx.b(3)],
                    vec![
                        ctx.whole(0),
                        ctx.whole(1),
                        ctx.xseg(ctx.b(0)),
                        ctx.seg_uv(3, 0),
                        ctx.seg_uv(3, 1),
                        ctx.seg_uv(3, 2),
                        ctx.seg_uv(2, 0),
                        ctx.seg_uv(2, 1),
                    ],
                )?));
            }
            if (i, j) == (2, 3) {
                return Ok(None); // two disjoint doubled sides
            }
            // The new doubled side {i, j} is incident with {0, 1}.
            let s = if i <= 1 { i } else { j }; // shared vertex of both doubled sides
            let v1 = 1 - s; // other end of the old doubled side
            let v2 = i + j - s; // other end of the new doubled side
            let v3 = (0..4).find(|v| *v != s && *v != v1 && *v != v2).unwrap();
            let bundle = |k: usize| -> Seg {
                let seg = ctx.whole(k);
                if seg.first() == ctx.b(s) {
                    seg
                } else {
                    seg.rev()
                }
            };
            Ok(Some(ctx.build(
                PatternId::K4Pp,
                vec![ctx.b(v1), ctx.b(v2), ctx.b(v3), ctx.b(s)],
                vec![
                    ctx.seg_uv(v1, v2),
                    ctx.seg_uv(v2, v3),
                    ctx.seg_uv(v3, v1),
                    bundle(0),
                    bundle(1),
                    ctx.seg_uv(s, v2),
                    ctx.xseg(ctx.b(s)),
                    ctx.seg_uv(s, v3),
                ],
            )?))
        }
        (Loc::Branch(i), Loc::Interior { edge: e, vertex: q })
        | (Loc::Interior { edge: e, vertex: q }, Loc::Branch(i)) => {
            let (s, t) = edges[e];
            if i == s || i == t {
                return Ok(None);
            }
            Ok(Some(w4_from_branch_and_interior(ctx, i, e, q)?))
        }
        (Loc::Interior { edge: e1, vertex: p }, Loc::Interior { edge: e2, vertex: q }) => {
            if e1 == e2 {
                return Ok(None);
            }
            let (a1, a2) = edges[e1];
            let (b1, b2) = edges[e2];
            if a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 {
                return Ok(None); // shared endpoint, including both bundle paths
            }
            Ok(Some(k33_from_disjoint_interiors(ctx, e1, p, e2, q)?))
        }
    }
}

fn upgrade_w4(ctx: &Ctx, la: Loc, lb: Loc) -> Result<Option<SubdivisionModel>, ModelError> {
    const HUB: usize = 4;
    let rim_q = |i: usize| i % 4; // certifying path index of rim edge Q_i
    let spoke_r = |i: usize| 4 + (i % 4); // certifying path index of spoke R_i
    let (la, lb) = match (la, lb) {
        // Normalize: hub branch first, then rim branch, then interiors.
        (a @ Loc::Branch(HUB), b) => (a, b),
        (a, b @ Loc::Branch(HUB)) => (b, a),
        (a @ Loc::Branch(_), b) => (a, b),
        (a, b @ Loc::Branch(_)) => (b, a),
        other => other,
    };
    match (la, lb) {
        (Loc::Branch(HUB), Loc::Branch(i)) => {
            // Doubled spoke: rotate the rim so that v_i leads.
            let r = |k: usize| (i + k) % 4;
            let hub = ctx.b(HUB);
            Ok(Some(ctx.build(
                PatternId::W4Plus,
                vec![ctx.b(r(0)), ctx.b(r(1)), ctx.b(r(2)), ctx.b(r(3)), hub],
                vec![
                    ctx.whole(spoke_r(i)).rev(),
                    ctx.xseg(ctx.b(i)),
                    ctx.whole(rim_q(i)),
                    ctx.whole(rim_q(i + 1)),
                    ctx.whole(rim_q(i + 2)),
                    ctx.whole(rim_q(i + 3)),
                    ctx.whole(spoke_r(i + 1)),
                    ctx.whole(spoke_r(i + 2)),
                    ctx.whole(spoke_r(i + 3)),
                ],
            )?))
        }
        (Loc::Branch(i), Loc::Branch(j)) if (i + 2) % 4 == j || (j + 2) % 4 == i => {
            // Chord between opposite rim vertices: the triangle
            // {v_i, hub, v_i+2} with the two remaining rim vertices as
            // apexes.
            let i = i.min(j);
            Ok(Some(ctx.build(
                PatternId::W4Star,
                vec![
                    ctx.b(i),
                    ctx.b(HUB),
                    ctx.b((i + 2) % 4),
                    ctx.b((i + 1) % 4),
                    ctx.b((i + 3) % 4),
                ],
                vec![
                    ctx.whole(rim_q(i)).rev(),
                    ctx.whole(spoke_r(i + 1)).rev(),
                    ctx.whole(rim_q(i + 1)),
                    ctx.whole(rim_q(i + 3)),
                    ctx.whole(spoke_r(i + 3)).rev(),
                    ctx.whole(rim_q(i + 2)).rev(),
                    ctx.whole(spoke_r(i)).rev(),
                    ctx.whole(spoke_r(i + 2)),
                    ctx.xseg(ctx.b((i + 2) % 4)),
                ],
            )?))
        }
        (Loc::Branch(HUB), Loc::Interior { edge, vertex: q }) if edge < 4 => {
            // Hub to rim interior: a five-spoke wheel.
            let i = edge;
            let hub = ctx.b(HUB);
            Ok(Some(ctx.build(
                PatternId::W5,
                vec![
                    ctx.b(i),
                    q,
                    ctx.b((i + 1) % 4),
                    ctx.b((i + 2) % 4),
                    ctx.b((i + 3) % 4),
                    hub,
                ],
                vec![
                    ctx.between(rim_q(i), ctx.b(i), q),
                    ctx.between(rim_q(i), q, ctx.b((i + 1) % 4)),
                    ctx.whole(rim_q(i + 1)),
                    ctx.whole(rim_q(i + 2)),
                    ctx.whole(rim_q(i + 3)),
                    ctx.whole(spoke_r(i)),
                    ctx.xseg(hub),
                    ctx.whole(spoke_r(i + 1)),
                    ctx.whole(spoke_r(i + 2)),
                    ctx.whole(spoke_r(i + 3)),
                ],
            )?))
        }
        (Loc::Branch(i), Loc::Interior { edge, vertex: q })
            if i < 4 && edge == spoke_r(i + 2) =>
        {
            // Rim vertex to the interior of the opposite spoke.
            let hub = ctx.b(HUB);
            Ok(Some(ctx.build(
                PatternId::K33Plus,
                vec![
                    hub,
                    ctx.b(i),
                    ctx.b((i + 2) % 4),
                    ctx.b((i + 1) % 4),
                    ctx.b((i + 3) % 4),
                    q,
                ],
                vec![
                    ctx.whole(spoke_r(i + 1)),
                    ctx.whole(spoke_r(i + 3)),
                    ctx.between(spoke_r(i + 2), hub, q),
                    ctx.whole(rim_q(i)),
                    ctx.whole(rim_q(i + 3)).rev(),
                    ctx.xseg(ctx.b(i)),
                    ctx.whole(rim_q(i + 1)).rev(),
                    ctx.whole(rim_q(i + 2)),
                    ctx.between(spoke_r(i + 2), ctx.b((i + 2) % 4), q),
                    ctx.whole(spoke_r(i)),
                ],
            )?))
        }
        _ => Ok(None),
    }
}

fn upgrade_k33(ctx: &Ctx, la: Loc, lb: Loc) -> Result<Option<SubdivisionModel>, ModelError> {
    match (la, lb) {
        (Loc::Branch(i), Loc::Branch(j)) => {
            let same_low = i < 3 && j < 3;
            let same_high = i >= 3 && j >= 3;
            if !(same_low || same_high) {
                return Ok(None);
            }
            let (i, j) = (i.min(j), i.max(j));
            let (part, other): (Vec<usize>, Vec<usize>) = if same_low {
                let k = (0..3).find(|v| *v != i && *v != j).unwrap();
                (vec![i, j, k], vec![3, 4, 5])
            } else {
                let k = (3..6).find(|v| *v != i && *v != j).unwrap();
                (vec![i, j, k], vec![0, 1, 2])
            };
            let mut segs = Vec::new();
            for &u in &part {
                for &w in &other {
                    segs.push(ctx.seg_uv(u, w));
                }
            }
            segs.push(ctx.xseg(ctx.b(part[0])));
            let branch: Vec<VertexId> = part
                .iter()
                .chain(other.iter())
                .map(|&v| ctx.b(v))
                .collect();
            Ok(Some(ctx.build(PatternId::K33Plus, branch, segs)?))
        }
        _ => Ok(None),
    }
}
