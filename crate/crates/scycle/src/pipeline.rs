//! The certificate pipeline: from any rooted graph produce either two
//! vertex-disjoint S-cycles or an S-cycle hitting set of size at most 4.
//!
//! The flow grows an S-cycle subdivision model along the chain
//! cycle -> theta3/K3+ -> K3++ -> K3+++ | K4 -> K4+ -> K4++/K4+++ | W4 |
//! K33 -> ... and exits at terminal recipes. Every deletion set tried
//! against the graph has size at most 4; a set that kills all S-cycles is
//! returned as a hitting certificate, and every case the analysis resolves
//! to "two disjoint S-cycles" returns the pair. In strict mode a case with
//! no outcome is a structure violation; in fallback mode the exact oracles
//! take over (still never emitting an unverified certificate).

use std::collections::BTreeSet;

use crate::error::{GraphError, ModelError, OracleError, PipelineError};
use crate::extend::{
    find_extension, find_pattern_upgrade, is_extension, ExtensionOutcome, UpgradeOutcome,
};
use crate::graph::{Cycle, Path, RootedGraph, VertexId};
use crate::model::{
    mid_decompose, model_cycle_avoiding, realize_pattern_cycle, small_hitting_set,
    CertPath, SubdivisionModel, WPath,
};
use crate::oracle::{
    has_s_cycle, mu_exact, shortest_s_cycle, tau_exact, verify_certificate, Certificate,
    HittingCertificate, PackingCertificate, TauResult,
};
use crate::pattern::PatternId;

/// Strict mode follows only the case analysis and fails loudly on any
/// uncovered case; fallback mode answers via the exact oracles instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Fallback,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "strict" => Some(Mode::Strict),
            "fallback" => Some(Mode::Fallback),
            _ => None,
        }
    }
}

/// A finished run: a verified certificate plus the step trace.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub certificate: Certificate,
    pub trace: Vec<String>,
}

/// Internal failures of the constructive path.
#[derive(Debug)]
pub(crate) enum RunError {
    Violation { step: String, explanation: String },
    Oracle(OracleError),
    Graph(GraphError),
}

impl From<OracleError> for RunError {
    fn from(e: OracleError) -> Self {
        RunError::Oracle(e)
    }
}

impl From<GraphError> for RunError {
    fn from(e: GraphError) -> Self {
        RunError::Graph(e)
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Structure { step, explanation } => RunError::Violation { step, explanation },
            ModelError::Invalid(m) => RunError::Violation {
                step: "model".into(),
                explanation: m,
            },
            ModelError::Graph(g) => RunError::Graph(g),
        }
    }
}

fn fmt_set(t: &BTreeSet<VertexId>) -> String {
    let ids: Vec<String> = t.iter().map(|v| v.to_string()).collect();
    format!("[{}]", ids.join(","))
}

/// One step of the pipeline either finishes or upgrades the model.
pub(crate) enum StepResult {
    Done(Certificate),
    Upgraded(SubdivisionModel),
}

/// Either an early certificate or a model for the next phase.
pub enum BuildOutcome {
    Certificate(Certificate),
    Model(SubdivisionModel),
}

const MAX_ROUNDS: usize = 64;

/// Runs the full pipeline. The returned certificate is always verified
/// against `g` before being handed out.
pub fn hit4(g: &RootedGraph, mode: Mode) -> Result<PipelineRun, PipelineError> {
    let mut trace = Vec::new();
    match run_constructive(g, &mut trace) {
        Ok(cert) => {
            // In fallback mode a hitting certificate is cross-checked
            // against the packing oracle so that instances with two
            // disjoint S-cycles always receive the pair.
            if mode == Mode::Fallback {
                if let Certificate::Hitting(_) = &cert {
                    let (k, pack) = mu_exact(g, 2)?;
                    if k >= 2 {
                        trace.push("step=packing-check pattern=- T=[] result=pack".into());
                        return finish(g, Certificate::Packing(pack), trace);
                    }
                }
            }
            finish(g, cert, trace)
        }
        Err(RunError::Oracle(e)) => Err(e.into()),
        Err(RunError::Graph(e)) => Err(e.into()),
        Err(RunError::Violation { step, explanation }) => {
            trace.push(format!("step={step} pattern=- T=[] result=violation"));
            // Two disjoint S-cycles are a legitimate exit in both modes.
            let (k, pack) = mu_exact(g, 2)?;
            if k >= 2 {
                trace.push("step=recover-mu pattern=- T=[] result=pack".into());
                return finish(g, Certificate::Packing(pack), trace);
            }
            match mode {
                Mode::Strict => Err(PipelineError::StructureViolation { step, explanation }),
                Mode::Fallback => match tau_exact(g, 4)? {
                    TauResult::Exact(_, hit) => {
                        trace.push("step=recover-tau pattern=- T=[] result=hit".into());
                        finish(g, Certificate::Hitting(hit), trace)
                    }
                    TauResult::ExceedsBound => Err(PipelineError::StructureViolation {
                        step: "recover-tau".into(),
                        explanation: "mu <= 1 yet no hitting set of size 4 exists".into(),
                    }),
                },
            }
        }
    }
}

fn finish(
    g: &RootedGraph,
    cert: Certificate,
    trace: Vec<String>,
) -> Result<PipelineRun, PipelineError> {
    verify_certificate(g, &cert).map_err(|e| PipelineError::StructureViolation {
        step: "final-verify".into(),
        explanation: e,
    })?;
    Ok(PipelineRun {
        certificate: cert,
        trace,
    })
}

fn run_constructive(g: &RootedGraph, trace: &mut Vec<String>) -> Result<Certificate, RunError> {
    let mut state = match build_base(g, trace)? {
        BuildOutcome::Certificate(c) => return Ok(c),
        BuildOutcome::Model(m) => m,
    };
    for _ in 0..MAX_ROUNDS {
        let step = match state.pattern() {
            PatternId::K4 | PatternId::K4Plus | PatternId::K33 => {
                match upgrade_k4(g, &state, trace)? {
                    BuildOutcome::Certificate(c) => StepResult::Done(c),
                    BuildOutcome::Model(m) => StepResult::Upgraded(m),
                }
            }
            PatternId::W4 => upgrade_w4(g, &state, trace)?,
            PatternId::K3Ppp => terminal_k3ppp(g, &state, trace)?,
            PatternId::K4Pp => terminal_k4pp(g, &state, trace)?,
            PatternId::K4Ppp => terminal_k4ppp(g, &state, trace)?,
            PatternId::W4Plus => terminal_w4p(g, &state, trace)?,
            PatternId::W4Star => terminal_w4star(g, &state, trace)?,
            PatternId::W5 => terminal_w5(g, &state, trace)?,
            PatternId::K33Plus => terminal_k33p(g, &state, trace)?,
            other => {
                return Err(RunError::Violation {
                    step: "dispatch".into(),
                    explanation: format!("pattern {} cannot appear here", other.name()),
                })
            }
        };
        match step {
            StepResult::Done(cert) => return Ok(cert),
            StepResult::Upgraded(m) => state = m,
        }
    }
    Err(RunError::Violation {
        step: "round-limit".into(),
        explanation: "pipeline failed to terminate".into(),
    })
}

/// A closed certifying path from a cycle, rotated to start at `anchor`.
fn closed_petal(c: &Cycle, anchor: VertexId) -> CertPath {
    let n = c.len();
    let i = c
        .vertices()
        .iter()
        .position(|&v| v == anchor)
        .expect("anchor on cycle");
    let mut vs: Vec<VertexId> = (0..n).map(|k| c.vertices()[(i + k) % n]).collect();
    vs.push(anchor);
    let es = (0..n).map(|k| c.edges()[(i + k) % n]).collect();
    CertPath::closed(vs, es)
}

fn min_root_on(g: &RootedGraph, c: &Cycle) -> VertexId {
    c.vertices()
        .iter()
        .copied()
        .filter(|&v| g.is_root(v))
        .min()
        .expect("an S-cycle carries a root")
}

fn first_model_cycle(g: &RootedGraph, model: &SubdivisionModel) -> Cycle {
    let pcs = crate::model::pattern_cycles(model.pattern());
    realize_pattern_cycle(g, model, &pcs[0])
}

/// Builds the base subdivision: grows a single S-cycle into a model of
/// K3+++ or K4 (through two glued cycles, theta3, K3+, K3++), or exits
/// with a certificate on the way.
pub(crate) fn build_base(g: &RootedGraph, trace: &mut Vec<String>) -> Result<BuildOutcome, RunError> {
    let done = |c: Certificate| Ok(BuildOutcome::Certificate(c));
    let hit = |t: BTreeSet<VertexId>| Certificate::Hitting(HittingCertificate { vertices: t });
    let pack = |a: Cycle, b: Cycle| {
        Certificate::Packing(PackingCertificate {
            cycles: vec![a, b],
        })
    };

    // Stage 1: an S-cycle at all?
    let Some(c1) = shortest_s_cycle(g)? else {
        trace.push("step=base-cycle pattern=- T=[] result=hit".into());
        return done(hit(BTreeSet::new()));
    };
    let v = min_root_on(g, &c1);
    let d1 = BTreeSet::from([v]);
    let g1 = g.delete_vertices(&d1)?;
    if !has_s_cycle(&g1) {
        trace.push(format!("step=base-cycle pattern=- T={} result=hit", fmt_set(&d1)));
        return done(hit(d1));
    }
    let c2 = shortest_s_cycle(&g1)?.expect("has_s_cycle verified");

    let anchor = *c1.vertices().iter().min().unwrap();
    let loop1 = SubdivisionModel::new(g, PatternId::Loop1, vec![anchor], vec![closed_petal(&c1, anchor)])?;
    if c2.disjoint_from(&c1) {
        trace.push("step=base-cycle pattern=loop1 T=[] result=pack".into());
        return done(pack(c1, c2));
    }

    let mut model = match find_extension(g, &loop1, &d1, &c2)? {
        ExtensionOutcome::Contact(u) => {
            trace.push(format!("step=base-cycle pattern=loop1 T={} result=upgrade", fmt_set(&d1)));
            let loop2 = SubdivisionModel::new(
                g,
                PatternId::Loop2,
                vec![u],
                vec![closed_petal(&c1, u), closed_petal(&c2, u)],
            )?;
            match loop2_stage(g, &loop2, v, trace)? {
                StepResult::Done(c) => return done(c),
                StepResult::Upgraded(m) => m,
            }
        }
        ExtensionOutcome::Extension(x) => match find_pattern_upgrade(g, &loop1, &x)? {
            UpgradeOutcome::Upgraded(m) => {
                trace.push(format!("step=base-cycle pattern=loop1 T={} result=upgrade", fmt_set(&d1)));
                m
            }
            UpgradeOutcome::DisjointPair(p) => {
                trace.push("step=base-cycle pattern=loop1 T=[] result=pack".into());
                return done(Certificate::Packing(p));
            }
        },
    };

    // Stage 2/3: grow until K3+++ or K4 appears.
    for _ in 0..MAX_ROUNDS {
        match model.pattern() {
            PatternId::K3Ppp | PatternId::K4 => return Ok(BuildOutcome::Model(model)),
            PatternId::Theta3 | PatternId::K3Plus | PatternId::K3Pp => {
                match growth_step(g, &model, trace)? {
                    StepResult::Done(c) => return done(c),
                    StepResult::Upgraded(m) => model = m,
                }
            }
            other => {
                return Err(RunError::Violation {
                    step: "build-base".into(),
                    explanation: format!("unexpected pattern {}", other.name()),
                })
            }
        }
    }
    Err(RunError::Violation {
        step: "build-base".into(),
        explanation: "base construction failed to terminate".into(),
    })
}

/// The two-glued-cycles stage, including the retry when the new cycle
/// touches W exactly at the shared vertex (where no disjoint pair exists
/// inside W + C).
fn loop2_stage(
    g: &RootedGraph,
    model: &SubdivisionModel,
    v: VertexId,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let anchor = model.branch_vertex(0);
    let mut t = small_hitting_set(g, model)?;
    t.insert(v);
    let step_name = "glued-cycles";

    let mut deletions = t.clone();
    for attempt in 0..2 {
        let rest = g.delete_vertices(&deletions)?;
        if !has_s_cycle(&rest) {
            trace.push(format!(
                "step={step_name} pattern=loop2 T={} result=hit",
                fmt_set(&deletions)
            ));
            return Ok(StepResult::Done(Certificate::Hitting(HittingCertificate {
                vertices: deletions,
            })));
        }
        let c = shortest_s_cycle(&rest)?.expect("has_s_cycle verified");
        if !c.vertices().iter().any(|&x| model.union(g).contains_vertex(x)) {
            trace.push(format!("step={step_name} pattern=loop2 T={} result=pack", fmt_set(&deletions)));
            return Ok(StepResult::Done(Certificate::Packing(PackingCertificate {
                cycles: vec![first_model_cycle(g, model), c],
            })));
        }
        match find_extension(g, model, &t, &c)? {
            ExtensionOutcome::Contact(u) => {
                if let Some(z) = model_cycle_avoiding(g, model, u) {
                    trace.push(format!("step={step_name} pattern=loop2 T={} result=pack", fmt_set(&deletions)));
                    return Ok(StepResult::Done(Certificate::Packing(PackingCertificate {
                        cycles: vec![c, z],
                    })));
                }
                // Contact at the shared vertex: both petals pass through
                // it, so delete it too and retry once.
                debug_assert_eq!(u, anchor);
                if attempt == 1 {
                    return Err(RunError::Violation {
                        step: step_name.into(),
                        explanation: "contact at the shared vertex after deleting it".into(),
                    });
                }
                deletions.insert(u);
            }
            ExtensionOutcome::Extension(x) => {
                return match find_pattern_upgrade(g, model, &x)? {
                    UpgradeOutcome::Upgraded(m) => {
                        trace.push(format!(
                            "step={step_name} pattern=loop2 T={} result=upgrade",
                            fmt_set(&deletions)
                        ));
                        Ok(StepResult::Upgraded(m))
                    }
                    UpgradeOutcome::DisjointPair(p) => {
                        trace.push(format!(
                            "step={step_name} pattern=loop2 T={} result=pack",
                            fmt_set(&deletions)
                        ));
                        Ok(StepResult::Done(Certificate::Packing(p)))
                    }
                };
            }
        }
    }
    unreachable!("loop2 retry is bounded")
}

/// Extra vertices deleted alongside the root hitting set before searching
/// for a new S-cycle: exactly the branch vertices every cycle of the
/// current pattern passes through.
fn extra_deletions(model: &SubdivisionModel) -> Vec<VertexId> {
    match model.pattern() {
        PatternId::Theta3 => vec![model.branch_vertex(0), model.branch_vertex(1)],
        PatternId::K3Plus => vec![model.branch_vertex(0)],
        _ => Vec::new(),
    }
}

/// One growth round: pick a small hitting set inside the model, find a
/// surviving S-cycle, and either finish or upgrade.
fn growth_step(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let name = model.pattern().name();
    let t = small_hitting_set(g, model)?;
    let mut deletions = t.clone();
    deletions.extend(extra_deletions(model));
    debug_assert!(deletions.len() <= 4, "deletion set exceeds 4 on {name}");

    let rest = g.delete_vertices(&deletions)?;
    if !has_s_cycle(&rest) {
        trace.push(format!("step=grow pattern={name} T={} result=hit", fmt_set(&deletions)));
        return Ok(StepResult::Done(Certificate::Hitting(HittingCertificate {
            vertices: deletions,
        })));
    }
    let c = shortest_s_cycle(&rest)?.expect("has_s_cycle verified");
    let union = model.union(g);
    if !c.vertices().iter().any(|&x| union.contains_vertex(x)) {
        trace.push(format!("step=grow pattern={name} T={} result=pack", fmt_set(&deletions)));
        return Ok(StepResult::Done(Certificate::Packing(PackingCertificate {
            cycles: vec![first_model_cycle(g, model), c],
        })));
    }
    match find_extension(g, model, &t, &c)? {
        ExtensionOutcome::Contact(u) => {
            let Some(z) = model_cycle_avoiding(g, model, u) else {
                return Err(RunError::Violation {
                    step: "grow".into(),
                    explanation: format!("every {name} cycle passes the contact vertex"),
                });
            };
            trace.push(format!("step=grow pattern={name} T={} result=pack", fmt_set(&deletions)));
            Ok(StepResult::Done(Certificate::Packing(PackingCertificate {
                cycles: vec![c, z],
            })))
        }
        ExtensionOutcome::Extension(x) => match find_pattern_upgrade(g, model, &x)? {
            UpgradeOutcome::Upgraded(m) => {
                trace.push(format!("step=grow pattern={name} T={} result=upgrade", fmt_set(&deletions)));
                Ok(StepResult::Upgraded(m))
            }
            UpgradeOutcome::DisjointPair(p) => {
                trace.push(format!("step=grow pattern={name} T={} result=pack", fmt_set(&deletions)));
                Ok(StepResult::Done(Certificate::Packing(p)))
            }
        },
    }
}

/// Climbs the K4 chain (K4, K4+, K33) until it leaves for a terminal
/// pattern or a certificate.
pub(crate) fn upgrade_k4(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<BuildOutcome, RunError> {
    let mut state = model.clone();
    for _ in 0..MAX_ROUNDS {
        match state.pattern() {
            PatternId::K4 | PatternId::K4Plus | PatternId::K33 => {
                match growth_step(g, &state, trace)? {
                    StepResult::Done(c) => return Ok(BuildOutcome::Certificate(c)),
                    StepResult::Upgraded(m) => state = m,
                }
            }
            _ => return Ok(BuildOutcome::Model(state)),
        }
    }
    Err(RunError::Violation {
        step: "upgrade-k4".into(),
        explanation: "K4 chain failed to terminate".into(),
    })
}

/// One W4 round, leaving for W4+, W4*, W5, K33+ or a certificate.
pub(crate) fn upgrade_w4(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    growth_step(g, model, trace)
}

fn terminal_hit(
    g: &RootedGraph,
    model: &SubdivisionModel,
    step: &str,
    t: BTreeSet<VertexId>,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    debug_assert!(t.len() <= 4);
    let name = model.pattern().name();
    let rest = g.delete_vertices(&t)?;
    if has_s_cycle(&rest) {
        trace.push(format!("step={step} pattern={name} T={} result=violation", fmt_set(&t)));
        return Err(RunError::Violation {
            step: step.into(),
            explanation: format!("terminal hitting set {} fails on {}", fmt_set(&t), name),
        });
    }
    trace.push(format!("step={step} pattern={name} T={} result=hit", fmt_set(&t)));
    Ok(StepResult::Done(Certificate::Hitting(HittingCertificate {
        vertices: t,
    })))
}

/// K3+++ terminal: the three branch vertices hit everything.
pub(crate) fn terminal_k3ppp(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let t: BTreeSet<VertexId> = model.branch().iter().copied().collect();
    terminal_hit(g, model, "terminal-k3ppp", t, trace)
}

/// K4++ terminal: {v1, v2, v4} plus a gate of Q1, or the root on Q2 u Q3
/// closest to v3.
pub(crate) fn terminal_k4pp(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let (v1, v2, v4) = (
        model.branch_vertex(0),
        model.branch_vertex(1),
        model.branch_vertex(3),
    );
    let mut t = BTreeSet::from([v1, v2, v4]);
    let roots: BTreeSet<VertexId> = g.roots().collect();
    let q1 = model.cert_path(0).to_path(g)?;
    let dec = mid_decompose(g, &q1, &roots);
    if let Some((gate, _)) = dec.gates {
        t.insert(gate);
    } else {
        // Roots on Q2 u Q3 ranked by distance to v3, preferring Q2.
        let mut best: Option<(usize, usize, VertexId)> = None;
        for (pref, e) in [(0usize, 1usize), (1, 2)] {
            let cp = model.cert_path(e);
            let vs = cp.vertices();
            // Q2 runs v2..v3, Q3 runs v3..v1.
            for (i, &x) in vs.iter().enumerate() {
                if !g.is_root(x) || x == v1 || x == v2 {
                    continue;
                }
                let dist = if e == 1 { vs.len() - 1 - i } else { i };
                let key = (dist, pref, x);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        if let Some((_, _, w)) = best {
            t.insert(w);
        }
    }
    terminal_hit(g, model, "terminal-k4pp", t, trace)
}

/// Searches for a W-extension between the vertex sets, interior outside W,
/// avoiding `forbidden`; exhaustive DFS in deterministic order.
fn search_extension(
    g: &RootedGraph,
    model: &SubdivisionModel,
    from: &BTreeSet<VertexId>,
    to: &BTreeSet<VertexId>,
    forbidden: &BTreeSet<VertexId>,
) -> Option<WPath> {
    let w = model.union(g);
    let budget_limit = 200_000usize;
    let mut budget = 0usize;
    for &p in from {
        if forbidden.contains(&p) {
            continue;
        }
        // DFS over simple paths with interior outside W.
        struct Dfs<'a> {
            g: &'a RootedGraph,
            model: &'a SubdivisionModel,
            w: &'a crate::graph::Subgraph,
            to: &'a BTreeSet<VertexId>,
            forbidden: &'a BTreeSet<VertexId>,
            vertices: Vec<VertexId>,
            edges: Vec<crate::graph::EdgeId>,
            budget: usize,
            limit: usize,
        }
        impl Dfs<'_> {
            fn explore(&mut self, u: VertexId) -> Option<WPath> {
                for &(e, y) in self.g.incident(u) {
                    self.budget += 1;
                    if self.budget > self.limit {
                        return None;
                    }
                    if y == u || self.forbidden.contains(&y) {
                        continue;
                    }
                    if self.to.contains(&y) && y != self.vertices[0] {
                        let direct_w_edge = self.edges.is_empty() && self.w.contains_edge(e);
                        if !direct_w_edge {
                            let mut vs = self.vertices.clone();
                            vs.push(y);
                            let mut es = self.edges.clone();
                            es.push(e);
                            if let Ok(path) = Path::new(self.g, vs, es) {
                                if is_extension(self.g, self.model, &path) {
                                    return Some(WPath { path });
                                }
                            }
                        }
                    }
                    if !self.w.contains_vertex(y) && !self.vertices.contains(&y) {
                        self.vertices.push(y);
                        self.edges.push(e);
                        if let Some(found) = self.explore(y) {
                            return Some(found);
                        }
                        self.edges.pop();
                        self.vertices.pop();
                    }
                }
                None
            }
        }
        let mut dfs = Dfs {
            g,
            model,
            w: &w,
            to,
            forbidden,
            vertices: vec![p],
            edges: Vec::new(),
            budget,
            limit: budget_limit,
        };
        if let Some(found) = dfs.explore(p) {
            return Some(found);
        }
        budget = dfs.budget;
    }
    None
}

/// K4+++ terminal: an extension from a P-path interior into Q3 upgrades to
/// K33+; otherwise the four branch vertices hit everything.
pub(crate) fn terminal_k4ppp(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let branch: BTreeSet<VertexId> = model.branch().iter().copied().collect();
    let mut from = BTreeSet::new();
    for e in 0..3 {
        from.extend(model.cert_path(e).interior().iter().copied());
    }
    let to: BTreeSet<VertexId> = model.cert_path(5).interior().iter().copied().collect();
    if let Some(x) = search_extension(g, model, &from, &to, &branch) {
        let m = k33plus_from_k4ppp(g, model, &x)?;
        trace.push(format!("step=terminal-k4ppp pattern=K4ppp T={} result=upgrade", fmt_set(&branch)));
        return Ok(StepResult::Upgraded(m));
    }
    terminal_hit(g, model, "terminal-k4ppp", branch, trace)
}

fn k33plus_from_k4ppp(
    g: &RootedGraph,
    model: &SubdivisionModel,
    x: &WPath,
) -> Result<SubdivisionModel, RunError> {
    // Parts {v1, v2, q} / {v4, p, v3}; one unused P-path becomes the extra
    // Q route, the other is dropped.
    let (p, q) = x.endpoints();
    let pi = (0..3)
        .find(|&e| model.cert_path(e).interior().contains(&p))
        .ok_or_else(|| RunError::Violation {
            step: "terminal-k4ppp".into(),
            explanation: "extension endpoint not on a P path".into(),
        })?;
    let (b0, b1, b2, b3) = (
        model.branch_vertex(0),
        model.branch_vertex(1),
        model.branch_vertex(2),
        model.branch_vertex(3),
    );
    let spare = (0..3).find(|&e| e != pi).unwrap();
    let sub = |e: usize, a: VertexId, b: VertexId| subpath(g, model.cert_path(e), a, b);
    let rev = |p: Path| p.reversed();
    let xp = if x.path.first() == q {
        x.path.clone()
    } else {
        x.path.reversed()
    };
    let paths: Vec<CertPath> = vec![
        rev(model.cert_path(3).to_path(g)?),  // (0,3) v1 -> v4
        sub(pi, b0, p),                       // (0,4) v1 -> p
        rev(model.cert_path(6).to_path(g)?),  // (0,5) v1 -> v3
        rev(model.cert_path(4).to_path(g)?),  // (1,3) v2 -> v4
        sub(pi, b1, p),                       // (1,4) v2 -> p
        rev(model.cert_path(7).to_path(g)?),  // (1,5) v2 -> v3
        sub(5, q, b3),                        // (2,3) q -> v4
        Path::new(g, xp.vertices().to_vec(), xp.edges().to_vec()).unwrap(), // (2,4) q -> p
        sub(5, q, b2),                        // (2,5) q -> v3
        model.cert_path(spare).to_path(g)?,   // extra Q: v1 -> v2
    ]
    .into_iter()
    .map(|p| CertPath::open(&p))
    .collect();
    Ok(SubdivisionModel::new(
        g,
        PatternId::K33Plus,
        vec![b0, b1, q, b3, p, b2],
        paths,
    )?)
}

fn subpath(g: &RootedGraph, cp: &CertPath, a: VertexId, b: VertexId) -> Path {
    let vs = cp.vertices();
    let ia = vs.iter().position(|&v| v == a).expect("a on path");
    let ib = vs.iter().position(|&v| v == b).expect("b on path");
    let (lo, hi) = (ia.min(ib), ia.max(ib));
    let p = Path::new(g, vs[lo..=hi].to_vec(), cp.edges()[lo..hi].to_vec()).unwrap();
    if ia <= ib {
        p
    } else {
        p.reversed()
    }
}

/// W4+ terminal: an extension from P1 u P2 into v3 upgrades to K33+;
/// otherwise {v1, w} plus the roots on each rim half closest to v3.
pub(crate) fn terminal_w4p(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let v1 = model.branch_vertex(0);
    let v3 = model.branch_vertex(2);
    let w = model.branch_vertex(4);
    let core = BTreeSet::from([v1, w]);
    let mut from = BTreeSet::new();
    from.extend(model.cert_path(0).interior().iter().copied());
    from.extend(model.cert_path(1).interior().iter().copied());
    let to = BTreeSet::from([v3]);
    if let Some(x) = search_extension(g, model, &from, &to, &core) {
        let m = k33plus_from_w4plus(g, model, &x)?;
        trace.push(format!("step=terminal-w4p pattern=W4plus T={} result=upgrade", fmt_set(&core)));
        return Ok(StepResult::Upgraded(m));
    }
    let mut t = core;
    // Rim halves (Q1 u Q2) - v1 and (Q3 u Q4) - v1, each contributing its
    // root closest to v3.
    for (ea, eb) in [(2usize, 3usize), (4, 5)] {
        let mut best: Option<(usize, VertexId)> = None;
        for e in [ea, eb] {
            let cp = model.cert_path(e);
            let vs = cp.vertices();
            for (i, &x) in vs.iter().enumerate() {
                if !g.is_root(x) || x == v1 {
                    continue;
                }
                // Distance to v3 along the rim half.
                let dist = match e {
                    2 => (vs.len() - 1 - i) + model.cert_path(3).len(), // on Q1: via v2
                    3 => vs.len() - 1 - i,                              // on Q2: towards v3
                    4 => i,                                             // on Q3: from v3
                    _ => i + model.cert_path(4).len(),                  // on Q4: via v4
                };
                let key = (dist, x);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        if let Some((_, x)) = best {
            t.insert(x);
        }
    }
    terminal_hit(g, model, "terminal-w4p", t, trace)
}

fn k33plus_from_w4plus(
    g: &RootedGraph,
    model: &SubdivisionModel,
    x: &WPath,
) -> Result<SubdivisionModel, RunError> {
    // Parts {v1, w, v3} / {p, v2, v4}; the unused P path is the extra Q
    // route and the spoke R3 is dropped.
    let (a, b) = x.endpoints();
    let (v1, v2, v3, v4, w) = (
        model.branch_vertex(0),
        model.branch_vertex(1),
        model.branch_vertex(2),
        model.branch_vertex(3),
        model.branch_vertex(4),
    );
    let p = if a == v3 { b } else { a };
    let mut xp = x.path.clone();
    if xp.first() != v3 {
        xp = xp.reversed(); // orient v3 -> p
    }
    let pi = (0..2)
        .find(|&e| model.cert_path(e).interior().contains(&p))
        .ok_or_else(|| RunError::Violation {
            step: "terminal-w4p".into(),
            explanation: "extension endpoint not on P1 or P2".into(),
        })?;
    let spare = 1 - pi;
    let sub = |e: usize, a: VertexId, b: VertexId| subpath(g, model.cert_path(e), a, b);
    let paths: Vec<CertPath> = vec![
        sub(pi, v1, p),                           // (0,3) v1 -> p
        model.cert_path(2).to_path(g)?,           // (0,4) v1 -> v2
        model.cert_path(5).to_path(g)?.reversed(), // (0,5) v1 -> v4
        sub(pi, w, p),                            // (1,3) w -> p
        model.cert_path(6).to_path(g)?,           // (1,4) w -> v2
        model.cert_path(8).to_path(g)?,           // (1,5) w -> v4
        xp,                                       // (2,3) v3 -> p
        model.cert_path(3).to_path(g)?.reversed(), // (2,4) v3 -> v2
        model.cert_path(4).to_path(g)?,           // (2,5) v3 -> v4
        model.cert_path(spare).to_path(g)?,       // extra Q: v1 -> w
    ]
    .into_iter()
    .map(|p| CertPath::open(&p))
    .collect();
    Ok(SubdivisionModel::new(
        g,
        PatternId::K33Plus,
        vec![v1, w, v3, p, v2, v4],
        paths,
    )?)
}

/// W4* terminal: the triangle vertices form a hitting set of size 3.
pub(crate) fn terminal_w4star(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let t = BTreeSet::from([
        model.branch_vertex(0),
        model.branch_vertex(1),
        model.branch_vertex(2),
    ]);
    terminal_hit(g, model, "terminal-w4star", t, trace)
}

/// W5 terminal: the hub plus any rim root.
pub(crate) fn terminal_w5(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let hub = model.branch_vertex(5);
    let mut rim: BTreeSet<VertexId> = (0..5).map(|i| model.branch_vertex(i)).collect();
    for e in 0..5 {
        rim.extend(model.cert_path(e).vertices().iter().copied());
    }
    let q = rim
        .iter()
        .copied()
        .filter(|&v| g.is_root(v))
        .min()
        .ok_or_else(|| RunError::Violation {
            step: "terminal-w5".into(),
            explanation: "rim of an S-cycle W5-subdivision carries no root".into(),
        })?;
    terminal_hit(g, model, "terminal-w5", BTreeSet::from([hub, q]), trace)
}

/// K33+ terminal: the part holding the extra route, plus a gate of that
/// route when its mid part is nonempty.
pub(crate) fn terminal_k33p(
    g: &RootedGraph,
    model: &SubdivisionModel,
    trace: &mut Vec<String>,
) -> Result<StepResult, RunError> {
    let mut t = BTreeSet::from([
        model.branch_vertex(0),
        model.branch_vertex(1),
        model.branch_vertex(2),
    ]);
    let roots: BTreeSet<VertexId> = g.roots().collect();
    let q = model.cert_path(9).to_path(g)?;
    if let Some((gate, _)) = mid_decompose(g, &q, &roots).gates {
        t.insert(gate);
    }
    terminal_hit(g, model, "terminal-k33p", t, trace)
}

/// Runs the first phase alone: either a certificate or a model of K3+++
/// or K4 for the rest of the pipeline.
pub fn build_base_phase(g: &RootedGraph) -> Result<(BuildOutcome, Vec<String>), PipelineError> {
    let mut trace = Vec::new();
    match build_base(g, &mut trace) {
        Ok(out) => Ok((out, trace)),
        Err(RunError::Violation { step, explanation }) => {
            Err(PipelineError::StructureViolation { step, explanation })
        }
        Err(RunError::Oracle(e)) => Err(e.into()),
        Err(RunError::Graph(e)) => Err(e.into()),
    }
}

/// Convenience wrappers around the internal error type, used by the CLI
/// and tests that drive terminals directly.
pub mod terminals {
    use super::*;

    /// Outcome of driving a single terminal handler.
    pub enum TerminalOutcome {
        Done(Certificate),
        Upgraded(SubdivisionModel),
    }

    fn wrap(
        r: Result<StepResult, RunError>,
    ) -> Result<TerminalOutcome, PipelineError> {
        match r {
            Ok(StepResult::Done(c)) => Ok(TerminalOutcome::Done(c)),
            Ok(StepResult::Upgraded(m)) => Ok(TerminalOutcome::Upgraded(m)),
            Err(RunError::Violation { step, explanation }) => {
                Err(PipelineError::StructureViolation { step, explanation })
            }
            Err(RunError::Oracle(e)) => Err(e.into()),
            Err(RunError::Graph(e)) => Err(e.into()),
        }
    }

    pub fn k3ppp(g: &RootedGraph, m: &SubdivisionModel) -> Result<TerminalOutcome, PipelineError> {
        wrap(super::terminal_k3ppp(g, m, &mut Vec::new()))
    }

    pub fn k4pp(g: &RootedGraph, m: &SubdivisionModel) -> Result<TerminalOutcome, PipelineError> {
        wrap(super::terminal_k4pp(g, m, &mut Vec::new()))
    }

    pub fn k4ppp(g: &RootedGraph, m: &SubdivisionModel) -> Result<TerminalOutcome, PipelineError> {
        wrap(super::terminal_k4ppp(g, m, &mut Vec::new()))
    }

    pub fn w4p(g: &RootedGraph, m: &SubdivisionModel) -> Result<TerminalOutcome, PipelineError> {
        wrap(super::terminal_w4p(g, m, &mut Vec::new()))
    }

    pub fn w4star(g: &RootedGraph, m: &SubdivisionModel) -> Result<TerminalOutcome, PipelineError> {
        wrap(super::terminal_w4star(g, m, &mut Vec::new()))
    }

    pub fn w5(g: &RootedGraph, m: &SubdivisionModel) -> Result<TerminalOutcome, PipelineError> {
        wrap(super::terminal_w5(g, m, &mut Vec::new()))
    }

    pub fn k33p(g: &RootedGraph, m: &SubdivisionModel) -> Result<TerminalOutcome, PipelineError> {
        wrap(super::terminal_k33p(g, m, &mut Vec::new()))
    }
}
