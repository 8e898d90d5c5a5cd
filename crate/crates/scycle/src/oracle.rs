//! Exact, brute-force-grade decision procedures for S-cycle existence, the
//! packing number mu, the covering number tau, and certificate
//! verification. These are the ground truth the constructive pipeline is
//! validated against, so they favour obviousness over speed; budgets turn
//! blow-ups into explicit resource errors, never wrong answers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::graph::{blocks, graph_hash, Cycle, EdgeId, RootedGraph, VertexId};

/// Default step budget for exhaustive cycle enumeration.
pub const DEFAULT_CYCLE_BUDGET: usize = 1_000_000;

/// A set of pairwise vertex-disjoint S-cycles, witnessing mu >= k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingCertificate {
    pub cycles: Vec<Cycle>,
}

/// A vertex set whose deletion leaves no S-cycle, witnessing tau <= |T|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingCertificate {
    pub vertices: BTreeSet<VertexId>,
}

/// Output contract of the whole toolkit: either two (or more) disjoint
/// S-cycles or a small hitting set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Packing(PackingCertificate),
    Hitting(HittingCertificate),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Packing(_) => "packing",
            Certificate::Hitting(_) => "hitting",
        }
    }
}

/// True iff some root vertex lies on a cycle. A root s is on a cycle iff
/// s carries a loop or s belongs to a block that contains a cycle.
pub fn has_s_cycle(g: &RootedGraph) -> bool {
    if g.roots().next().is_none() {
        return false;
    }
    for b in blocks(g) {
        if b.has_cycle(g) && b.vertices.iter().any(|&v| g.is_root(v)) {
            return true;
        }
    }
    false
}

/// Enumerates every simple cycle of the multigraph (as vertex/edge
/// sequences; a loop is a 1-cycle, a parallel pair a 2-cycle). The result
/// is sorted by (length, canonical key). `budget` caps DFS steps.
pub fn enumerate_all_cycles(g: &RootedGraph, budget: usize) -> Result<Vec<Cycle>, OracleError> {
    let mut steps = 0usize;
    let mut out: Vec<Cycle> = Vec::new();

    // Loops first.
    for e in g.edge_ids() {
        if g.is_loop(e) {
            let (v, _) = g.endpoints(e)?;
            out.push(Cycle::new(g, vec![v], vec![e])?);
        }
    }

    struct Dfs<'a> {
        g: &'a RootedGraph,
        start: VertexId,
        vertices: Vec<VertexId>,
        edges: Vec<EdgeId>,
        on_path: BTreeSet<VertexId>,
        steps: usize,
        budget: usize,
        out: Vec<Cycle>,
    }

    impl Dfs<'_> {
        fn explore(&mut self, u: VertexId) -> Result<(), OracleError> {
            for &(e, w) in self.g.incident(u) {
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(OracleError::BudgetExceeded {
                        budget: self.budget,
                    });
                }
                if w == u || w < self.start {
                    continue;
                }
                if w == self.start {
                    // Closing edge: dedup orientations via first < closing.
                    if !self.edges.is_empty() && e > self.edges[0] {
                        let mut es = self.edges.clone();
                        es.push(e);
                        self.out
                            .push(Cycle::new(self.g, self.vertices.clone(), es).expect("cycle"));
                    }
                    continue;
                }
                if self.on_path.contains(&w) {
                    continue;
                }
                self.vertices.push(w);
                self.edges.push(e);
                self.on_path.insert(w);
                self.explore(w)?;
                self.on_path.remove(&w);
                self.edges.pop();
                self.vertices.pop();
            }
            Ok(())
        }
    }

    for s in g.vertices() {
        let mut dfs = Dfs {
            g,
            start: s,
            vertices: vec![s],
            edges: Vec::new(),
            on_path: BTreeSet::from([s]),
            steps,
            budget,
            out: Vec::new(),
        };
        dfs.explore(s)?;
        steps = dfs.steps;
        out.extend(dfs.out);
    }

    out.sort_by_cached_key(|c| c.canonical_key());
    Ok(out)
}

/// Result of S-cycle enumeration: `complete` is false when more S-cycles
/// exist beyond the requested limit.
#[derive(Debug, Clone)]
pub struct CycleEnumeration {
    pub cycles: Vec<Cycle>,
    pub complete: bool,
}

/// Distinct S-cycles in nondecreasing length (then canonical) order,
/// truncated at `limit`.
pub fn enumerate_s_cycles(
    g: &RootedGraph,
    limit: usize,
) -> Result<CycleEnumeration, OracleError> {
    enumerate_s_cycles_with_budget(g, limit, DEFAULT_CYCLE_BUDGET)
}

pub fn enumerate_s_cycles_with_budget(
    g: &RootedGraph,
    limit: usize,
    budget: usize,
) -> Result<CycleEnumeration, OracleError> {
    assert!(limit >= 1, "limit must be at least 1");
    let all = enumerate_all_cycles(g, budget)?;
    let mut cycles: Vec<Cycle> = all.into_iter().filter(|c| c.is_s_cycle(g)).collect();
    let complete = cycles.len() <= limit;
    cycles.truncate(limit);
    Ok(CycleEnumeration { cycles, complete })
}

/// The shortest S-cycle under the deterministic order, or `None`.
/// Polynomial: for every root s, a loop at s or a shortest closing path
/// over each incident edge.
pub fn shortest_s_cycle(g: &RootedGraph) -> Result<Option<Cycle>, OracleError> {
    use crate::graph::shortest_path_avoiding;
    fn better(best: &Option<Cycle>, cand: &Cycle) -> bool {
        match best {
            None => true,
            Some(b) => cand.canonical_key() < b.canonical_key(),
        }
    }
    let mut best: Option<Cycle> = None;
    for s in g.roots() {
        for &(e, w) in g.incident(s) {
            if w == s {
                let cand = Cycle::new(g, vec![s], vec![e])?;
                if better(&best, &cand) {
                    best = Some(cand);
                }
                continue;
            }
            if matches!(&best, Some(b) if b.len() == 1) {
                continue;
            }
            let forbidden_edges = BTreeSet::from([e]);
            if let Some(p) =
                shortest_path_avoiding(g, w, s, &BTreeSet::new(), &forbidden_edges)?
            {
                let mut vs = vec![s];
                vs.extend_from_slice(p.vertices());
                vs.pop(); // path ends at s
                let mut es = vec![e];
                es.extend_from_slice(p.edges());
                let cand = Cycle::new(g, vs, es)?;
                if better(&best, &cand) {
                    best = Some(cand);
                }
            }
        }
    }
    Ok(best)
}

/// min(mu(G,S), cap) together with a packing certificate achieving it.
/// cap must be in 1..=3; the search is exhaustive over enumerated
/// S-cycles, so an incomplete enumeration is a resource error rather than
/// a wrong answer.
pub fn mu_exact(
    g: &RootedGraph,
    cap: usize,
) -> Result<(usize, PackingCertificate), OracleError> {
    mu_exact_with_budget(g, cap, DEFAULT_CYCLE_BUDGET)
}

pub fn mu_exact_with_budget(
    g: &RootedGraph,
    cap: usize,
    budget: usize,
) -> Result<(usize, PackingCertificate), OracleError> {
    if !(1..=3).contains(&cap) {
        return Err(OracleError::BadCap(cap));
    }
    let cycles = all_s_cycles_complete(g, budget)?;
    let best = packing_search(g, &cycles, cap, budget)?;
    let k = best.len();
    Ok((k, PackingCertificate { cycles: best }))
}

fn all_s_cycles_complete(g: &RootedGraph, budget: usize) -> Result<Vec<Cycle>, OracleError> {
    let all = enumerate_all_cycles(g, budget)?;
    Ok(all.into_iter().filter(|c| c.is_s_cycle(g)).collect())
}

fn packing_search(
    g: &RootedGraph,
    cycles: &[Cycle],
    cap: usize,
    budget: usize,
) -> Result<Vec<Cycle>, OracleError> {
    if cap == 0 || cycles.is_empty() {
        return Ok(Vec::new());
    }
    let mut best = vec![cycles[0].clone()];
    if cap == 1 {
        return Ok(best);
    }
    for c in cycles {
        let rest_graph = g.delete_vertices(&c.vertex_set())?;
        let rest_cycles = all_s_cycles_complete(&rest_graph, budget)?;
        let sub = packing_search(&rest_graph, &rest_cycles, cap - 1, budget)?;
        if sub.len() + 1 > best.len() {
            best = Vec::with_capacity(sub.len() + 1);
            best.push(c.clone());
            best.extend(sub);
            if best.len() == cap {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Result of the exact covering search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TauResult {
    Exact(usize, HittingCertificate),
    ExceedsBound,
}

/// Smallest k <= bound such that some k-set T has no S-cycle in G - T,
/// searched in increasing k over lexicographic subsets; or `ExceedsBound`.
/// Only vertices of blocks that contain an S-cycle are candidates.
pub fn tau_exact(g: &RootedGraph, bound: usize) -> Result<TauResult, OracleError> {
    if bound > 6 {
        return Err(OracleError::BadBound(bound));
    }
    if !has_s_cycle(g) {
        return Ok(TauResult::Exact(
            0,
            HittingCertificate {
                vertices: BTreeSet::new(),
            },
        ));
    }
    // Candidate vertices: any minimal hitting set lives on blocks that
    // contain both a cycle and a root.
    let mut candidates: BTreeSet<VertexId> = BTreeSet::new();
    for b in blocks(g) {
        if b.has_cycle(g) && b.vertices.iter().any(|&v| g.is_root(v)) {
            candidates.extend(b.vertices.iter().copied());
        }
    }
    let cand: Vec<VertexId> = candidates.into_iter().collect();
    for k in 1..=bound {
        if k > cand.len() {
            break;
        }
        let mut found: Option<BTreeSet<VertexId>> = None;
        let mut choice = vec![0usize; k];
        // Lexicographic k-subsets of cand.
        fn rec(
            g: &RootedGraph,
            cand: &[VertexId],
            choice: &mut Vec<usize>,
            depth: usize,
            start: usize,
            found: &mut Option<BTreeSet<VertexId>>,
        ) -> Result<(), OracleError> {
            if found.is_some() {
                return Ok(());
            }
            if depth == choice.len() {
                let t: BTreeSet<VertexId> =
                    choice.iter().map(|&i| cand[i]).collect();
                let h = g.delete_vertices(&t)?;
                if !has_s_cycle(&h) {
                    *found = Some(t);
                }
                return Ok(());
            }
            for i in start..cand.len() {
                choice[depth] = i;
                rec(g, cand, choice, depth + 1, i + 1, found)?;
                if found.is_some() {
                    return Ok(());
                }
            }
            Ok(())
        }
        rec(g, &cand, &mut choice, 0, 0, &mut found)?;
        if let Some(t) = found {
            return Ok(TauResult::Exact(k, HittingCertificate { vertices: t }));
        }
    }
    Ok(TauResult::ExceedsBound)
}

// ---------------------------------------------------------------------------
// Certificate verification and serialization.
// ---------------------------------------------------------------------------

/// Verifies a certificate against its graph. `Ok(())` means valid; the
/// error string names the first violated condition.
pub fn verify_certificate(g: &RootedGraph, cert: &Certificate) -> Result<(), String> {
    match cert {
        Certificate::Packing(p) => verify_packing(g, p),
        Certificate::Hitting(h) => verify_hitting(g, h),
    }
}

fn verify_packing(g: &RootedGraph, p: &PackingCertificate) -> Result<(), String> {
    if p.cycles.is_empty() {
        return Err("packing certificate lists no cycles".into());
    }
    for (i, c) in p.cycles.iter().enumerate() {
        Cycle::new(g, c.vertices().to_vec(), c.edges().to_vec())
            .map_err(|e| format!("cycle {i} is not a cycle of the graph: {e}"))?;
        if !c.is_s_cycle(g) {
            return Err(format!("cycle {i} contains no root"));
        }
    }
    for i in 0..p.cycles.len() {
        for j in (i + 1)..p.cycles.len() {
            if !p.cycles[i].disjoint_from(&p.cycles[j]) {
                return Err(format!("cycles {i} and {j} share a vertex"));
            }
        }
    }
    Ok(())
}

fn verify_hitting(g: &RootedGraph, h: &HittingCertificate) -> Result<(), String> {
    for &v in &h.vertices {
        if !g.contains_vertex(v) {
            return Err(format!("hitting set names unknown vertex {v}"));
        }
    }
    let rest = g
        .delete_vertices(&h.vertices)
        .map_err(|e| format!("deletion failed: {e}"))?;
    if has_s_cycle(&rest) {
        return Err("S-cycle survives".into());
    }
    Ok(())
}

/// JSON shape of a certificate file. Cycles are stored as vertex-id lists;
/// `graph_hash` binds the certificate to the canonical text of its
/// instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<u32>>,
    pub graph_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
}

pub fn certificate_to_json(
    g: &RootedGraph,
    cert: &Certificate,
    trace: Option<Vec<String>>,
) -> CertificateJson {
    match cert {
        Certificate::Packing(p) => CertificateJson {
            kind: "packing".into(),
            cycles: Some(
                p.cycles
                    .iter()
                    .map(|c| c.vertices().iter().map(|v| v.0).collect())
                    .collect(),
            ),
            vertices: None,
            graph_hash: graph_hash(g),
            trace,
        },
        Certificate::Hitting(h) => CertificateJson {
            kind: "hitting".into(),
            cycles: None,
            vertices: Some(h.vertices.iter().map(|v| v.0).collect()),
            graph_hash: graph_hash(g),
            trace,
        },
    }
}

/// Reconstructs a cycle from a vertex-id list: consecutive vertices must
/// be joined by edges (two distinct parallel edges for a 2-cycle, a loop
/// for a 1-cycle). The smallest usable edge ids are chosen.
fn rehydrate_cycle(g: &RootedGraph, ids: &[u32]) -> Result<Cycle, String> {
    let vs: Vec<VertexId> = ids.iter().map(|&i| VertexId(i)).collect();
    for &v in &vs {
        if !g.contains_vertex(v) {
            return Err(format!("cycle names unknown vertex {v}"));
        }
    }
    let n = vs.len();
    if n == 0 {
        return Err("empty cycle".into());
    }
    let mut edges = Vec::with_capacity(n);
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    for i in 0..n {
        let (u, v) = (vs[i], vs[(i + 1) % n]);
        let e = g
            .incident(u)
            .iter()
            .find(|&&(e, w)| w == v && !used.contains(&e))
            .map(|&(e, _)| e)
            .ok_or_else(|| format!("no unused edge joins {u} and {v}"))?;
        used.insert(e);
        edges.push(e);
    }
    Cycle::new(g, vs, edges).map_err(|e| format!("not a cycle: {e}"))
}

/// Parses and verifies a certificate file against `g`, checking the graph
/// hash first. Malformed certificates are diagnostics, never panics.
pub fn verify_certificate_json(g: &RootedGraph, json: &CertificateJson) -> Result<(), String> {
    if json.graph_hash != graph_hash(g) {
        return Err("graph hash mismatch: certificate was issued for a different instance".into());
    }
    match json.kind.as_str() {
        "packing" => {
            let lists = json
                .cycles
                .as_ref()
                .ok_or_else(|| "packing certificate lacks cycles".to_string())?;
            let mut cycles = Vec::with_capacity(lists.len());
            for l in lists {
                cycles.push(rehydrate_cycle(g, l)?);
            }
            verify_packing(g, &PackingCertificate { cycles })
        }
        "hitting" => {
            let ids = json
                .vertices
                .as_ref()
                .ok_or_else(|| "hitting certificate lacks vertices".to_string())?;
            let vertices: BTreeSet<VertexId> = ids.iter().map(|&i| VertexId(i)).collect();
            verify_hitting(g, &HittingCertificate { vertices })
        }
        other => Err(format!("unknown certificate type {other}")),
    }
}
