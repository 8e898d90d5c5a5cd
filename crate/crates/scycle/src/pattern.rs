//! The fixed catalog of small pattern graphs that subdivision models are
//! built over, with the labelings the terminal recipes rely on, plus the
//! "nice graph" check.

use crate::error::OracleError;
use crate::graph::{RootedGraph, VertexId};
use crate::oracle::enumerate_all_cycles;

/// Catalog of abstract patterns. `Loop1` (one vertex, one loop) stands for
/// a bare cycle and `Loop2` for two cycles glued at a vertex; they are the
/// seed shapes of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternId {
    Loop1,
    Loop2,
    Theta3,
    K3Plus,
    K3Pp,
    K3Ppp,
    K4,
    K4Plus,
    K4Pp,
    K4Ppp,
    W4,
    W4Plus,
    W4Star,
    W5,
    K33,
    K33Plus,
    K5,
}

pub const ALL_PATTERNS: [PatternId; 17] = [
    PatternId::Loop1,
    PatternId::Loop2,
    PatternId::Theta3,
    PatternId::K3Plus,
    PatternId::K3Pp,
    PatternId::K3Ppp,
    PatternId::K4,
    PatternId::K4Plus,
    PatternId::K4Pp,
    PatternId::K4Ppp,
    PatternId::W4,
    PatternId::W4Plus,
    PatternId::W4Star,
    PatternId::W5,
    PatternId::K33,
    PatternId::K33Plus,
    PatternId::K5,
];

impl PatternId {
    pub fn name(self) -> &'static str {
        match self {
            PatternId::Loop1 => "loop1",
            PatternId::Loop2 => "loop2",
            PatternId::Theta3 => "theta3",
            PatternId::K3Plus => "K3plus",
            PatternId::K3Pp => "K3pp",
            PatternId::K3Ppp => "K3ppp",
            PatternId::K4 => "K4",
            PatternId::K4Plus => "K4plus",
            PatternId::K4Pp => "K4pp",
            PatternId::K4Ppp => "K4ppp",
            PatternId::W4 => "W4",
            PatternId::W4Plus => "W4plus",
            PatternId::W4Star => "W4star",
            PatternId::W5 => "W5",
            PatternId::K33 => "K33",
            PatternId::K33Plus => "K33plus",
            PatternId::K5 => "K5",
        }
    }

    pub fn from_name(name: &str) -> Option<PatternId> {
        ALL_PATTERNS.iter().copied().find(|p| p.name() == name)
    }

    pub fn vertex_count(self) -> usize {
        match self {
            PatternId::Loop1 | PatternId::Loop2 => 1,
            PatternId::Theta3 => 2,
            PatternId::K3Plus | PatternId::K3Pp | PatternId::K3Ppp => 3,
            PatternId::K4 | PatternId::K4Plus | PatternId::K4Pp | PatternId::K4Ppp => 4,
            PatternId::W4 | PatternId::W4Plus | PatternId::W4Star | PatternId::K5 => 5,
            PatternId::W5 | PatternId::K33 | PatternId::K33Plus => 6,
        }
    }

    /// Edge list with the labeling the terminal recipes use. Orientation of
    /// a certifying path follows the tuple order.
    ///
    /// Role conventions (indices into the returned slice):
    /// - `K3Plus`: w=0, v1=1, v2=2; edges \[w-v1, w-v1, w-v2, w-v2, v1-v2\].
    /// - `K4Pp`:   v1..v4 = 0..3; \[Q1, Q2, Q3, R11, R12, R21, R22, R3\].
    /// - `K4Ppp`:  v1..v4 = 0..3; \[P1, P2, P3, Q1, Q2, Q3, R1, R2\].
    /// - `W4`:     rim v1..v4 = 0..3, hub w = 4; \[Q1..Q4, R1..R4\].
    /// - `W4Plus`: rim v1..v4 = 0..3, hub w = 4; \[P1, P2, Q1..Q4, R2, R3, R4\].
    /// - `W4Star`: triangle v1,v2,v3 = 0..2, apexes w1=3, w2=4;
    ///   \[P1,P2,P3, Q1,Q2,Q3, R1,R2,R3\].
    /// - `W5`:     rim v1..v5 = 0..4, hub w = 5; \[Q1..Q5, R1..R5\].
    /// - `K33`:    parts {0,1,2} and {3,4,5}; edges (i,3+j) in row order.
    /// - `K33Plus`: K33 plus the extra path Q = (0,1) appended last.
    pub fn edges(self) -> &'static [(usize, usize)] {
        match self {
            PatternId::Loop1 => &[(0, 0)],
            PatternId::Loop2 => &[(0, 0), (0, 0)],
            PatternId::Theta3 => &[(0, 1), (0, 1), (0, 1)],
            PatternId::K3Plus => &[(0, 1), (0, 1), (0, 2), (0, 2), (1, 2)],
            PatternId::K3Pp => &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)],
            PatternId::K3Ppp => &[
                (0, 1),
                (0, 1),
                (0, 1),
                (1, 2),
                (1, 2),
                (2, 0),
                (2, 0),
            ],
            PatternId::K4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            PatternId::K4Plus => &[(0, 1), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            PatternId::K4Pp => &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 0),
                (3, 0),
                (3, 1),
                (3, 1),
                (3, 2),
            ],
            PatternId::K4Ppp => &[
                (0, 1),
                (0, 1),
                (0, 1),
                (3, 0),
                (3, 1),
                (3, 2),
                (2, 0),
                (2, 1),
            ],
            PatternId::W4 => &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 0),
                (4, 1),
                (4, 2),
                (4, 3),
            ],
            PatternId::W4Plus => &[
                (0, 4),
                (0, 4),
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 1),
                (4, 2),
                (4, 3),
            ],
            PatternId::W4Star => &[
                (3, 0),
                (3, 1),
                (3, 2),
                (4, 0),
                (4, 1),
                (4, 2),
                (0, 1),
                (1, 2),
                (2, 0),
            ],
            PatternId::W5 => &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (5, 0),
                (5, 1),
                (5, 2),
                (5, 3),
                (5, 4),
            ],
            PatternId::K33 => &[
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
            PatternId::K33Plus => &[
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
                (0, 1),
            ],
            PatternId::K5 => &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
            ],
        }
    }

    pub fn edge_count(self) -> usize {
        self.edges().len()
    }

    pub fn is_loop_edge(self, idx: usize) -> bool {
        let (u, v) = self.edges()[idx];
        u == v
    }

    /// Edge indices between `u` and `v`, in index order.
    pub fn edges_between(self, u: usize, v: usize) -> Vec<usize> {
        self.edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
            .map(|(i, _)| i)
            .collect()
    }

    /// The pattern as a plain rootless multigraph, vertex i -> id i,
    /// edge j -> id j.
    pub fn to_graph(self) -> RootedGraph {
        let mut g = RootedGraph::new();
        let vs: Vec<VertexId> = (0..self.vertex_count()).map(|_| g.add_vertex()).collect();
        for &(u, v) in self.edges() {
            g.add_edge(vs[u], vs[v]).unwrap();
        }
        g
    }
}

/// True iff the multigraph has two vertex-disjoint cycles (roots ignored).
pub fn has_two_disjoint_cycles(g: &RootedGraph) -> Result<bool, OracleError> {
    let cycles = enumerate_all_cycles(g, crate::oracle::DEFAULT_CYCLE_BUDGET)?;
    for i in 0..cycles.len() {
        for j in (i + 1)..cycles.len() {
            if cycles[i].disjoint_from(&cycles[j]) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// A graph is nice when it has no two vertex-disjoint cycles, yet for
/// every pair of distinct edges, subdividing both once and joining the two
/// new vertices creates two vertex-disjoint cycles.
pub fn is_nice(h: PatternId) -> Result<bool, OracleError> {
    assert!(h.edge_count() <= 12, "nice check is for small patterns");
    let g = h.to_graph();
    if has_two_disjoint_cycles(&g)? {
        return Ok(false);
    }
    let edges = h.edges();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let mut m = RootedGraph::new();
            let vs: Vec<VertexId> = (0..h.vertex_count()).map(|_| m.add_vertex()).collect();
            let mut sub = Vec::new();
            for (k, &(u, v)) in edges.iter().enumerate() {
                if k == i || k == j {
                    let mid = m.add_vertex();
                    m.add_edge(vs[u], mid).unwrap();
                    m.add_edge(mid, vs[v]).unwrap();
                    sub.push(mid);
                } else {
                    m.add_edge(vs[u], vs[v]).unwrap();
                }
            }
            m.add_edge(sub[0], sub[1]).unwrap();
            if !has_two_disjoint_cycles(&m)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_counts_match_the_table() {
        let expect = [
            (PatternId::K3Plus, 3, 5),
            (PatternId::K3Pp, 3, 6),
            (PatternId::K3Ppp, 3, 7),
            (PatternId::K4Plus, 4, 7),
            (PatternId::K4Pp, 4, 8),
            (PatternId::K4Ppp, 4, 8),
            (PatternId::W4Plus, 5, 9),
            (PatternId::W4Star, 5, 9),
            (PatternId::K33Plus, 6, 10),
            (PatternId::Theta3, 2, 3),
            (PatternId::W4, 5, 8),
            (PatternId::W5, 6, 10),
            (PatternId::K33, 6, 9),
            (PatternId::K4, 4, 6),
            (PatternId::K5, 5, 10),
            (PatternId::Loop2, 1, 2),
            (PatternId::Loop1, 1, 1),
        ];
        for (p, nv, ne) in expect {
            assert_eq!(p.vertex_count(), nv, "{} vertex count", p.name());
            assert_eq!(p.edge_count(), ne, "{} edge count", p.name());
        }
    }

    #[test]
    fn degrees_are_as_drawn() {
        // K3plus: one degree-4 vertex, two degree-3 vertices.
        let g = PatternId::K3Plus.to_graph();
        let mut degs: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        degs.sort();
        assert_eq!(degs, vec![3, 3, 4]);
        // W4star: triangle vertices have degree 4, apexes degree 3.
        let g = PatternId::W4Star.to_graph();
        let mut degs: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        degs.sort();
        assert_eq!(degs, vec![3, 3, 4, 4, 4]);
    }

    #[test]
    fn nice_table() {
        assert!(is_nice(PatternId::K3Pp).unwrap());
        assert!(is_nice(PatternId::K3Ppp).unwrap());
        assert!(is_nice(PatternId::K4Pp).unwrap());
        assert!(!is_nice(PatternId::K4).unwrap());
    }

    #[test]
    fn nice_patterns_have_a_cycle_avoiding_each_edge() {
        for p in [PatternId::K3Pp, PatternId::K3Ppp, PatternId::K4Pp] {
            let g = p.to_graph();
            let cycles = enumerate_all_cycles(&g, 100_000).unwrap();
            for e in g.edge_ids() {
                assert!(
                    cycles.iter().any(|c| !c.edges().contains(&e)),
                    "{}: edge {e} lies on every cycle",
                    p.name()
                );
            }
        }
    }

    #[test]
    fn no_catalog_pattern_has_two_disjoint_cycles() {
        for p in ALL_PATTERNS {
            assert!(
                !has_two_disjoint_cycles(&p.to_graph()).unwrap(),
                "{} should not contain two disjoint cycles",
                p.name()
            );
        }
    }
}
