//! Line graphs and triangle-free root recovery.
//!
//! For a triangle-free root, the neighbourhood of every line-graph vertex
//! `uv` is the disjoint union of the cliques "other edges at u" and "other
//! edges at v" with nothing between them. When that local shape holds at every
//! vertex, the cliques `{a} ∪ component` are forced, they form a Krausz
//! partition, and the quotient root is triangle-free. Inputs failing the local
//! test are classified with a general (budgeted) Krausz search.

use crate::graph::{EdgeId, Graph, Vertex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_KRAUSZ_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("the input graph has no edges")]
    Edgeless,
    #[error("not a line graph: no Krausz clique partition exists")]
    NotALineGraph,
    #[error("a line graph, but every root contains a triangle")]
    NoTriangleFreeRoot,
    #[error("clique partition search exceeded {0} nodes")]
    BudgetExceeded(u64),
}

/// `line` is the line graph of `root`; root edge `e` corresponds to line
/// vertex `edge_to_vertex[e]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCorrespondence {
    pub root: Graph,
    pub line: Graph,
    pub edge_to_vertex: Vec<Vertex>,
}

impl RootCorrespondence {
    pub fn vertex_to_edge(&self) -> Vec<EdgeId> {
        let mut inv = vec![usize::MAX; self.edge_to_vertex.len()];
        for (e, &v) in self.edge_to_vertex.iter().enumerate() {
            inv[v] = e;
        }
        inv
    }

    /// Checks the bijection and that adjacency in `line` is exactly
    /// "shares an endpoint" in `root`.
    pub fn verify(&self) -> bool {
        let m = self.root.m();
        if self.line.n() != m || self.edge_to_vertex.len() != m {
            return false;
        }
        let mut seen = vec![false; m];
        for &v in &self.edge_to_vertex {
            if v >= m || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        let mut adjacent_pairs = 0;
        for e in 0..m {
            let (a, b) = self.root.edge(e);
            for f in e + 1..m {
                let (c, d) = self.root.edge(f);
                let share = a == c || a == d || b == c || b == d;
                if share != self.line.has_edge(self.edge_to_vertex[e], self.edge_to_vertex[f]) {
                    return false;
                }
                adjacent_pairs += share as usize;
            }
        }
        adjacent_pairs == self.line.m()
    }
}

/// `L(h)` with line vertex `i` standing for edge `i` of `h`.
pub fn line_graph(h: &Graph) -> Result<RootCorrespondence, RootError> {
    if h.m() == 0 {
        return Err(RootError::Edgeless);
    }
    let mut edges = Vec::new();
    for v in 0..h.n() {
        let inc = h.incident_edges(v);
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                edges.push((e.min(f), e.max(f)));
            }
        }
    }
    let line = Graph::new(h.m(), edges).expect("incident pairs are distinct in a simple graph");
    Ok(RootCorrespondence {
        root: h.clone(),
        line,
        edge_to_vertex: (0..h.m()).collect(),
    })
}

/// Splits `N(a)` into its components if they are at most two cliques with no
/// edges between them.
fn local_cliques(g: &Graph, a: Vertex) -> Option<Vec<Vec<Vertex>>> {
    let mut rest = g.neighbor_set(a).clone();
    let mut parts = Vec::new();
    while let Some(b) = rest.first() {
        let mut part = g.neighbor_set(b).intersection(&rest);
        part.insert(b);
        rest.difference_with(&part);
        let part: Vec<Vertex> = part.iter().collect();
        if !g.is_clique(&part) {
            return None;
        }
        parts.push(part);
    }
    // Each member sees exactly its own part inside N(a).
    (parts.len() <= 2 && parts.iter().all(|p| {
        p.iter().all(|&u| g.neighbor_set(u).intersection_len(g.neighbor_set(a)) + 1 == p.len())
    }))
    .then_some(parts)
}

/// Recovers a triangle-free `H` with `L(H)` isomorphic to `g`.
pub fn root_graph(g: &Graph) -> Result<RootCorrespondence, RootError> {
    root_graph_with_budget(g, DEFAULT_KRAUSZ_BUDGET)
}

pub fn root_graph_with_budget(g: &Graph, budget: u64) -> Result<RootCorrespondence, RootError> {
    if g.n() == 0 {
        return Err(RootError::Edgeless);
    }
    let mut per_vertex = Vec::with_capacity(g.n());
    for a in 0..g.n() {
        match local_cliques(g, a) {
            Some(parts) => per_vertex.push(parts),
            None => {
                return Err(if krausz_partition_exists(g, budget)? {
                    RootError::NoTriangleFreeRoot
                } else {
                    RootError::NotALineGraph
                })
            }
        }
    }
    // Root vertices: distinct cliques (keyed by sorted member list) and fresh
    // singletons, numbered in order of first appearance.
    let mut ids: std::collections::HashMap<Vec<Vertex>, usize> = Default::default();
    let mut next = 0usize;
    let mut ends = Vec::with_capacity(g.n());
    for (a, parts) in per_vertex.iter().enumerate() {
        let mut mine = Vec::with_capacity(2);
        for p in parts {
            let mut clique = p.clone();
            clique.push(a);
            clique.sort_unstable();
            let id = *ids.entry(clique).or_insert_with(|| {
                next += 1;
                next - 1
            });
            mine.push(id);
        }
        while mine.len() < 2 {
            mine.push(next);
            next += 1;
        }
        ends.push((mine[0].min(mine[1]), mine[0].max(mine[1])));
    }
    let root = Graph::new(next, ends.iter().copied()).expect("forced cliques give a simple root");
    let mut edge_to_vertex = vec![0; g.n()];
    for (a, &(p, q)) in ends.iter().enumerate() {
        edge_to_vertex[root.edge_id(p, q).expect("edge present")] = a;
    }
    let corr = RootCorrespondence {
        root,
        line: g.clone(),
        edge_to_vertex,
    };
    debug_assert!(corr.root.is_triangle_free());
    debug_assert!(corr.verify());
    Ok(corr)
}

/// Whether `E(g)` splits into cliques with every vertex in at most two.
pub fn krausz_partition_exists(g: &Graph, budget: u64) -> Result<bool, RootError> {
    struct Search<'a> {
        g: &'a Graph,
        covered: Vec<bool>,
        count: Vec<u8>,
        nodes: u64,
        budget: u64,
    }
    impl Search<'_> {
        fn go(&mut self) -> Result<bool, RootError> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(RootError::BudgetExceeded(self.budget));
            }
            let Some(e) = self.covered.iter().position(|&c| !c) else {
                return Ok(true);
            };
            let (a, b) = self.g.edge(e);
            if self.count[a] >= 2 || self.count[b] >= 2 {
                return Ok(false);
            }
            let common: Vec<Vertex> = self
                .g
                .neighbor_set(a)
                .intersection(self.g.neighbor_set(b))
                .iter()
                .filter(|&c| self.count[c] < 2 && !self.is_covered(a, c) && !self.is_covered(b, c))
                .collect();
            let mut clique = vec![a, b];
            self.extend(&common, 0, &mut clique)
        }

        fn is_covered(&self, u: Vertex, v: Vertex) -> bool {
            self.covered[self.g.edge_id(u, v).expect("adjacent")]
        }

        // Enumerates cliques {a, b} ∪ S with S ⊆ common, largest-first.
        fn extend(&mut self, common: &[Vertex], from: usize, clique: &mut Vec<Vertex>) -> Result<bool, RootError> {
            for i in from..common.len() {
                let c = common[i];
                if clique[2..].iter().all(|&d| self.g.has_edge(c, d) && !self.is_covered(c, d)) {
                    clique.push(c);
                    if self.extend(common, i + 1, clique)? {
                        return Ok(true);
                    }
                    clique.pop();
                }
            }
            self.try_clique(clique)
        }

        fn try_clique(&mut self, clique: &[Vertex]) -> Result<bool, RootError> {
            let mut ids = Vec::new();
            for (i, &u) in clique.iter().enumerate() {
                for &v in &clique[i + 1..] {
                    ids.push(self.g.edge_id(u, v).expect("clique"));
                }
            }
            for &e in &ids {
                self.covered[e] = true;
            }
            for &u in clique {
                self.count[u] += 1;
            }
            let saturated_ok = clique.iter().all(|&u| {
                self.count[u] < 2 || self.g.incident_edges(u).iter().all(|&e| self.covered[e])
            });
            let found = saturated_ok && self.go()?;
            for &u in clique {
                self.count[u] -= 1;
            }
            for &e in &ids {
                self.covered[e] = false;
            }
            Ok(found)
        }
    }
    let mut s = Search {
        g,
        covered: vec![false; g.m()],
        count: vec![0; g.n()],
        nodes: 0,
        budget,
    };
    s.go()
}
