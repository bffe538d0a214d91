//! Claw detection and the local-completion closure with a replayable step trace.

use crate::bitset::VertexSet;
use crate::graph::{Graph, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// An induced `K_{1,3}`: a center adjacent to three pairwise non-adjacent leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claw {
    pub center: Vertex,
    pub leaves: [Vertex; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("input is not claw-free: center {} with leaves {:?}", .0.center, .0.leaves)]
    NotClawFree(Claw),
    #[error("trace step {step} is invalid: {reason}")]
    BadTrace { step: usize, reason: &'static str },
}

fn claw_in(adj: &[VertexSet], n: usize) -> Option<Claw> {
    for c in 0..n {
        let ns: Vec<Vertex> = adj[c].iter().collect();
        for (i, &a) in ns.iter().enumerate() {
            for (j, &b) in ns.iter().enumerate().skip(i + 1) {
                if adj[a].contains(b) {
                    continue;
                }
                for &d in &ns[j + 1..] {
                    if !adj[a].contains(d) && !adj[b].contains(d) {
                        return Some(Claw {
                            center: c,
                            leaves: [a, b, d],
                        });
                    }
                }
            }
        }
    }
    None
}

/// The first induced claw by (center, leaves) lexicographic order.
pub fn find_claw(g: &Graph) -> Option<Claw> {
    let adj: Vec<VertexSet> = (0..g.n()).map(|v| g.neighbor_set(v).clone()).collect();
    claw_in(&adj, g.n())
}

fn neighbourhood_connected(adj: &[VertexSet], nb: &VertexSet) -> bool {
    let Some(s) = nb.first() else {
        return false;
    };
    let mut seen = VertexSet::new(adj.len());
    seen.insert(s);
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        let mut next = adj[u].intersection(nb);
        next.difference_with(&seen);
        for w in next.iter() {
            seen.insert(w);
            stack.push(w);
        }
    }
    seen.len() == nb.len()
}

fn neighbourhood_is_clique(adj: &[VertexSet], nb: &VertexSet) -> bool {
    let k = nb.len();
    nb.iter().all(|u| adj[u].intersection_len(nb) + 1 == k)
}

fn eligible(adj: &[VertexSet], v: Vertex) -> bool {
    let nb = &adj[v];
    neighbourhood_connected(adj, nb) && !neighbourhood_is_clique(adj, nb)
}

/// Whether `N(v)` is non-empty and induces a connected subgraph.
pub fn is_locally_connected(g: &Graph, v: Vertex) -> bool {
    g.is_connected_within(g.neighbor_set(v))
}

/// Locally connected with a neighbourhood that is not yet a clique.
pub fn is_eligible(g: &Graph, v: Vertex) -> bool {
    is_locally_connected(g, v) && !g.is_clique(g.neighbors(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureStep {
    /// The completed vertex.
    pub vertex: Vertex,
    /// Added pairs `(u, v)` with `u < v`, sorted.
    pub added: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureTrace {
    pub input: Graph,
    pub output: Graph,
    pub steps: Vec<ClosureStep>,
}

impl ClosureTrace {
    pub fn added_edge_count(&self) -> usize {
        self.steps.iter().map(|s| s.added.len()).sum()
    }

    /// Graphs after each step, starting with the input.
    pub fn snapshots(&self) -> Vec<Graph> {
        let mut out = vec![self.input.clone()];
        for s in &self.steps {
            let next = out.last().expect("non-empty").with_edges(s.added.iter().copied());
            out.push(next);
        }
        out
    }

    /// Replays the trace, checking that every step completes an eligible
    /// vertex, that replay reproduces the output, and that the output is a
    /// fixpoint.
    pub fn verify(&self) -> Result<(), ClosureError> {
        let mut cur = self.input.clone();
        for (i, s) in self.steps.iter().enumerate() {
            if s.vertex >= cur.n() || !is_eligible(&cur, s.vertex) {
                return Err(ClosureError::BadTrace {
                    step: i,
                    reason: "completed vertex not eligible",
                });
            }
            let ns = cur.neighbors(s.vertex);
            let mut missing = Vec::new();
            for (j, &a) in ns.iter().enumerate() {
                for &b in &ns[j + 1..] {
                    if !cur.has_edge(a, b) {
                        missing.push((a, b));
                    }
                }
            }
            if missing != s.added {
                return Err(ClosureError::BadTrace {
                    step: i,
                    reason: "added edges differ from the neighbourhood completion",
                });
            }
            cur = cur.with_edges(missing);
        }
        if cur != self.output {
            return Err(ClosureError::BadTrace {
                step: self.steps.len(),
                reason: "replay does not reproduce the output",
            });
        }
        if (0..cur.n()).any(|v| is_eligible(&cur, v)) {
            return Err(ClosureError::BadTrace {
                step: self.steps.len(),
                reason: "output is not a fixpoint",
            });
        }
        Ok(())
    }
}

/// The closure, completing the smallest-id eligible vertex at each step.
pub fn closure(g: &Graph) -> Result<ClosureTrace, ClosureError> {
    let identity: Vec<usize> = (0..g.n()).collect();
    closure_with_priority(g, &identity)
}

/// The closure, completing at each step the eligible vertex with the smallest
/// `priority[v]` (ties by id).
pub fn closure_with_priority(g: &Graph, priority: &[usize]) -> Result<ClosureTrace, ClosureError> {
    assert_eq!(priority.len(), g.n());
    if let Some(c) = find_claw(g) {
        return Err(ClosureError::NotClawFree(c));
    }
    let n = g.n();
    let mut adj: Vec<VertexSet> = (0..n).map(|v| g.neighbor_set(v).clone()).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n)
        .filter(|&v| eligible(&adj, v))
        .map(|v| (priority[v], v))
        .collect();
    let mut steps = Vec::new();
    while let Some((_, v)) = queue.pop_first() {
        let ns: Vec<Vertex> = adj[v].iter().collect();
        let mut added = Vec::new();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !adj[a].contains(b) {
                    adj[a].insert(b);
                    adj[b].insert(a);
                    added.push((a, b));
                }
            }
        }
        // Only neighbourhoods around N(v) can have changed.
        let mut dirty = adj[v].clone();
        for &a in &ns {
            dirty.union_with(&adj[a]);
        }
        for u in dirty.iter() {
            queue.remove(&(priority[u], u));
            if eligible(&adj, u) {
                queue.insert((priority[u], u));
            }
        }
        steps.push(ClosureStep { vertex: v, added });
    }
    let output = Graph::simple(
        n,
        (0..n)
            .flat_map(|u| adj[u].iter().filter(move |&w| w > u).map(move |w| (u, w)))
            .collect::<Vec<_>>(),
    );
    Ok(ClosureTrace {
        input: g.clone(),
        output,
        steps,
    })
}
