//! Immutable simple undirected graphs and the shared structural types
//! (cycles, closed trails, 2-factors) used throughout the crate.

mod cycles;
mod io;
mod iso;
mod structures;

pub use cycles::{enumerate_cycles, girth, hamiltonian_cycle, CycleIter};
pub use io::{parse_graph, parse_graph6, serialize_graph, to_graph6, GraphJson, ParseError};
pub use iso::{canonical_form, find_isomorphism, CanonicalForm};
pub use structures::{ClosedTrail, Cycle, EdgeSubgraph, StructureError, TwoFactor};

use crate::bitset::VertexSet;
use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edge ids are dense and follow the lexicographic order of `(u, v)` with
/// `u < v`. Neighbour lists are sorted. Every vertex also carries a bitset
/// of its neighbourhood for the search kernels.
#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(into = "GraphJson", try_from = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    adj_edge: Vec<Vec<EdgeId>>,
    bits: Vec<VertexSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    /// Each pair may be given in either orientation.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Builds a graph from pairs that may repeat. Panics on self-loops or
    /// out-of-range vertices, which are programming errors at call sites.
    pub fn simple(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut list: Vec<_> = edges
            .into_iter()
            .map(|(a, b)| {
                assert!(a < n && b < n, "vertex out of range");
                assert_ne!(a, b, "self-loop");
                (a.min(b), a.max(b))
            })
            .collect();
        list.sort_unstable();
        list.dedup();
        Self::from_sorted(n, list)
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        Self::simple(
            n,
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
        )
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Self::simple(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Self::simple(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::simple(
            a + b,
            (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))),
        )
    }

    pub fn star(leaves: usize) -> Self {
        Self::complete_bipartite(1, leaves)
    }

    fn from_sorted(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut adj_edge = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push(v);
            adj_edge[u].push(id);
            adj[v].push(u);
            adj_edge[v].push(id);
        }
        // Neighbours of u arrive sorted for v > u, and for v < u in order of
        // increasing v as well, but the two streams interleave.
        for u in 0..n {
            let mut pairs: Vec<_> = adj[u].iter().copied().zip(adj_edge[u].iter().copied()).collect();
            pairs.sort_unstable();
            adj[u] = pairs.iter().map(|p| p.0).collect();
            adj_edge[u] = pairs.iter().map(|p| p.1).collect();
        }
        let bits = adj
            .iter()
            .map(|ns| VertexSet::from_iter_n(n, ns.iter().copied()))
            .collect();
        Graph {
            n,
            edges,
            adj,
            adj_edge,
            bits,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    /// Edge ids incident to `v`, parallel to [`Graph::neighbors`].
    #[inline]
    pub fn incident_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.adj_edge[v]
    }

    #[inline]
    pub fn neighbor_set(&self, v: Vertex) -> &VertexSet {
        &self.bits[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.bits[u].contains(v)
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u]
            .binary_search(&v)
            .ok()
            .map(|i| self.adj_edge[u][i])
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    #[inline]
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).max()
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn is_independent(&self, set: &[Vertex]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[Vertex]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Subgraph induced on `vertices`; vertex `i` of the result is
    /// `vertices[i]` of `self`.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = vertices.iter().enumerate().flat_map(|(i, &u)| {
            let pos = &pos;
            self.adj[u]
                .iter()
                .filter_map(move |&w| (pos[w] != usize::MAX && pos[w] > i).then_some((i, pos[w])))
        });
        Graph::simple(vertices.len(), edges.collect::<Vec<_>>())
    }

    /// Same vertex set, keeping only the given edges.
    pub fn edge_subgraph(&self, edges: impl IntoIterator<Item = EdgeId>) -> Graph {
        Graph::simple(self.n, edges.into_iter().map(|e| self.edges[e]))
    }

    /// Returns the graph with the given edges added (existing ones ignored).
    pub fn with_edges(&self, extra: impl IntoIterator<Item = (Vertex, Vertex)>) -> Graph {
        Graph::simple(
            self.n,
            self.edges.iter().copied().chain(extra).collect::<Vec<_>>(),
        )
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        Graph::simple(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        Graph::simple(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn find_triangle(&self) -> Option<[Vertex; 3]> {
        for &(u, v) in &self.edges {
            let common = self.bits[u].intersection(&self.bits[v]);
            if let Some(w) = common.first() {
                let mut t = [u, v, w];
                t.sort_unstable();
                return Some(t);
            }
        }
        None
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// Components as sorted vertex lists, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        self.components_avoiding(&VertexSet::new(self.n))
    }

    /// Components of the graph with `removed` deleted.
    pub fn components_avoiding(&self, removed: &VertexSet) -> Vec<Vec<Vertex>> {
        let mut seen = removed.clone();
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen.contains(w) {
                        seen.insert(w);
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Whether the subgraph induced on `set` is connected (false when empty).
    pub fn is_connected_within(&self, set: &VertexSet) -> bool {
        let Some(s) = set.first() else {
            return false;
        };
        let mut seen = VertexSet::new(self.n);
        seen.insert(s);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let mut next = self.bits[u].intersection(set);
            next.difference_with(&seen);
            for w in next.iter() {
                seen.insert(w);
                stack.push(w);
            }
        }
        seen.len() == set.len()
    }
}
