use super::{EdgeId, Graph, Vertex};
use crate::bitset::VertexSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("vertex {0} repeats in a cycle")]
    RepeatedVertex(Vertex),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(Vertex, Vertex),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("edge {0} used twice")]
    RepeatedEdge(EdgeId),
    #[error("edge id {0} out of range")]
    EdgeOutOfRange(EdgeId),
    #[error("vertex {0} has odd degree in the edge set")]
    OddDegree(Vertex),
    #[error("edge set is disconnected")]
    Disconnected,
    #[error("edge set is empty")]
    EmptyEdgeSet,
    #[error("vertex {vertex} has degree {degree} in the 2-factor")]
    WrongDegree { vertex: Vertex, degree: usize },
    #[error("vertex {0} is covered by more than one cycle")]
    Overlap(Vertex),
    #[error("vertex {0} is not covered")]
    Uncovered(Vertex),
}

/// A cycle stored in canonical form: minimum vertex first, then the
/// direction whose second vertex is smaller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

impl Cycle {
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Self, StructureError> {
        if vertices.len() < 3 {
            return Err(StructureError::CycleTooShort(vertices.len()));
        }
        let mut seen = VertexSet::new(g.n());
        for &v in &vertices {
            if v >= g.n() {
                return Err(StructureError::VertexOutOfRange(v));
            }
            if seen.contains(v) {
                return Err(StructureError::RepeatedVertex(v));
            }
            seen.insert(v);
        }
        for i in 0..vertices.len() {
            let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
            if !g.has_edge(a, b) {
                return Err(StructureError::NotAdjacent(a, b));
            }
        }
        Ok(Self::canonical(vertices))
    }

    pub(crate) fn canonical(mut vertices: Vec<Vertex>) -> Self {
        let pos = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        vertices.rotate_left(pos);
        if vertices.len() > 2 && vertices[vertices.len() - 1] < vertices[1] {
            vertices[1..].reverse();
        }
        Cycle { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge ids in traversal order (edge `i` joins vertex `i` and `i+1`).
    pub fn edge_ids(&self, g: &Graph) -> Vec<EdgeId> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                g.edge_id(self.vertices[i], self.vertices[(i + 1) % n])
                    .expect("cycle edge present in host")
            })
            .collect()
    }
}

/// A spanning collection of vertex-disjoint cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactor {
    cycles: Vec<Cycle>,
}

impl TwoFactor {
    /// Validates the cycles against `g` and sorts them canonically.
    pub fn new(g: &Graph, cycles: Vec<Vec<Vertex>>) -> Result<Self, StructureError> {
        let mut out = Vec::with_capacity(cycles.len());
        let mut covered = VertexSet::new(g.n());
        for c in cycles {
            let c = Cycle::new(g, c)?;
            for &v in c.vertices() {
                if covered.contains(v) {
                    return Err(StructureError::Overlap(v));
                }
                covered.insert(v);
            }
            out.push(c);
        }
        if let Some(v) = (0..g.n()).find(|&v| !covered.contains(v)) {
            return Err(StructureError::Uncovered(v));
        }
        out.sort();
        Ok(TwoFactor { cycles: out })
    }

    /// Decomposes a 2-regular spanning edge set into its cycles.
    pub fn from_edges(g: &Graph, edges: &[EdgeId]) -> Result<Self, StructureError> {
        check_two_regular(g, edges)?;
        let sub = g.edge_subgraph(edges.iter().copied());
        let mut cycles = Vec::new();
        for comp in sub.connected_components() {
            let start = comp[0];
            let mut walk = vec![start];
            let mut prev = start;
            let mut cur = sub.neighbors(start)[0];
            while cur != start {
                walk.push(cur);
                let ns = sub.neighbors(cur);
                let next = if ns[0] != prev { ns[0] } else { ns[1] };
                prev = cur;
                cur = next;
            }
            cycles.push(walk);
        }
        Self::new(g, cycles)
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn edge_ids(&self, g: &Graph) -> Vec<EdgeId> {
        let mut e: Vec<_> = self.cycles.iter().flat_map(|c| c.edge_ids(g)).collect();
        e.sort_unstable();
        e
    }

    pub fn to_lists(&self) -> Vec<Vec<Vertex>> {
        self.cycles.iter().map(|c| c.vertices().to_vec()).collect()
    }
}

/// Degree-only 2-factor check: every vertex has degree exactly 2 in the
/// union of `edges`. Independent of any cycle decomposition.
pub(crate) fn check_two_regular(g: &Graph, edges: &[EdgeId]) -> Result<(), StructureError> {
    let mut deg = vec![0usize; g.n()];
    let mut seen = vec![false; g.m()];
    for &e in edges {
        if e >= g.m() {
            return Err(StructureError::EdgeOutOfRange(e));
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(StructureError::RepeatedEdge(e));
        }
        let (u, v) = g.edge(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    match deg.iter().position(|&d| d != 2) {
        Some(v) => Err(StructureError::WrongDegree {
            vertex: v,
            degree: deg[v],
        }),
        None => Ok(()),
    }
}

/// A set of host edges.
#[derive(Debug, Clone)]
pub struct EdgeSubgraph<'g> {
    host: &'g Graph,
    edges: Vec<EdgeId>,
}

impl<'g> EdgeSubgraph<'g> {
    pub fn new(host: &'g Graph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self, StructureError> {
        let mut edges: Vec<_> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        if let Some(&e) = edges.iter().find(|&&e| e >= host.m()) {
            return Err(StructureError::EdgeOutOfRange(e));
        }
        Ok(EdgeSubgraph { host, edges })
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.host.n()];
        for &e in &self.edges {
            let (u, v) = self.host.edge(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn vertices(&self) -> VertexSet {
        let mut s = VertexSet::new(self.host.n());
        for &e in &self.edges {
            let (u, v) = self.host.edge(e);
            s.insert(u);
            s.insert(v);
        }
        s
    }

    pub fn is_connected(&self) -> bool {
        !self.edges.is_empty()
            && self.host.edge_subgraph(self.edges.iter().copied()).is_connected_within(&self.vertices())
    }

    pub fn is_even(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 0)
    }

    /// Connected components of the edge set, each as sorted edge ids.
    pub fn edge_components(&self) -> Vec<Vec<EdgeId>> {
        let sub = self.host.edge_subgraph(self.edges.iter().copied());
        let mut comp_of = vec![usize::MAX; self.host.n()];
        let comps: Vec<_> = sub
            .connected_components()
            .into_iter()
            .filter(|c| sub.degree(c[0]) > 0)
            .collect();
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut out = vec![Vec::new(); comps.len()];
        for &e in &self.edges {
            out[comp_of[self.host.edge(e).0]].push(e);
        }
        out
    }
}

/// A closed walk repeating no edge. `walk[i]` and `walk[i+1]` (cyclically)
/// are joined by `edges[i]`; the stored order fixes the orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedTrail {
    walk: Vec<Vertex>,
    edges: Vec<EdgeId>,
}

impl ClosedTrail {
    pub fn from_walk(g: &Graph, walk: Vec<Vertex>) -> Result<Self, StructureError> {
        let len = walk.len();
        if len < 3 {
            return Err(StructureError::CycleTooShort(len));
        }
        let mut edges = Vec::with_capacity(len);
        let mut used = vec![false; g.m()];
        for i in 0..len {
            let (a, b) = (walk[i], walk[(i + 1) % len]);
            if a >= g.n() || b >= g.n() {
                return Err(StructureError::VertexOutOfRange(a.max(b)));
            }
            let e = g.edge_id(a, b).ok_or(StructureError::NotAdjacent(a, b))?;
            if std::mem::replace(&mut used[e], true) {
                return Err(StructureError::RepeatedEdge(e));
            }
            edges.push(e);
        }
        Ok(ClosedTrail { walk, edges })
    }

    /// Euler circuit of a connected even edge set, starting at its smallest
    /// vertex and always leaving along the smallest unused edge id.
    pub fn from_edge_set(g: &Graph, edge_set: &[EdgeId]) -> Result<Self, StructureError> {
        let sub = EdgeSubgraph::new(g, edge_set.iter().copied())?;
        if sub.edges().is_empty() {
            return Err(StructureError::EmptyEdgeSet);
        }
        let deg = sub.degrees();
        if let Some(v) = deg.iter().position(|d| d % 2 == 1) {
            return Err(StructureError::OddDegree(v));
        }
        if !sub.is_connected() {
            return Err(StructureError::Disconnected);
        }
        let start = sub.vertices().first().expect("non-empty");
        Ok(Self::euler_from(g, sub.edges(), start))
    }

    /// Like [`ClosedTrail::from_edge_set`] but starting at `start`, which
    /// must be a vertex of the edge set.
    pub fn from_edge_set_at(
        g: &Graph,
        edge_set: &[EdgeId],
        start: Vertex,
    ) -> Result<Self, StructureError> {
        let t = Self::from_edge_set(g, edge_set)?;
        if !t.walk.contains(&start) {
            return Err(StructureError::VertexOutOfRange(start));
        }
        Ok(Self::euler_from(g, &t.sorted_edges(), start))
    }

    fn euler_from(g: &Graph, edges: &[EdgeId], start: Vertex) -> Self {
        let mut in_set = vec![false; g.m()];
        for &e in edges {
            in_set[e] = true;
        }
        let mut used = vec![false; g.m()];
        let mut ptr = vec![0usize; g.n()];
        let mut stack: Vec<(Vertex, Option<EdgeId>)> = vec![(start, None)];
        let mut circuit = Vec::with_capacity(edges.len() + 1);
        while let Some(&(v, _)) = stack.last() {
            let inc = g.incident_edges(v);
            while ptr[v] < inc.len() && (!in_set[inc[ptr[v]]] || used[inc[ptr[v]]]) {
                ptr[v] += 1;
            }
            if ptr[v] < inc.len() {
                let e = inc[ptr[v]];
                used[e] = true;
                stack.push((g.other_end(e, v), Some(e)));
            } else {
                circuit.push(stack.pop().expect("non-empty"));
            }
        }
        circuit.reverse();
        // circuit = [(start, None), (v1, e1), ..., (start, eL)]
        let walk = circuit[..circuit.len() - 1].iter().map(|p| p.0).collect();
        let edges = circuit[1..].iter().map(|p| p.1.expect("edge")).collect();
        ClosedTrail { walk, edges }
    }

    pub fn walk(&self) -> &[Vertex] {
        &self.walk
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn sorted_edges(&self) -> Vec<EdgeId> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter_n(n, self.walk.iter().copied())
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.walk.contains(&v)
    }

    /// The vertex after the first occurrence of `v` along the stored
    /// orientation.
    pub fn successor(&self, v: Vertex) -> Option<Vertex> {
        let i = self.walk.iter().position(|&w| w == v)?;
        Some(self.walk[(i + 1) % self.walk.len()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cycle_canonical_form() {
        let g = Graph::cycle(5);
        let c = Cycle::new(&g, vec![3, 2, 1, 0, 4]).unwrap();
        assert_eq!(c.vertices(), &[0, 1, 2, 3, 4]);
        let c = Cycle::new(&g, vec![2, 3, 4, 0, 1]).unwrap();
        assert_eq!(c.vertices(), &[0, 1, 2, 3, 4]);
        assert_eq!(
            Cycle::new(&g, vec![0, 1, 3]).unwrap_err(),
            StructureError::NotAdjacent(1, 3)
        );
    }

    #[test]
    fn two_factor_checks() {
        let g = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        let tf = TwoFactor::new(&g, vec![vec![3, 4, 5], vec![0, 1, 2]]).unwrap();
        assert_eq!(tf.cycle_count(), 2);
        assert_eq!(tf.cycles()[0].vertices(), &[0, 1, 2]);
        assert_eq!(
            TwoFactor::new(&g, vec![vec![0, 1, 2]]).unwrap_err(),
            StructureError::Uncovered(3)
        );
        let from_edges = TwoFactor::from_edges(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        assert_eq!(from_edges, tf);
    }

    #[test]
    fn figure_eight_trail() {
        // Two triangles sharing vertex 0.
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap();
        let t = ClosedTrail::from_edge_set(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.walk()[0], 0);
        let again = ClosedTrail::from_walk(&g, t.walk().to_vec()).unwrap();
        assert_eq!(again, t);
        let rotated = ClosedTrail::from_edge_set_at(&g, &t.sorted_edges(), 3).unwrap();
        assert_eq!(rotated.walk()[0], 3);
        assert_eq!(ClosedTrail::from_edge_set(&g, &[0, 1]), Err(StructureError::OddDegree(1)));
    }

    #[test]
    fn disconnected_even_set_is_not_a_trail() {
        let g = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        assert_eq!(
            ClosedTrail::from_edge_set(&g, &(0..6).collect::<Vec<_>>()),
            Err(StructureError::Disconnected)
        );
    }

    fn walk_is_valid(g: &Graph, edges: &[EdgeId]) -> bool {
        // Sequence-based check: try every start and every ordering reachable
        // by DFS over unused edges.
        fn dfs(g: &Graph, set: &[EdgeId], used: &mut Vec<bool>, start: Vertex, v: Vertex, left: usize) -> bool {
            if left == 0 {
                return v == start;
            }
            for (i, &e) in set.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let (a, b) = g.edge(e);
                if a != v && b != v {
                    continue;
                }
                used[i] = true;
                let ok = dfs(g, set, used, start, if a == v { b } else { a }, left - 1);
                used[i] = false;
                if ok {
                    return true;
                }
            }
            false
        }
        if edges.len() < 3 {
            return false;
        }
        let start = g.edge(edges[0]).0;
        dfs(g, edges, &mut vec![false; edges.len()], start, start, edges.len())
    }

    proptest! {
        #[test]
        fn edge_set_check_agrees_with_sequence_check(mask in 1u32..(1 << 10)) {
            let g = Graph::complete(5);
            let edges: Vec<_> = (0..10).filter(|i| mask >> i & 1 == 1).collect();
            let sub = EdgeSubgraph::new(&g, edges.clone()).unwrap();
            let by_set = sub.is_connected() && sub.is_even();
            prop_assert_eq!(by_set, walk_is_valid(&g, &edges));
            prop_assert_eq!(by_set, ClosedTrail::from_edge_set(&g, &edges).is_ok());
        }
    }
}
