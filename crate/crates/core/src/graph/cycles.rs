use super::{Cycle, Graph, Vertex};
use crate::bitset::VertexSet;
use std::collections::VecDeque;

/// Streams every cycle of length at most `length_cap` exactly once, in
/// canonical form. Cycles are grouped by their minimum vertex.
pub struct CycleIter<'g> {
    g: &'g Graph,
    cap: usize,
    next_start: Vertex,
    start: Vertex,
    path: Vec<Vertex>,
    cursor: Vec<usize>,
    on_path: VertexSet,
}

pub fn enumerate_cycles(g: &Graph, length_cap: usize) -> CycleIter<'_> {
    CycleIter {
        g,
        cap: length_cap,
        next_start: 0,
        start: 0,
        path: Vec::new(),
        cursor: Vec::new(),
        on_path: VertexSet::new(g.n()),
    }
}

impl Iterator for CycleIter<'_> {
    type Item = Cycle;

    fn next(&mut self) -> Option<Cycle> {
        if self.cap < 3 {
            return None;
        }
        loop {
            let Some(&v) = self.path.last() else {
                if self.next_start >= self.g.n() {
                    return None;
                }
                self.start = self.next_start;
                self.next_start += 1;
                self.path.push(self.start);
                self.cursor.push(0);
                self.on_path.insert(self.start);
                continue;
            };
            let depth = self.path.len();
            let i = self.cursor[depth - 1];
            let ns = self.g.neighbors(v);
            if i < ns.len() {
                self.cursor[depth - 1] += 1;
                let w = ns[i];
                if w == self.start {
                    if depth >= 3 && self.path[1] < v {
                        return Some(Cycle::canonical(self.path.clone()));
                    }
                } else if w > self.start && !self.on_path.contains(w) && depth < self.cap {
                    self.path.push(w);
                    self.cursor.push(0);
                    self.on_path.insert(w);
                }
            } else {
                self.path.pop();
                self.cursor.pop();
                self.on_path.remove(v);
            }
        }
    }
}

/// Length of a shortest cycle, if any.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..g.n() {
        let mut dist = vec![usize::MAX; g.n()];
        let mut parent = vec![usize::MAX; g.n()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    q.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Exhaustive Hamilton cycle search. Graphs with fewer than three vertices
/// are never Hamiltonian.
pub fn hamiltonian_cycle(g: &Graph) -> Option<Cycle> {
    let n = g.n();
    if n < 3 || (0..n).any(|v| g.degree(v) < 2) || !g.is_connected() {
        return None;
    }
    let mut path = vec![0];
    let mut visited = VertexSet::new(n);
    visited.insert(0);
    fn dfs(g: &Graph, path: &mut Vec<Vertex>, visited: &mut VertexSet) -> bool {
        let v = *path.last().expect("non-empty");
        if path.len() == g.n() {
            return g.has_edge(v, path[0]);
        }
        for &w in g.neighbors(v) {
            if visited.contains(w) {
                continue;
            }
            visited.insert(w);
            path.push(w);
            if dfs(g, path, visited) {
                return true;
            }
            path.pop();
            visited.remove(w);
        }
        false
    }
    dfs(g, &mut path, &mut visited).then(|| Cycle::canonical(path))
}
