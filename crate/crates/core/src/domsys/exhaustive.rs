//! Exact minimum dominating systems by enumerating the cycle space.
//!
//! The union of the trails of a system is an even subgraph `E_T`. Splitting
//! it into its connected components never increases the element count, so a
//! minimum system uses the components of some `E_T` as its trails. Edges with
//! no endpoint on `V(E_T)` must then sit in stars centred off `V(E_T)`, and a
//! centre `c` may pad its star with its edges into `V(E_T)`. What remains is a
//! small covering problem solved by brute force.

use super::{DominatingSystem, Mode, Star};
use crate::bitset::VertexSet;
use crate::graph::{ClosedTrail, EdgeId, Graph, Vertex};
use thiserror::Error;

pub const DEFAULT_SYSTEM_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomSearchError {
    #[error("dominating-system search exceeded {0} nodes")]
    BudgetExceeded(u64),
}

/// Fundamental cycles of a BFS spanning forest, as edge bitsets.
pub fn cycle_space_basis(h: &Graph) -> Vec<VertexSet> {
    let n = h.n();
    let mut parent_edge = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; h.m()];
    for s in 0..n {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for (&w, &e) in h.neighbors(u).iter().zip(h.incident_edges(u)) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent_edge[w] = e;
                    tree[e] = true;
                    q.push_back(w);
                }
            }
        }
    }
    let mut basis = Vec::new();
    for (e, &(a, b)) in h.edges().iter().enumerate() {
        if tree[e] {
            continue;
        }
        let mut set = VertexSet::new(h.m());
        set.insert(e);
        let (mut x, mut y) = (a, b);
        while x != y {
            if depth[x] >= depth[y] {
                let pe = parent_edge[x];
                set.insert(pe);
                x = h.other_end(pe, x);
            } else {
                let pe = parent_edge[y];
                set.insert(pe);
                y = h.other_end(pe, y);
            }
        }
        basis.push(set);
    }
    basis
}

/// Calls `f` on every even subgraph (including the empty one) as an edge
/// bitset, in Gray-code order. Stops early when `f` returns `false`.
fn for_each_even_subgraph(h: &Graph, mut f: impl FnMut(&VertexSet) -> bool) {
    let basis = cycle_space_basis(h);
    let d = basis.len();
    assert!(d < 64, "cycle space too large for exhaustive search");
    let mut cur = VertexSet::new(h.m());
    if !f(&cur) {
        return;
    }
    for i in 1u64..(1u64 << d) {
        cur.symmetric_difference_with(&basis[i.trailing_zeros() as usize]);
        if !f(&cur) {
            return;
        }
    }
}

/// Edge sets of the connected components of an edge set.
fn components(h: &Graph, edges: &VertexSet) -> Vec<Vec<EdgeId>> {
    let mut root: Vec<usize> = (0..h.n()).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for e in edges.iter() {
        let (a, b) = h.edge(e);
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        root[ra.max(rb)] = ra.min(rb);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<EdgeId>> = Default::default();
    for e in edges.iter() {
        let r = find(&mut root, h.edge(e).0);
        groups.entry(r).or_default().push(e);
    }
    let mut out: Vec<Vec<EdgeId>> = groups.into_values().collect();
    out.sort();
    out
}

fn touched(h: &Graph, edges: &VertexSet) -> VertexSet {
    let mut s = VertexSet::new(h.n());
    for e in edges.iter() {
        let (a, b) = h.edge(e);
        s.insert(a);
        s.insert(b);
    }
    s
}

struct Cover<'a> {
    h: &'a Graph,
    r: Vec<EdgeId>,
    lower: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Cover<'_> {
    fn tick(&mut self) -> Result<(), DomSearchError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(DomSearchError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    /// Smallest centre set of size at most `limit` with an assignment of the
    /// `r` edges meeting every centre's lower bound.
    fn solve(&mut self, limit: usize) -> Result<Option<Vec<(Vertex, Vec<EdgeId>)>>, DomSearchError> {
        if self.r.is_empty() {
            return Ok(Some(Vec::new()));
        }
        let mut verts: Vec<Vertex> = self.r.iter().flat_map(|&e| {
            let (a, b) = self.h.edge(e);
            [a, b]
        }).collect();
        verts.sort_unstable();
        verts.dedup();
        for size in 1..=limit.min(verts.len()) {
            let mut chosen = Vec::with_capacity(size);
            if let Some(sol) = self.combos(&verts, 0, size, &mut chosen)? {
                return Ok(Some(sol));
            }
        }
        Ok(None)
    }

    fn combos(
        &mut self,
        verts: &[Vertex],
        from: usize,
        size: usize,
        chosen: &mut Vec<Vertex>,
    ) -> Result<Option<Vec<(Vertex, Vec<EdgeId>)>>, DomSearchError> {
        self.tick()?;
        if chosen.len() == size {
            return self.assign(chosen);
        }
        for i in from..verts.len() {
            if verts.len() - i < size - chosen.len() {
                break;
            }
            chosen.push(verts[i]);
            if let Some(s) = self.combos(verts, i + 1, size, chosen)? {
                return Ok(Some(s));
            }
            chosen.pop();
        }
        Ok(None)
    }

    fn assign(&mut self, centres: &[Vertex]) -> Result<Option<Vec<(Vertex, Vec<EdgeId>)>>, DomSearchError> {
        let idx = |v: Vertex| centres.iter().position(|&c| c == v);
        // Options per edge; every edge needs a chosen endpoint.
        let mut options = Vec::with_capacity(self.r.len());
        for &e in &self.r {
            let (a, b) = self.h.edge(e);
            let o: Vec<usize> = [idx(a), idx(b)].into_iter().flatten().collect();
            if o.is_empty() {
                return Ok(None);
            }
            options.push(o);
        }
        let mut potential = vec![0usize; centres.len()];
        for o in &options {
            for &c in o {
                potential[c] += 1;
            }
        }
        let need: Vec<usize> = centres.iter().map(|&c| self.lower[c]).collect();
        if (0..centres.len()).any(|c| potential[c] < need[c]) {
            return Ok(None);
        }
        let mut count = vec![0usize; centres.len()];
        let mut pick = vec![0usize; options.len()];
        if self.place(&options, 0, &mut count, &mut potential, &need, &mut pick)? {
            let mut out: Vec<(Vertex, Vec<EdgeId>)> = centres.iter().map(|&c| (c, Vec::new())).collect();
            for (i, &c) in pick.iter().enumerate() {
                out[c].1.push(self.r[i]);
            }
            Ok(Some(out))
        } else {
            Ok(None)
        }
    }

    fn place(
        &mut self,
        options: &[Vec<usize>],
        i: usize,
        count: &mut [usize],
        potential: &mut [usize],
        need: &[usize],
        pick: &mut [usize],
    ) -> Result<bool, DomSearchError> {
        self.tick()?;
        if i == options.len() {
            return Ok((0..count.len()).all(|c| count[c] >= need[c]));
        }
        for (k, &c) in options[i].iter().enumerate() {
            // The unchosen option loses this edge's potential.
            let other = options[i].get(1 - k).copied().filter(|_| options[i].len() == 2);
            if let Some(o) = other {
                potential[o] -= 1;
                if potential[o] < need[o] {
                    potential[o] += 1;
                    continue;
                }
            }
            count[c] += 1;
            pick[i] = c;
            let ok = self.place(options, i + 1, count, potential, need, pick)?;
            count[c] -= 1;
            if let Some(o) = other {
                potential[o] += 1;
            }
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// A minimum-cardinality dominating system of `h` in the given mode, with its
/// cardinality; `Ok(None)` when `h` has none.
pub fn min_system_exhaustive(
    h: &Graph,
    mode: Mode,
    budget: u64,
) -> Result<Option<(DominatingSystem, usize)>, DomSearchError> {
    let mut best: Option<(usize, Vec<Vec<EdgeId>>, Vec<(Vertex, Vec<EdgeId>)>)> = None;
    let mut nodes = 0u64;
    let mut failure = None;
    for_each_even_subgraph(h, |et| {
        nodes += 1;
        if nodes > budget {
            failure = Some(DomSearchError::BudgetExceeded(budget));
            return false;
        }
        let comps = components(h, et);
        let t = comps.len();
        let bound = best.as_ref().map_or(usize::MAX, |b| b.0);
        if t >= bound {
            return true;
        }
        let vt = touched(h, et);
        let r: Vec<EdgeId> = (0..h.m())
            .filter(|&e| {
                let (a, b) = h.edge(e);
                !vt.contains(a) && !vt.contains(b)
            })
            .collect();
        let lower: Vec<usize> = (0..h.n())
            .map(|c| {
                let ext = h.neighbors(c).iter().filter(|&&w| vt.contains(w)).count();
                mode.min_star_size().saturating_sub(ext).max(1)
            })
            .collect();
        let mut cover = Cover {
            h,
            r,
            lower,
            nodes,
            budget,
        };
        let limit = bound.saturating_sub(t + 1);
        match cover.solve(limit) {
            Ok(Some(centres)) => {
                // Pad each star with its centre's edges into V(E_T).
                let stars = centres
                    .into_iter()
                    .map(|(c, mut es)| {
                        es.extend(
                            h.incident_edges(c)
                                .iter()
                                .copied()
                                .filter(|&e| vt.contains(h.other_end(e, c))),
                        );
                        es.sort_unstable();
                        (c, es)
                    })
                    .collect::<Vec<_>>();
                best = Some((t + stars.len(), comps, stars));
            }
            Ok(None) => {}
            Err(e) => {
                failure = Some(e);
                return false;
            }
        }
        nodes = cover.nodes;
        // Stop once the trivial lower bound is met.
        best.as_ref().is_none_or(|b| b.0 > usize::from(h.m() > 0))
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best.map(|(k, comps, stars)| {
        let ds = DominatingSystem {
            trails: comps
                .iter()
                .map(|c| ClosedTrail::from_edge_set(h, c).expect("component of an even subgraph"))
                .collect(),
            stars: stars.into_iter().map(|(c, es)| Star::new(c, es)).collect(),
            mode,
        };
        debug_assert!(ds.is_valid(h));
        (ds, k)
    }))
}

/// The closed trail with the lexicographically smallest sorted edge set that
/// dominates every edge of `h`, if any. Trails have at least one edge.
pub fn has_dominating_closed_trail(h: &Graph) -> Option<ClosedTrail> {
    let mut best: Option<Vec<EdgeId>> = None;
    for_each_even_subgraph(h, |et| {
        if et.is_empty() {
            return true;
        }
        let vt = touched(h, et);
        let dominating = h.edges().iter().all(|&(a, b)| vt.contains(a) || vt.contains(b));
        if dominating {
            let comps = components(h, et);
            if comps.len() == 1 && best.as_ref().is_none_or(|b| comps[0] < *b) {
                best = Some(comps.into_iter().next().expect("one component"));
            }
        }
        true
    });
    best.map(|es| ClosedTrail::from_edge_set(h, &es).expect("connected even edge set"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_dimension() {
        assert_eq!(cycle_space_basis(&Graph::complete(4)).len(), 3);
        assert_eq!(cycle_space_basis(&Graph::path(5)).len(), 0);
        let mut count = 0;
        for_each_even_subgraph(&Graph::complete(4), |_| {
            count += 1;
            true
        });
        assert_eq!(count, 8);
    }

    #[test]
    fn minimum_examples() {
        let (ds, k) = min_system_exhaustive(&Graph::cycle(5), Mode::Strict, 10_000).unwrap().unwrap();
        assert_eq!(k, 1);
        assert_eq!(ds.trails.len(), 1);
        let (ds, k) = min_system_exhaustive(&Graph::star(3), Mode::Strict, 10_000).unwrap().unwrap();
        assert_eq!(k, 1);
        assert_eq!(ds.stars.len(), 1);
        assert_eq!(min_system_exhaustive(&Graph::path(4), Mode::Strict, 10_000).unwrap(), None);
        let (_, k) = min_system_exhaustive(&Graph::path(4), Mode::Relaxed, 10_000).unwrap().unwrap();
        assert_eq!(k, 2);
    }

    #[test]
    fn dominating_trail_examples() {
        let t = has_dominating_closed_trail(&Graph::cycle(7)).unwrap();
        assert_eq!(t.len(), 7);
        assert!(has_dominating_closed_trail(&Graph::path(4)).is_none());
        let k23 = Graph::complete_bipartite(2, 3);
        let t = has_dominating_closed_trail(&k23).unwrap();
        assert_eq!(t.sorted_edges(), vec![0, 1, 3, 4]);
    }
}
