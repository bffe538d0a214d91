//! 2-factors: Tutte's gadget reduction to perfect matching, and an exhaustive
//! minimum-cycle oracle.
//!
//! Gadget: a vertex `v` of degree `d` becomes `d` stubs (one per incident
//! edge) and `d - 2` fillers, with every stub joined to every filler; the two
//! stubs of an edge `uv` are joined to each other. In a perfect matching the
//! fillers absorb exactly `d - 2` stubs of `v`, so exactly two stubs of `v`
//! are matched across their edges. Those edges form a 2-regular spanning
//! subgraph, and every 2-factor lifts to a perfect matching the same way.

use super::blossom::maximum_mate;
use crate::bitset::VertexSet;
use crate::graph::{Graph, TwoFactor, Vertex};
use thiserror::Error;

pub const DEFAULT_FACTOR_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("2-factor search exceeded {0} nodes")]
    BudgetExceeded(u64),
}

/// A 2-factor of `g`, or `None` if there is none.
pub fn two_factor(g: &Graph) -> Option<TwoFactor> {
    let n = g.n();
    if n == 0 || (0..n).any(|v| g.degree(v) < 2) {
        return None;
    }
    // stub(v, i): i-th incident edge of v; fillers follow all stubs.
    let mut stub_base = vec![0usize; n];
    let mut total = 0;
    for v in 0..n {
        stub_base[v] = total;
        total += g.degree(v);
    }
    let mut filler_base = vec![0usize; n];
    for v in 0..n {
        filler_base[v] = total;
        total += g.degree(v) - 2;
    }
    let mut adj = vec![Vec::new(); total];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for v in 0..n {
        let d = g.degree(v);
        for i in 0..d {
            for j in 0..d - 2 {
                link(stub_base[v] + i, filler_base[v] + j, &mut adj);
            }
        }
    }
    let stub_of = |v: Vertex, e: usize| {
        stub_base[v] + g.incident_edges(v).iter().position(|&x| x == e).expect("incident")
    };
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        link(stub_of(u, e), stub_of(v, e), &mut adj);
    }
    let mate = maximum_mate(&adj);
    if mate.contains(&usize::MAX) {
        return None;
    }
    let chosen: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(e, &(u, v))| mate[stub_of(u, e)] == stub_of(v, e))
        .map(|(e, _)| e)
        .collect();
    Some(TwoFactor::from_edges(g, &chosen).expect("gadget matching yields a 2-regular spanning subgraph"))
}

/// The minimum number of cycles over all 2-factors, with one attaining it.
/// `Ok(None)` when `g` has no 2-factor.
pub fn min_cycle_two_factor_bruteforce(
    g: &Graph,
    budget: u64,
) -> Result<Option<(TwoFactor, usize)>, FactorError> {
    let n = g.n();
    if n == 0 || (0..n).any(|v| g.degree(v) < 2) {
        return Ok(None);
    }
    let mut s = Search {
        g,
        uncovered: VertexSet::full(n),
        cycles: Vec::new(),
        best: None,
        nodes: 0,
        budget,
    };
    s.cover()?;
    Ok(s.best.map(|cs| {
        let k = cs.len();
        (TwoFactor::new(g, cs).expect("search emits vertex-disjoint cycles"), k)
    }))
}

struct Search<'a> {
    g: &'a Graph,
    uncovered: VertexSet,
    cycles: Vec<Vec<Vertex>>,
    best: Option<Vec<Vec<Vertex>>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), FactorError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(FactorError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn bound(&self) -> usize {
        self.best.as_ref().map_or(usize::MAX, |b| b.len())
    }

    fn cover(&mut self) -> Result<(), FactorError> {
        self.tick()?;
        let Some(s) = self.uncovered.first() else {
            if self.cycles.len() < self.bound() {
                self.best = Some(self.cycles.clone());
            }
            return Ok(());
        };
        if self.cycles.len() + 1 >= self.bound() {
            return Ok(());
        }
        if self
            .uncovered
            .iter()
            .any(|v| self.g.neighbor_set(v).intersection_len(&self.uncovered) < 2)
        {
            return Ok(());
        }
        let mut path = vec![s];
        self.uncovered.remove(s);
        self.extend(s, &mut path)?;
        self.uncovered.insert(s);
        Ok(())
    }

    // Cycles through `path[0]`, the smallest uncovered vertex, each found once.
    fn extend(&mut self, s: Vertex, path: &mut Vec<Vertex>) -> Result<(), FactorError> {
        let v = *path.last().expect("non-empty");
        let ns: Vec<Vertex> = self.g.neighbors(v).to_vec();
        for w in ns {
            if w == s && path.len() >= 3 && path[1] < v {
                self.cycles.push(path.clone());
                self.cover()?;
                self.cycles.pop();
            } else if self.uncovered.contains(w) {
                self.tick()?;
                self.uncovered.remove(w);
                path.push(w);
                self.extend(s, path)?;
                path.pop();
                self.uncovered.insert(w);
            }
            if self.cycles.len() + 1 >= self.bound() {
                break;
            }
        }
        Ok(())
    }
}
