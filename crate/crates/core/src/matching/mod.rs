//! Matching kernels: general maximum matching, 2-factors through it, and
//! bipartite matching with Hall-violator extraction.

mod blossom;
mod factor;

pub use factor::{min_cycle_two_factor_bruteforce, two_factor, FactorError, DEFAULT_FACTOR_BUDGET};

use crate::graph::{EdgeId, Graph, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// A set of pairwise vertex-disjoint edges of a host graph, by sorted id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<EdgeId>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        self.edges.iter().all(|&e| {
            if e >= g.m() {
                return false;
            }
            let (u, v) = g.edge(e);
            let fresh = !used[u] && !used[v];
            used[u] = true;
            used[v] = true;
            fresh
        })
    }

    /// `mate[v]` for every vertex, `None` if unmatched.
    pub fn mates(&self, g: &Graph) -> Vec<Option<Vertex>> {
        let mut m = vec![None; g.n()];
        for &e in &self.edges {
            let (u, v) = g.edge(e);
            m[u] = Some(v);
            m[v] = Some(u);
        }
        m
    }

    fn from_mate(g: &Graph, mate: &[usize]) -> Self {
        let mut edges: Vec<EdgeId> = (0..g.n())
            .filter(|&v| mate[v] != usize::MAX && v < mate[v])
            .map(|v| g.edge_id(v, mate[v]).expect("matched pairs are edges"))
            .collect();
        edges.sort_unstable();
        Matching { edges }
    }
}

/// A maximum-cardinality matching.
pub fn max_matching_general(g: &Graph) -> Matching {
    let adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
    Matching::from_mate(g, &blossom::maximum_mate(&adj))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("designated side is not independent: edge {0}-{1}")]
    SideNotIndependent(Vertex, Vertex),
    #[error("graph is not bipartite with the designated side as a part: edge {0}-{1}")]
    OtherSideNotIndependent(Vertex, Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HallCertificate {
    /// Covers every vertex of the side.
    Matching(Matching),
    /// Inclusion-minimal `S` with `|N(S)| < |S|`, sorted.
    Violator(Vec<Vertex>),
}

/// Maximum bipartite matching from `left` into its neighbourhoods.
/// Returns `mate` indexed by host vertex.
fn hopcroft_karp(f: &Graph, left: &[Vertex]) -> Vec<usize> {
    const FREE: usize = usize::MAX;
    let n = f.n();
    let mut mate = vec![FREE; n];
    let mut dist = vec![usize::MAX; n];
    loop {
        let mut q = VecDeque::new();
        for &x in left {
            if mate[x] == FREE {
                dist[x] = 0;
                q.push_back(x);
            } else {
                dist[x] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(x) = q.pop_front() {
            for &y in f.neighbors(x) {
                match mate[y] {
                    FREE => found = true,
                    x2 if dist[x2] == usize::MAX => {
                        dist[x2] = dist[x] + 1;
                        q.push_back(x2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return mate;
        }
        fn augment(f: &Graph, x: usize, mate: &mut [usize], dist: &mut [usize]) -> bool {
            for &y in f.neighbors(x) {
                let next = mate[y];
                if next == usize::MAX || (dist[next] == dist[x] + 1 && augment(f, next, mate, dist)) {
                    mate[x] = y;
                    mate[y] = x;
                    return true;
                }
            }
            dist[x] = usize::MAX;
            false
        }
        for &x in left {
            if mate[x] == FREE {
                augment(f, x, &mut mate, &mut dist);
            }
        }
    }
}

fn covers(f: &Graph, side: &[Vertex]) -> bool {
    let mate = hopcroft_karp(f, side);
    side.iter().all(|&x| mate[x] != usize::MAX)
}

/// Either a matching covering `side`, or an inclusion-minimal Hall violator.
pub fn bipartite_matching_or_violator(f: &Graph, side: &[Vertex]) -> Result<HallCertificate, MatchingError> {
    let mut in_side = vec![false; f.n()];
    for &x in side {
        in_side[x] = true;
    }
    for &(u, v) in f.edges() {
        match (in_side[u], in_side[v]) {
            (true, true) => return Err(MatchingError::SideNotIndependent(u, v)),
            (false, false) => return Err(MatchingError::OtherSideNotIndependent(u, v)),
            _ => {}
        }
    }
    let mut side: Vec<Vertex> = side.to_vec();
    side.sort_unstable();
    side.dedup();
    let mate = hopcroft_karp(f, &side);
    let Some(&x0) = side.iter().find(|&&x| mate[x] == usize::MAX) else {
        return Ok(HallCertificate::Matching(Matching::from_mate(f, &mate)));
    };
    // Alternating reachability from a free side vertex (König): the reached
    // side vertices have one neighbour fewer than their count.
    let mut reached = vec![false; f.n()];
    reached[x0] = true;
    let mut q = VecDeque::from([x0]);
    while let Some(x) = q.pop_front() {
        for &y in f.neighbors(x) {
            if !reached[y] {
                reached[y] = true;
                let x2 = mate[y];
                debug_assert_ne!(x2, usize::MAX, "maximum matching has no augmenting path");
                if !reached[x2] {
                    reached[x2] = true;
                    q.push_back(x2);
                }
            }
        }
    }
    let mut s: Vec<Vertex> = side.iter().copied().filter(|&x| reached[x]).collect();
    // Drop elements while the rest still cannot be covered; the result has no
    // coverable-complement subset, hence is itself a minimal violator.
    let mut i = 0;
    while i < s.len() {
        let mut without = s.clone();
        without.remove(i);
        if !covers(f, &without) {
            s = without;
        } else {
            i += 1;
        }
    }
    Ok(HallCertificate::Violator(s))
}

/// `N_F(S)` as a sorted list.
pub fn neighborhood_of(f: &Graph, s: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = s.iter().flat_map(|&x| f.neighbors(x).iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, e).unwrap()
    }

    fn brute_max_matching(g: &Graph) -> usize {
        fn go(g: &Graph, e: usize, used: &mut Vec<bool>) -> usize {
            if e == g.m() {
                return 0;
            }
            let skip = go(g, e + 1, used);
            let (u, v) = g.edge(e);
            if used[u] || used[v] {
                return skip;
            }
            used[u] = true;
            used[v] = true;
            let take = 1 + go(g, e + 1, used);
            used[u] = false;
            used[v] = false;
            skip.max(take)
        }
        go(g, 0, &mut vec![false; g.n()])
    }

    #[test]
    fn max_matching_examples() {
        assert_eq!(max_matching_general(&Graph::cycle(5)).len(), 2);
        let p = petersen();
        let m = max_matching_general(&p);
        assert!(m.is_valid(&p));
        assert_eq!(m.len(), brute_max_matching(&p));
        assert_eq!(m.len(), 5);
        assert_eq!(max_matching_general(&Graph::star(3)).len(), 1);
    }

    #[test]
    fn two_factor_examples() {
        let c = Graph::cycle(7);
        let tf = two_factor(&c).unwrap();
        assert_eq!(tf.cycle_count(), 1);
        assert!(two_factor(&Graph::star(3)).is_none());
        let tt = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        assert_eq!(two_factor(&tt).unwrap().cycle_count(), 2);
        assert!(two_factor(&petersen()).is_some());
    }

    #[test]
    fn min_cycle_examples() {
        assert_eq!(min_cycle_two_factor_bruteforce(&Graph::complete(4), 1000).unwrap().unwrap().1, 1);
        assert_eq!(min_cycle_two_factor_bruteforce(&Graph::cycle(6), 1000).unwrap().unwrap().1, 1);
        // Petersen is not Hamiltonian; its 2-factors are two 5-cycles.
        assert_eq!(min_cycle_two_factor_bruteforce(&petersen(), 1_000_000).unwrap().unwrap().1, 2);
        assert_eq!(min_cycle_two_factor_bruteforce(&Graph::complete_bipartite(2, 3), 1000).unwrap(), None);
        assert!(matches!(
            min_cycle_two_factor_bruteforce(&Graph::complete(9), 5),
            Err(FactorError::BudgetExceeded(5))
        ));
    }

    #[test]
    fn hall_examples() {
        let k22 = Graph::complete_bipartite(2, 2);
        assert!(matches!(
            bipartite_matching_or_violator(&k22, &[0, 1]).unwrap(),
            HallCertificate::Matching(m) if m.len() == 2
        ));
        let lonely = Graph::empty(2);
        assert_eq!(
            bipartite_matching_or_violator(&lonely, &[0]).unwrap(),
            HallCertificate::Violator(vec![0])
        );
        // x1..x3 = 0..3 all adjacent to t1, t2 = 3, 4
        let f = Graph::complete_bipartite(3, 2);
        let HallCertificate::Violator(s) = bipartite_matching_or_violator(&f, &[0, 1, 2]).unwrap() else {
            panic!("expected violator");
        };
        assert_eq!(s, vec![0, 1, 2]);
        for drop in 0..3 {
            let sub: Vec<usize> = s.iter().copied().filter(|&x| x != drop).collect();
            assert!(neighborhood_of(&f, &sub).len() >= sub.len());
        }
        assert!(bipartite_matching_or_violator(&Graph::cycle(3), &[0]).is_err());
        assert!(bipartite_matching_or_violator(&Graph::path(2), &[0, 1]).is_err());
    }
}
