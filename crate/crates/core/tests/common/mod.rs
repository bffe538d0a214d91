//! Naive oracles shared by the integration tests. Each one enumerates
//! directly and shares no code with the library beyond `Graph` accessors.
#![allow(dead_code)]

use clawfactor_core::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                e.push((u, v));
            }
        }
    }
    Graph::simple(n, e)
}

fn adj_masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// Every non-empty independent set, as bitmasks.
pub fn independent_sets(g: &Graph) -> Vec<u64> {
    let n = g.n();
    assert!(n <= 20);
    let adj = adj_masks(g);
    (1u64..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .collect()
}

/// Minimum degree sum over independent sets of size `k`; `None` when there
/// is no such set.
pub fn sigma(g: &Graph, k: usize) -> Option<usize> {
    independent_sets(g)
        .into_iter()
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..g.n()).filter(|&v| s >> v & 1 == 1).map(|v| g.degree(v)).sum())
        .min()
}

/// Every independent set `I` has `|I| <= min degree over I - 1`.
pub fn degree_condition(g: &Graph) -> bool {
    independent_sets(g).into_iter().all(|s| {
        let md = (0..g.n()).filter(|&v| s >> v & 1 == 1).map(|v| g.degree(v)).min().unwrap();
        (s.count_ones() as usize) < md
    })
}

pub fn max_matching(g: &Graph) -> usize {
    fn go(g: &Graph, v: usize, used: &mut Vec<bool>) -> usize {
        if v == g.n() {
            return 0;
        }
        if used[v] {
            return go(g, v + 1, used);
        }
        used[v] = true;
        let mut best = go(g, v + 1, used);
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(g, v + 1, used));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    go(g, 0, &mut vec![false; g.n()])
}

fn components_of(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut c = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            c -= 1;
        }
    }
    c
}

/// Calls `visit` with the edge list of every 2-regular spanning subgraph
/// (possibly more than once); stops when `visit` returns false.
fn two_regular(g: &Graph, visit: &mut dyn FnMut(&[(usize, usize)]) -> bool) {
    fn go(
        g: &Graph,
        deg: &mut Vec<usize>,
        chosen: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&[(usize, usize)]) -> bool,
    ) -> bool {
        let Some(v) = (0..g.n()).find(|&v| deg[v] < 2) else {
            return visit(chosen);
        };
        for &w in g.neighbors(v) {
            let e = (v.min(w), v.max(w));
            if deg[w] < 2 && !chosen.contains(&e) {
                // Take v's edges in increasing order of the other end.
                if deg[v] == 1 {
                    let prev = chosen.iter().rev().find(|&&(a, b)| a == v || b == v).unwrap();
                    let other = if prev.0 == v { prev.1 } else { prev.0 };
                    if w < other {
                        continue;
                    }
                }
                deg[v] += 1;
                deg[w] += 1;
                chosen.push(e);
                let more = go(g, deg, chosen, visit);
                chosen.pop();
                deg[v] -= 1;
                deg[w] -= 1;
                if !more {
                    return false;
                }
            }
        }
        true
    }
    if g.n() == 0 {
        return;
    }
    go(g, &mut vec![0; g.n()], &mut Vec::new(), visit);
}

pub fn has_two_factor(g: &Graph) -> bool {
    let mut found = false;
    two_regular(g, &mut |_| {
        found = true;
        false
    });
    found
}

/// Fewest cycles over all 2-factors.
pub fn min_two_factor_cycles(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    two_regular(g, &mut |edges| {
        let c = components_of(g.n(), edges);
        best = Some(best.map_or(c, |b| b.min(c)));
        best != Some(1)
    });
    best
}

/// Held-Karp over subsets; graphs with fewer than three vertices are not
/// Hamiltonian.
pub fn hamiltonian(g: &Graph) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    assert!(n <= 22);
    let adj = adj_masks(g);
    // reach[mask] = set of end vertices of paths from 0 covering mask.
    let mut reach = vec![0u64; 1 << n];
    reach[1] = 1;
    for mask in 1usize..1 << n {
        if mask & 1 == 0 || reach[mask] == 0 {
            continue;
        }
        let ends = reach[mask];
        for v in 0..n {
            if ends >> v & 1 == 1 {
                let mut nxt = adj[v] & !(mask as u64);
                while nxt != 0 {
                    let w = nxt.trailing_zeros() as usize;
                    nxt &= nxt - 1;
                    reach[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }
    reach[(1 << n) - 1] & adj[0] != 0
}

/// Whether `part` induces K_1, K_2, or a Hamiltonian graph; cliques of
/// order at least three are Hamiltonian without search.
pub fn admissible_part(g: &Graph, part: &[usize]) -> bool {
    match part.len() {
        0 => false,
        1 => true,
        2 => g.has_edge(part[0], part[1]),
        _ => {
            let sub = g.induced_subgraph(part);
            sub.m() == part.len() * (part.len() - 1) / 2 || hamiltonian(&sub)
        }
    }
}
