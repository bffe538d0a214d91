//! Canonical labelling by individualisation-refinement, and a direct
//! backtracking isomorphism search.
//!
//! The canonical form explores the full search tree except for siblings that
//! are twins (same neighbourhood up to each other); swapping twins is an
//! automorphism that fixes the current colouring, so their subtrees produce
//! the same certificates. This is adequate for the sparse desk-scale graphs
//! the corpus generator works with.

use super::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    /// Equal certificates iff the coloured graphs are isomorphic.
    pub certificate: Vec<u64>,
}

/// Canonical form of `g` with an initial vertex colouring (pass all zeros for
/// an uncoloured graph).
pub fn canonical_form(g: &Graph, colors: &[u32]) -> CanonicalForm {
    assert_eq!(colors.len(), g.n());
    let initial = rank(colors.iter().map(|&c| vec![c as u64]).collect());
    let refined = refine(g, initial);
    let mut best: Option<CanonicalForm> = None;
    search(g, colors, refined, &mut best);
    best.unwrap_or(CanonicalForm {
        labeling: Vec::new(),
        certificate: vec![0],
    })
}

fn rank(sigs: Vec<Vec<u64>>) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u64>> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(&s).expect("present") as u32)
        .collect()
}

fn class_count(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}

fn refine(g: &Graph, mut colors: Vec<u32>) -> Vec<u32> {
    loop {
        let before = class_count(&colors);
        let sigs = (0..g.n())
            .map(|v| {
                let mut s: Vec<u64> = g.neighbors(v).iter().map(|&w| colors[w] as u64).collect();
                s.sort_unstable();
                s.insert(0, colors[v] as u64);
                s
            })
            .collect();
        colors = rank(sigs);
        if class_count(&colors) == before {
            return colors;
        }
    }
}

fn are_twins(g: &Graph, a: Vertex, b: Vertex) -> bool {
    let na = g.neighbors(a).iter().filter(|&&x| x != b);
    let nb = g.neighbors(b).iter().filter(|&&x| x != a);
    na.eq(nb)
}

fn search(g: &Graph, base_colors: &[u32], colors: Vec<u32>, best: &mut Option<CanonicalForm>) {
    let n = g.n();
    let classes = class_count(&colors);
    if classes == n {
        let cert = certificate(g, base_colors, &colors);
        if best.as_ref().is_none_or(|b| cert < b.certificate) {
            *best = Some(CanonicalForm {
                labeling: colors.iter().map(|&c| c as usize).collect(),
                certificate: cert,
            });
        }
        return;
    }
    let mut sizes = vec![0usize; classes];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let target = (0..classes)
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))
        .expect("non-discrete colouring has a non-singleton cell") as u32;
    let cell: Vec<Vertex> = (0..n).filter(|&v| colors[v] == target).collect();
    let mut tried: Vec<Vertex> = Vec::new();
    for &v in &cell {
        if tried.iter().any(|&u| are_twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let split = (0..n)
            .map(|u| {
                let c = 2 * colors[u] as u64;
                vec![if colors[u] == target && u != v { c + 1 } else { c }]
            })
            .collect();
        search(g, base_colors, refine(g, rank(split)), best);
    }
}

fn certificate(g: &Graph, base_colors: &[u32], lab: &[u32]) -> Vec<u64> {
    let n = g.n();
    let mut inv = vec![0usize; n];
    for v in 0..n {
        inv[lab[v] as usize] = v;
    }
    let mut cert = vec![n as u64];
    cert.extend(inv.iter().map(|&v| base_colors[v] as u64));
    let mut word = 0u64;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            word = (word << 1) | g.has_edge(inv[i], inv[j]) as u64;
            bits += 1;
            if bits == 64 {
                cert.push(word);
                word = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        cert.push(word << (64 - bits));
    }
    cert
}

/// Finds `f` with `a.has_edge(u, v) == b.has_edge(f[u], f[v])`, by direct
/// backtracking (no canonical labelling involved).
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<Vertex>> {
    let n = a.n();
    if n != b.n() || a.m() != b.m() {
        return None;
    }
    let da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    let (mut sa, mut sb) = (da.clone(), db.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    // Visit `a` in BFS order so each new vertex has mapped neighbours.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut i = order.len() - 1;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in a.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        a: &Graph,
        b: &Graph,
        order: &[Vertex],
        i: usize,
        da: &[usize],
        db: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let u = order[i];
        for c in 0..b.n() {
            if used[c] || da[u] != db[c] {
                continue;
            }
            let consistent = order[..i]
                .iter()
                .all(|&p| a.has_edge(u, p) == b.has_edge(c, map[p]));
            if !consistent {
                continue;
            }
            map[u] = c;
            used[c] = true;
            if go(a, b, order, i + 1, da, db, map, used) {
                return true;
            }
            used[c] = false;
            map[u] = usize::MAX;
        }
        false
    }
    let ok = go(a, b, &order, 0, &da, &db, &mut map, &mut used);
    ok.then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
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

    #[test]
    fn canonical_form_is_invariant_under_relabelling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..9);
            let g = random_graph(&mut rng, n, 0.4);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permuted(&perm);
            let zero = vec![0; n];
            assert_eq!(
                canonical_form(&g, &zero).certificate,
                canonical_form(&h, &zero).certificate
            );
            assert!(find_isomorphism(&g, &h).is_some());
        }
    }

    #[test]
    fn canonical_form_separates_non_isomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(2..8);
            let g = random_graph(&mut rng, n, 0.5);
            let h = random_graph(&mut rng, n, 0.5);
            let zero = vec![0; n];
            let same = canonical_form(&g, &zero).certificate == canonical_form(&h, &zero).certificate;
            assert_eq!(same, find_isomorphism(&g, &h).is_some());
        }
    }

    #[test]
    fn isomorphism_is_a_bijection_preserving_edges() {
        let g = Graph::cycle(6);
        let h = Graph::new(6, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]).unwrap();
        let f = find_isomorphism(&g, &h).unwrap();
        for &(u, v) in g.edges() {
            assert!(h.has_edge(f[u], f[v]));
        }
        assert!(find_isomorphism(&Graph::cycle(6), &Graph::cycle(3).disjoint_union(&Graph::cycle(3))).is_none());
    }

    #[test]
    fn star_is_fast_with_twin_pruning() {
        let g = Graph::star(12);
        let f = canonical_form(&g, &[0; 13]);
        assert_eq!(f.labeling.len(), 13);
    }

    #[test]
    fn colours_distinguish_marked_edges() {
        // In P_4 the two end edges are equivalent, the middle one is not.
        let g = Graph::path(4);
        let mark = |a: usize, b: usize| {
            let mut c = vec![0u32; 4];
            c[a] = 1;
            c[b] = 1;
            canonical_form(&g, &c).certificate
        };
        assert_eq!(mark(0, 1), mark(2, 3));
        assert_ne!(mark(0, 1), mark(1, 2));
    }
}
