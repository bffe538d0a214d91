//! Deterministic graph families for experiments and tests.

use crate::closure::find_claw;
use crate::degree::build_extremal;
use crate::graph::{canonical_form, find_isomorphism, Graph, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CorpusSpec {
    /// All connected triangle-free graphs with `1..=max_edges` edges, one
    /// per isomorphism class.
    TriangleFree { max_edges: usize },
    /// `count` claw-free graphs with orders cycling through `min_n..=max_n`.
    ClawFree {
        min_n: usize,
        max_n: usize,
        p: f64,
        count: usize,
        seed: u64,
    },
    /// `G_1, .., G_kmax`.
    Extremal { kmax: usize },
    /// Plain `G(n, p)` samples with orders cycling through `min_n..=max_n`.
    Gnp {
        min_n: usize,
        max_n: usize,
        p: f64,
        count: usize,
        seed: u64,
    },
}

pub fn generate_corpus(spec: &CorpusSpec) -> Vec<Graph> {
    match *spec {
        CorpusSpec::TriangleFree { max_edges } => triangle_free_connected(max_edges),
        CorpusSpec::ClawFree {
            min_n,
            max_n,
            p,
            count,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            orders(min_n, max_n, count)
                .map(|n| random_claw_free(&mut rng, n, p))
                .collect()
        }
        CorpusSpec::Extremal { kmax } => (1..=kmax).map(build_extremal).collect(),
        CorpusSpec::Gnp {
            min_n,
            max_n,
            p,
            count,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            orders(min_n, max_n, count).map(|n| gnp(&mut rng, n, p)).collect()
        }
    }
}

fn orders(min_n: usize, max_n: usize, count: usize) -> impl Iterator<Item = usize> {
    let span = max_n.saturating_sub(min_n) + 1;
    (0..count).map(move |i| min_n + i % span)
}

pub fn gnp(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
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

/// `G(n, p)`, then delete the edge from a claw's center to its first leaf
/// until no claw remains.
pub fn random_claw_free(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = gnp(rng, n, p);
    while let Some(c) = find_claw(&g) {
        let drop = (c.center.min(c.leaves[0]), c.center.max(c.leaves[0]));
        g = Graph::simple(n, g.edges().iter().copied().filter(|&e| e != drop));
    }
    g
}

fn certificate_marking(g: &Graph, marked: &[Vertex]) -> Vec<u64> {
    let mut colors = vec![0u32; g.n()];
    for &v in marked {
        colors[v] = 1;
    }
    canonical_form(g, &colors).certificate
}

/// Edges whose removal keeps the graph connected, after dropping a leaf the
/// removal may isolate.
fn deletable(g: &Graph) -> Vec<usize> {
    (0..g.m())
        .filter(|&e| {
            let (a, b) = g.edge(e);
            g.degree(a) == 1 || g.degree(b) == 1 || !is_bridge(g, e)
        })
        .collect()
}

fn is_bridge(g: &Graph, e: usize) -> bool {
    let (a, b) = g.edge(e);
    let mut seen = vec![false; g.n()];
    seen[a] = true;
    let mut stack = vec![a];
    while let Some(u) = stack.pop() {
        for (&w, &f) in g.neighbors(u).iter().zip(g.incident_edges(u)) {
            if f != e && !seen[w] {
                if w == b {
                    return false;
                }
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    true
}

/// Canonical augmentation: a child is kept when its new edge lies in the
/// automorphism orbit of the child's canonical deletable edge; siblings from
/// one parent are deduplicated by certificate.
pub fn triangle_free_connected(max_edges: usize) -> Vec<Graph> {
    if max_edges == 0 {
        return Vec::new();
    }
    let mut out = vec![Graph::complete(2)];
    let mut layer = vec![Graph::complete(2)];
    for _ in 1..max_edges {
        let mut next = Vec::new();
        for p in &layer {
            let mut siblings = HashSet::new();
            for (child, (u, v)) in augmentations(p) {
                if !is_canonical_child(&child, u, v) {
                    continue;
                }
                let cert = canonical_form(&child, &vec![0; child.n()]).certificate;
                if siblings.insert(cert) {
                    next.push(child);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn augmentations(p: &Graph) -> Vec<(Graph, (Vertex, Vertex))> {
    let n = p.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !p.has_edge(u, v) && p.neighbor_set(u).is_disjoint(p.neighbor_set(v)) {
                out.push((p.with_edges([(u, v)]), (u, v)));
            }
        }
    }
    for u in 0..n {
        let edges: Vec<(Vertex, Vertex)> = p.edges().iter().copied().chain([(u, n)]).collect();
        out.push((Graph::simple(n + 1, edges), (u, n)));
    }
    out
}

fn is_canonical_child(g: &Graph, u: Vertex, v: Vertex) -> bool {
    let lab = canonical_form(g, &vec![0; g.n()]).labeling;
    let best = deletable(g)
        .into_iter()
        .min_by_key(|&e| {
            let (a, b) = g.edge(e);
            (lab[a].min(lab[b]), lab[a].max(lab[b]))
        })
        .expect("connected graphs with an edge have a deletable edge");
    let (a, b) = g.edge(best);
    certificate_marking(g, &[a, b]) == certificate_marking(g, &[u, v])
}

/// Reference generator: extend every graph of the previous layer in every
/// way and keep a child only if no kept graph is isomorphic to it.
pub fn triangle_free_connected_naive(max_edges: usize) -> Vec<Graph> {
    if max_edges == 0 {
        return Vec::new();
    }
    let mut out = vec![Graph::complete(2)];
    let mut layer = vec![Graph::complete(2)];
    for _ in 1..max_edges {
        let mut next: Vec<Graph> = Vec::new();
        for p in &layer {
            for (child, _) in augmentations(p) {
                let key = degree_key(&child);
                if !next
                    .iter()
                    .any(|q| degree_key(q) == key && find_isomorphism(q, &child).is_some())
                {
                    next.push(child);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn degree_key(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}
