//! Exact evaluation of the degree hypotheses: the minimum degree sum over
//! independent sets of a given order, the independent-set degree condition,
//! the independence number, and the extremal family `G_k`.

use crate::bitset::VertexSet;
use crate::graph::{Graph, Vertex};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("search exceeded its node budget of {0}")]
    BudgetExceeded(u64),
    #[error("k must be positive")]
    ZeroK,
}

/// A degree sum, or infinity when no independent set of the requested order
/// exists. Serialised as an integer or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sigma {
    Finite(u64),
    Infinite,
}

impl Sigma {
    pub fn at_least(self, n: u64) -> bool {
        match self {
            Sigma::Finite(v) => v >= n,
            Sigma::Infinite => true,
        }
    }
}

impl std::fmt::Display for Sigma {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sigma::Finite(v) => write!(f, "{v}"),
            Sigma::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Sigma {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Sigma::Finite(v) => s.serialize_u64(*v),
            Sigma::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Sigma {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Sigma::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Sigma::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad sigma value {s:?}"))),
        }
    }
}

struct IndependentSearch<'g> {
    g: &'g Graph,
    cur: Vec<Vertex>,
    best: Vec<Vertex>,
    target: usize,
}

impl IndependentSearch<'_> {
    fn done(&self) -> bool {
        self.best.len() >= self.target
    }

    fn run(&mut self, cand: VertexSet) {
        if self.done() || self.cur.len() + cand.len() <= self.best.len() {
            return;
        }
        if self.target != usize::MAX && self.cur.len() + cand.len() < self.target {
            return;
        }
        if cand.is_empty() || self.cur.len() >= self.target {
            self.best = self.cur.clone();
            return;
        }
        let (v, d) = cand
            .iter()
            .map(|v| (v, self.g.neighbor_set(v).intersection_len(&cand)))
            .min_by_key(|&(v, d)| (d, v))
            .expect("non-empty");
        if d <= 1 {
            // Some maximum independent set contains a vertex of degree <= 1.
            self.take(v, &cand);
            return;
        }
        let u = cand
            .iter()
            .max_by_key(|&u| (self.g.neighbor_set(u).intersection_len(&cand), std::cmp::Reverse(u)))
            .expect("non-empty");
        self.take(u, &cand);
        let mut without = cand;
        without.remove(u);
        self.run(without);
    }

    fn take(&mut self, v: Vertex, cand: &VertexSet) {
        let mut next = cand.difference(self.g.neighbor_set(v));
        next.remove(v);
        self.cur.push(v);
        self.run(next);
        self.cur.pop();
    }
}

/// A maximum independent set, sorted.
pub fn max_independent_set(g: &Graph) -> Vec<Vertex> {
    max_independent_set_within(g, &g.vertex_set())
}

pub fn max_independent_set_within(g: &Graph, within: &VertexSet) -> Vec<Vertex> {
    let mut s = IndependentSearch {
        g,
        cur: Vec::new(),
        best: Vec::new(),
        target: usize::MAX,
    };
    s.run(within.clone());
    s.best.sort_unstable();
    s.best
}

pub fn independence_number(g: &Graph) -> usize {
    max_independent_set(g).len()
}

/// An independent set of exactly `size` vertices inside `within`, if one exists.
pub fn independent_set_of_size(g: &Graph, within: &VertexSet, size: usize) -> Option<Vec<Vertex>> {
    if size == 0 {
        return Some(Vec::new());
    }
    let mut s = IndependentSearch {
        g,
        cur: Vec::new(),
        best: Vec::new(),
        target: size,
    };
    s.run(within.clone());
    (s.best.len() >= size).then(|| {
        let mut set = s.best[..size].to_vec();
        set.sort_unstable();
        set
    })
}

/// Exact minimum degree sum over independent sets of order `k`, together with
/// a minimising set (sorted); `Infinite` with no set when `alpha(g) < k`.
pub fn sigma_k_with_set(
    g: &Graph,
    k: usize,
    budget: u64,
) -> Result<(Sigma, Option<Vec<Vertex>>), DegreeError> {
    if k == 0 {
        return Err(DegreeError::ZeroK);
    }
    if independence_number(g) < k {
        return Ok((Sigma::Infinite, None));
    }
    let n = g.n();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let h = g.permuted(&pos);
    let degs: Vec<u64> = order.iter().map(|&v| g.degree(v) as u64).collect();

    struct Ctx<'a> {
        h: &'a Graph,
        degs: &'a [u64],
        k: usize,
        budget: u64,
        nodes: u64,
        chosen: Vec<usize>,
        best: Option<(u64, Vec<usize>)>,
    }
    fn rec(c: &mut Ctx, cand: VertexSet, sum: u64) -> Result<(), DegreeError> {
        c.nodes += 1;
        if c.nodes > c.budget {
            return Err(DegreeError::BudgetExceeded(c.budget));
        }
        let r = c.k - c.chosen.len();
        if r == 0 {
            if c.best.as_ref().is_none_or(|b| sum < b.0) {
                c.best = Some((sum, c.chosen.clone()));
            }
            return Ok(());
        }
        if cand.len() < r {
            return Ok(());
        }
        let lb = sum + cand.iter().take(r).map(|p| c.degs[p]).sum::<u64>();
        if c.best.as_ref().is_some_and(|b| lb >= b.0) {
            return Ok(());
        }
        let list: Vec<usize> = cand.iter().collect();
        for (i, &p) in list.iter().enumerate() {
            if list.len() - i < r {
                break;
            }
            // Later candidates have degree >= degs[p].
            if c.best.as_ref().is_some_and(|b| sum + c.degs[p] * r as u64 >= b.0) {
                break;
            }
            let mut rest = VertexSet::from_iter_n(c.h.n(), list[i + 1..].iter().copied());
            rest.difference_with(c.h.neighbor_set(p));
            c.chosen.push(p);
            rec(c, rest, sum + c.degs[p])?;
            c.chosen.pop();
        }
        Ok(())
    }

    let mut ctx = Ctx {
        h: &h,
        degs: &degs,
        k,
        budget,
        nodes: 0,
        chosen: Vec::new(),
        best: None,
    };
    rec(&mut ctx, h.vertex_set(), 0)?;
    Ok(match ctx.best {
        Some((sum, set)) => {
            let mut set: Vec<Vertex> = set.into_iter().map(|p| order[p]).collect();
            set.sort_unstable();
            (Sigma::Finite(sum), Some(set))
        }
        None => (Sigma::Infinite, None),
    })
}

pub fn sigma_k(g: &Graph, k: usize) -> Result<Sigma, DegreeError> {
    sigma_k_with_set(g, k, DEFAULT_NODE_BUDGET).map(|r| r.0)
}

/// Checks that every independent set `I` satisfies `|I| <= min_deg(I) - 1`.
///
/// Reduction: the condition fails iff some vertex `v` has an independent set
/// of size `d(v) - 1` outside its closed neighbourhood; adding `v` gives a
/// violating set whose minimum degree is at most `d(v)`. Vertices are tried
/// in order of ascending degree, ties by id.
pub fn check_degree_condition(g: &Graph) -> (bool, Option<Vec<Vertex>>) {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    for v in order {
        let d = g.degree(v);
        let mut outside = g.vertex_set();
        outside.difference_with(g.neighbor_set(v));
        outside.remove(v);
        if let Some(mut set) = independent_set_of_size(g, &outside, d.saturating_sub(1)) {
            set.push(v);
            set.sort_unstable();
            return (false, Some(set));
        }
    }
    (true, None)
}

/// Minimum degree over a vertex set (`None` when empty).
pub fn min_degree_of(g: &Graph, set: &[Vertex]) -> Option<usize> {
    set.iter().map(|&v| g.degree(v)).min()
}

/// The hypotheses for a given `k`, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub k: usize,
    pub n: usize,
    pub sigma_value: Sigma,
    pub sigma_ok: bool,
    pub degree_condition_ok: bool,
    pub violating_set: Option<Vec<Vertex>>,
    pub alpha: usize,
    pub min_degree: Option<usize>,
}

impl HypothesisReport {
    pub fn compute(g: &Graph, k: usize, budget: u64) -> Result<Self, DegreeError> {
        let (sigma_value, _) = sigma_k_with_set(g, k + 1, budget)?;
        let (degree_condition_ok, violating_set) = check_degree_condition(g);
        Ok(HypothesisReport {
            k,
            n: g.n(),
            sigma_value,
            sigma_ok: sigma_value.at_least(g.n() as u64),
            degree_condition_ok,
            violating_set,
            alpha: independence_number(g),
            min_degree: g.min_degree(),
        })
    }

    pub fn both_hold(&self) -> bool {
        self.sigma_ok && self.degree_condition_ok
    }
}

/// The sharpness family `G_k`: a clique `H_0` on `k + 3` vertices
/// `v_1..v_{k+3}` (ids `0..k+3`) and `k` further cliques `H_1..H_k` on
/// `k + 2` vertices each, with every vertex of `H_i` joined to `v_i`.
/// `H_i` occupies ids `k + 3 + (i - 1)(k + 2) ..`.
pub fn build_extremal(k: usize) -> Graph {
    assert!(k >= 1, "k must be positive");
    let n = k * k + 3 * k + 3;
    let mut edges = Vec::new();
    for a in 0..k + 3 {
        for b in a + 1..k + 3 {
            edges.push((a, b));
        }
    }
    for i in 1..=k {
        let base = k + 3 + (i - 1) * (k + 2);
        for a in base..base + k + 2 {
            edges.push((i - 1, a));
            for b in a + 1..base + k + 2 {
                edges.push((a, b));
            }
        }
    }
    Graph::simple(n, edges)
}

/// The cut vertices `v_1..v_k` of [`build_extremal`].
pub fn extremal_cut_vertices(k: usize) -> Vec<Vertex> {
    (0..k).collect()
}
