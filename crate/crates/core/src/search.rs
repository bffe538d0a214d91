//! Improvement search for dominating systems of bounded cardinality.
//!
//! The state is a valid dominating system; every accepted move strictly
//! lowers the objective (cardinality, then more covered edges). The moves
//! are the normalisations, cycle absorption, the star-leaf matching case, the
//! Hall-violator star swap and the injection argument that either redirects
//! to another move or yields a matching of `H` that violates the
//! independent-set degree condition in `L(H)`. When the moves stall above the
//! target the exhaustive search decides.

use crate::bitset::VertexSet;
use crate::domsys::{
    min_system_exhaustive, two_factor_to_system, DomSearchError, DominatingSystem, Mode, Objective, Star,
    DEFAULT_SYSTEM_BUDGET,
};
use crate::graph::{enumerate_cycles, girth, ClosedTrail, Cycle, EdgeId, Graph, Vertex};
use crate::linegraph::{line_graph, RootCorrespondence};
use crate::matching::{bipartite_matching_or_violator, neighborhood_of, two_factor, HallCertificate, Matching};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("the line graph has no 2-factor, so there is no dominating system to start from")]
    NoTwoFactor,
    #[error("exhaustive fallback exceeded {0} nodes")]
    BudgetExceeded(u64),
}

impl From<DomSearchError> for SearchError {
    fn from(e: DomSearchError) -> Self {
        match e {
            DomSearchError::BudgetExceeded(b) => SearchError::BudgetExceeded(b),
        }
    }
}

// ---------------------------------------------------------------- normalise

/// One repair: merge two trails sharing a vertex, merge two stars with the
/// same center, or drop a star centred on a trail.
pub fn normalize_step(h: &Graph, ds: &DominatingSystem) -> Option<DominatingSystem> {
    let sets: Vec<VertexSet> = ds.trails.iter().map(|t| t.vertex_set(h.n())).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                let mut edges: Vec<EdgeId> = ds.trails[i].edges().to_vec();
                edges.extend_from_slice(ds.trails[j].edges());
                let merged = ClosedTrail::from_edge_set(h, &edges).ok()?;
                let mut out = ds.clone();
                out.trails.remove(j);
                out.trails[i] = merged;
                return Some(out);
            }
        }
    }
    for i in 0..ds.stars.len() {
        for j in i + 1..ds.stars.len() {
            if ds.stars[i].center == ds.stars[j].center {
                let mut out = ds.clone();
                let other = out.stars.remove(j);
                let mut edges = out.stars[i].edges.clone();
                edges.extend(other.edges);
                out.stars[i] = Star::new(other.center, edges);
                return Some(out);
            }
        }
    }
    let on_trail = ds.trail_vertices(h);
    if let Some(i) = ds.stars.iter().position(|s| on_trail.contains(s.center)) {
        let mut out = ds.clone();
        out.stars.remove(i);
        return Some(out);
    }
    None
}

/// Applies repairs until trails are pairwise vertex-disjoint, star centers
/// are distinct and no center lies on a trail.
pub fn normalize(h: &Graph, ds: &DominatingSystem) -> DominatingSystem {
    let mut cur = ds.clone();
    while let Some(next) = normalize_step(h, &cur) {
        cur = next;
    }
    cur
}

pub fn is_normalized(h: &Graph, ds: &DominatingSystem) -> bool {
    normalize_step(h, ds).is_none()
}

// ------------------------------------------------------------------- cycles

fn trail_hits(ds: &DominatingSystem, edges: &[EdgeId]) -> Vec<usize> {
    ds.trails
        .iter()
        .map(|t| t.edges().iter().filter(|e| edges.contains(e)).count())
        .collect()
}

/// Whether `c` has at most one edge in every trail.
pub fn cycle_is_light(h: &Graph, ds: &DominatingSystem, c: &Cycle) -> bool {
    trail_hits(ds, &c.edge_ids(h)).iter().all(|&k| k <= 1)
}

/// Replaces the trails meeting `c` and the stars centred on `c` by the
/// symmetric difference of `E(c)` with those trails. `None` if `c` has two
/// edges in one trail, touches nothing, or the result is not a valid strict
/// improvement.
pub fn improve_by_cycle(h: &Graph, ds: &DominatingSystem, c: &Cycle) -> Option<DominatingSystem> {
    let cyc = c.edge_ids(h);
    if !trail_hits(ds, &cyc).iter().all(|&k| k <= 1) {
        return None;
    }
    let on_c = VertexSet::from_iter_n(h.n(), c.vertices().iter().copied());
    let touched: Vec<bool> = ds
        .trails
        .iter()
        .map(|t| t.walk().iter().any(|&v| on_c.contains(v)))
        .collect();
    let star_touched: Vec<bool> = ds.stars.iter().map(|s| on_c.contains(s.center)).collect();
    if !touched.iter().chain(&star_touched).any(|&b| b) {
        return None;
    }
    let mut set = VertexSet::from_iter_n(h.m(), cyc.iter().copied());
    for (t, _) in ds.trails.iter().zip(&touched).filter(|p| *p.1) {
        set.symmetric_difference_with(&VertexSet::from_iter_n(h.m(), t.edges().iter().copied()));
    }
    let edges: Vec<EdgeId> = set.iter().collect();
    let merged = ClosedTrail::from_edge_set(h, &edges).ok()?;
    let mut trails: Vec<ClosedTrail> = ds
        .trails
        .iter()
        .zip(&touched)
        .filter(|p| !*p.1)
        .map(|p| p.0.clone())
        .collect();
    trails.push(merged);
    let stars = ds
        .stars
        .iter()
        .zip(&star_touched)
        .filter(|p| !*p.1)
        .map(|p| p.0.clone())
        .collect();
    let out = DominatingSystem {
        trails,
        stars,
        mode: ds.mode,
    };
    (out.is_valid(h) && out.objective() < ds.objective()).then_some(out)
}

/// Cycles of length at most `cap`, shortest first, then by vertex sequence.
fn cycles_by_length(h: &Graph, cap: usize) -> Vec<Cycle> {
    let mut cs: Vec<Cycle> = enumerate_cycles(h, cap).collect();
    cs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.vertices().cmp(b.vertices())));
    cs
}

/// The first improving cycle of length at most `cap`.
pub fn scan_cycles(h: &Graph, ds: &DominatingSystem, cap: usize) -> Option<(Cycle, DominatingSystem)> {
    cycles_by_length(h, cap)
        .into_iter()
        .find_map(|c| improve_by_cycle(h, ds, &c).map(|d| (c, d)))
}

// --------------------------------------------------------- star leaves / F

/// Bipartite graph between star centers `X` and the star leaves `T` that lie
/// neither on a trail nor in `X`, stored over the host's vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarLeafBipartite {
    pub centers: Vec<Vertex>,
    pub leaves: Vec<Vertex>,
    pub graph: Graph,
}

impl StarLeafBipartite {
    /// Expects a normalised system (distinct centers).
    pub fn build(h: &Graph, ds: &DominatingSystem) -> Self {
        let on_trail = ds.trail_vertices(h);
        let mut centers: Vec<Vertex> = ds.stars.iter().map(|s| s.center).collect();
        centers.sort_unstable();
        let mut edges = Vec::new();
        let mut leaves = Vec::new();
        for s in &ds.stars {
            for l in s.leaves(h) {
                if !on_trail.contains(l) && centers.binary_search(&l).is_err() {
                    edges.push((s.center, l));
                    leaves.push(l);
                }
            }
        }
        leaves.sort_unstable();
        leaves.dedup();
        StarLeafBipartite {
            centers,
            leaves,
            graph: Graph::simple(h.n(), edges),
        }
    }

    pub fn hall(&self) -> HallCertificate {
        bipartite_matching_or_violator(&self.graph, &self.centers)
            .expect("centers and leaves are disjoint and each side is independent in F")
    }

    pub fn neighbors_in(&self, t: Vertex, s: &[Vertex]) -> Vec<Vertex> {
        self.graph.neighbors(t).iter().copied().filter(|x| s.contains(x)).collect()
    }
}

/// Extends a matching of `F` covering `X` by the smallest edge of every
/// trail and looks for a light cycle among the matched vertices.
pub fn case1_move(h: &Graph, ds: &DominatingSystem, f: &StarLeafBipartite, m: &Matching) -> Option<Cycle> {
    let mut ends = Vec::new();
    for &e in &m.edges {
        let (a, b) = f.graph.edge(e);
        ends.extend([a, b]);
    }
    for t in &ds.trails {
        let e = *t.edges().iter().min().expect("trails are non-empty");
        let (a, b) = h.edge(e);
        ends.extend([a, b]);
    }
    let k = ends.len();
    ends.sort_unstable();
    ends.dedup();
    if ends.len() != k {
        return None;
    }
    let sub = h.induced_subgraph(&ends);
    cycles_by_length(&sub, sub.n())
        .into_iter()
        .filter_map(|c| Cycle::new(h, c.vertices().iter().map(|&i| ends[i]).collect()).ok())
        .find(|c| cycle_is_light(h, ds, c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Redirect {
    /// A light cycle for [`improve_by_cycle`].
    Cycle(Cycle),
    /// A Hall violator strictly inside the current one.
    SmallerViolator(Vec<Vertex>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("some leaf of N_F(S) has fewer than three neighbours in S")]
    NotApplicable,
    #[error("the violator is not independent in the host")]
    ClaimViolation(Redirect),
    #[error("the move produced an invalid or non-improving system")]
    Rejected,
}

/// For adjacent centers of `S`, an F-path between them closes a cycle of
/// star edges; otherwise the F-component splits `S` into two parts, one of
/// which is a smaller violator.
fn dependent_violator_redirect(h: &Graph, f: &StarLeafBipartite, s: &[Vertex]) -> Option<Redirect> {
    let (a, b) = s
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| s[i + 1..].iter().map(move |&b| (a, b)))
        .find(|&(a, b)| h.has_edge(a, b))?;
    let mut prev = vec![usize::MAX; h.n()];
    prev[a] = a;
    let mut q = std::collections::VecDeque::from([a]);
    while let Some(u) = q.pop_front() {
        for &w in f.graph.neighbors(u) {
            if prev[w] == usize::MAX {
                prev[w] = u;
                q.push_back(w);
            }
        }
    }
    if prev[b] != usize::MAX {
        let mut path = vec![b];
        while *path.last().expect("non-empty") != a {
            path.push(prev[*path.last().expect("non-empty")]);
        }
        return Cycle::new(h, path).ok().map(Redirect::Cycle);
    }
    let s1: Vec<Vertex> = s.iter().copied().filter(|&x| prev[x] != usize::MAX).collect();
    let s2: Vec<Vertex> = s.iter().copied().filter(|&x| prev[x] == usize::MAX).collect();
    [s1, s2]
        .into_iter()
        .find(|part| neighborhood_of(&f.graph, part).len() < part.len())
        .map(Redirect::SmallerViolator)
}

/// Replaces the stars centred in `S` by stars centred at the leaves
/// `N_F(S)`, and grows the other stars by their edges into `S`.
pub fn case21_move(
    h: &Graph,
    ds: &DominatingSystem,
    f: &StarLeafBipartite,
    s: &[Vertex],
) -> Result<DominatingSystem, CaseError> {
    if let Some(r) = dependent_violator_redirect(h, f, s) {
        return Err(CaseError::ClaimViolation(r));
    }
    let nfs = neighborhood_of(&f.graph, s);
    let min_leaf_degree = ds.mode.min_star_size();
    if nfs.iter().any(|&t| f.neighbors_in(t, s).len() < min_leaf_degree) {
        return Err(CaseError::NotApplicable);
    }
    let mut stars: Vec<Star> = Vec::new();
    for st in ds.stars.iter().filter(|st| !s.contains(&st.center)) {
        let mut edges = st.edges.clone();
        for &y in s {
            if let Some(e) = h.edge_id(st.center, y) {
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        stars.push(Star::new(st.center, edges));
    }
    for &t in &nfs {
        let edges = f
            .neighbors_in(t, s)
            .into_iter()
            .map(|x| h.edge_id(t, x).expect("F edges are host edges"))
            .collect();
        stars.push(Star::new(t, edges));
    }
    let out = DominatingSystem {
        trails: ds.trails.clone(),
        stars,
        mode: ds.mode,
    };
    if out.is_valid(h) && out.objective() < ds.objective() {
        Ok(out)
    } else {
        Err(CaseError::Rejected)
    }
}

// ------------------------------------------------------------------ witness

/// A matching `N` of `H` containing `xt` with `|N| >= d_H(x) + d_H(t) - 2`;
/// as vertices of `L(H)` it is an independent set `I` with `|I| >= δ(I)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub x: Vertex,
    pub t: Vertex,
    pub u: Vec<Vertex>,
    pub w: Vec<Vertex>,
    /// `(v, φ(v))` for every `v` in `U ∪ W`.
    pub phi: Vec<(Vertex, Vertex)>,
    /// Edge ids of `N` in the host, sorted.
    pub matching: Vec<EdgeId>,
}

impl ViolationWitness {
    /// Direct check in the host.
    pub fn verify(&self, h: &Graph) -> bool {
        let m = Matching {
            edges: self.matching.clone(),
        };
        let Some(xt) = h.edge_id(self.x, self.t) else {
            return false;
        };
        m.is_valid(h)
            && self.matching.contains(&xt)
            && self.matching.len() == self.u.len() + self.w.len() + 1
            && self.matching.len() + 2 >= h.degree(self.x) + h.degree(self.t)
    }

    /// `N` as vertices of the line graph.
    pub fn line_vertices(&self, corr: &RootCorrespondence) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.matching.iter().map(|&e| corr.edge_to_vertex[e]).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case22Outcome {
    Witness(ViolationWitness),
    Redirect(Redirect),
    Improved(DominatingSystem),
    /// No productive conclusion from this state.
    Stall,
}

/// The injection argument at leaf `t` (with at most two F-neighbours in `S`).
pub fn case22_witness(
    h: &Graph,
    ds: &DominatingSystem,
    f: &StarLeafBipartite,
    s: &[Vertex],
    t: Vertex,
) -> Case22Outcome {
    let Some(&x) = f.neighbors_in(t, s).iter().min() else {
        return Case22Outcome::Stall;
    };
    let u: Vec<Vertex> = h.neighbors(x).iter().copied().filter(|&v| v != t).collect();
    let w: Vec<Vertex> = h.neighbors(t).iter().copied().filter(|v| !s.contains(v)).collect();

    if u.iter().any(|&v| h.degree(v) == 1) {
        let rest: Vec<Vertex> = s.iter().copied().filter(|&y| y != x).collect();
        return if neighborhood_of(&f.graph, &rest).len() < rest.len() {
            Case22Outcome::Redirect(Redirect::SmallerViolator(rest))
        } else {
            Case22Outcome::Stall
        };
    }
    for &a in &u {
        if let Some(&b) = w.iter().find(|&&b| h.has_edge(a, b)) {
            return match Cycle::new(h, vec![t, x, a, b]) {
                Ok(c) if cycle_is_light(h, ds, &c) => Case22Outcome::Redirect(Redirect::Cycle(c)),
                _ => Case22Outcome::Stall,
            };
        }
    }

    let trail_of = |v: Vertex| ds.trails.iter().position(|tr| tr.contains_vertex(v));
    let mut phi: Vec<(Vertex, Vertex)> = Vec::new();
    for &v in u.iter().chain(&w) {
        let image = match trail_of(v) {
            Some(i) => ds.trails[i].successor(v),
            None => h.neighbors(v).iter().copied().find(|&y| y != x && y != t),
        };
        match image {
            Some(y) => phi.push((v, y)),
            None => return Case22Outcome::Stall,
        }
    }

    // Injectivity: a collision closes a cycle through x and/or t.
    for i in 0..phi.len() {
        for j in i + 1..phi.len() {
            if phi[i].1 != phi[j].1 {
                continue;
            }
            let (v1, v2, y) = (phi[i].0, phi[j].0, phi[i].1);
            let in_u = |v: Vertex| u.contains(&v);
            let mut verts = vec![v1];
            match (in_u(v1), in_u(v2)) {
                (true, true) => verts.push(x),
                (false, false) => verts.push(t),
                (true, false) => verts.extend([x, t]),
                (false, true) => verts.extend([t, x]),
            }
            verts.extend([v2, y]);
            let Ok(c) = Cycle::new(h, verts) else {
                return Case22Outcome::Stall;
            };
            if cycle_is_light(h, ds, &c) {
                return Case22Outcome::Redirect(Redirect::Cycle(c));
            }
            return match collision_merge(h, ds, &c, v1, v2, y) {
                Some(d) => Case22Outcome::Improved(d),
                None => Case22Outcome::Stall,
            };
        }
    }

    let mut matching = vec![h.edge_id(x, t).expect("F edges are host edges")];
    for &(v, y) in &phi {
        match h.edge_id(v, y) {
            Some(e) => matching.push(e),
            None => return Case22Outcome::Stall,
        }
    }
    matching.sort_unstable();
    let wit = ViolationWitness {
        x,
        t,
        u,
        w,
        phi,
        matching,
    };
    if wit.verify(h) {
        Case22Outcome::Witness(wit)
    } else {
        Case22Outcome::Stall
    }
}

/// Both `v1 y` and `v2 y` lie in one trail `D'`; the symmetric difference of
/// `D'` with the collision cycle is a closed trail replacing `D'` and every
/// star centred on it. Accepted only when valid and improving.
fn collision_merge(
    h: &Graph,
    ds: &DominatingSystem,
    c: &Cycle,
    v1: Vertex,
    v2: Vertex,
    y: Vertex,
) -> Option<DominatingSystem> {
    let e1 = h.edge_id(v1, y)?;
    let e2 = h.edge_id(v2, y)?;
    let di = ds
        .trails
        .iter()
        .position(|tr| tr.edges().contains(&e1) && tr.edges().contains(&e2))?;
    let mut set = VertexSet::from_iter_n(h.m(), ds.trails[di].edges().iter().copied());
    set.symmetric_difference_with(&VertexSet::from_iter_n(h.m(), c.edge_ids(h)));
    let edges: Vec<EdgeId> = set.iter().collect();
    let merged = ClosedTrail::from_edge_set(h, &edges).ok()?;
    let on = merged.vertex_set(h.n());
    let mut trails: Vec<ClosedTrail> = ds
        .trails
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != di)
        .map(|(_, tr)| tr.clone())
        .collect();
    trails.push(merged);
    let stars = ds.stars.iter().filter(|st| !on.contains(st.center)).cloned().collect();
    let out = DominatingSystem {
        trails,
        stars,
        mode: ds.mode,
    };
    (out.is_valid(h) && out.objective() < ds.objective()).then_some(out)
}

// --------------------------------------------------------------- main loop

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: Mode,
    /// Node budget for the exhaustive fallback.
    pub budget: u64,
    /// Cycle length cap for the scan; `None` means girth + 4.
    pub cycle_cap: Option<usize>,
    pub fallback: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: Mode::Strict,
            budget: DEFAULT_SYSTEM_BUDGET,
            cycle_cap: None,
            fallback: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCounts {
    pub normalize: usize,
    pub cycle: usize,
    pub case1: usize,
    pub case21: usize,
    pub case22: usize,
    pub redirects: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    /// Objective after the seed and after every accepted move.
    pub objectives: Vec<Objective>,
    pub moves: MoveCounts,
    /// The move set got stuck above the target.
    pub stalled: bool,
    pub fallback_used: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    System(DominatingSystem),
    Witness(ViolationWitness),
    /// The exhaustive search found no system of cardinality at most `k`;
    /// `minimum` is an optimal system when one exists.
    NoBoundedSystem {
        minimum: Option<(DominatingSystem, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub report: SearchReport,
    /// State at the moment the move set stopped, before any fallback.
    pub final_state: DominatingSystem,
}

/// Starting system: from a 2-factor of `L(h)` in strict mode, from the
/// vertex stars in relaxed mode.
pub fn seed_system(h: &Graph, mode: Mode) -> Result<DominatingSystem, SearchError> {
    match mode {
        Mode::Strict => {
            if h.m() == 0 {
                return Ok(DominatingSystem {
                    trails: vec![],
                    stars: vec![],
                    mode,
                });
            }
            let corr = line_graph(h).expect("host has edges");
            let tf = two_factor(&corr.line).ok_or(SearchError::NoTwoFactor)?;
            Ok(two_factor_to_system(&tf, &corr).expect("2-factors always pull back"))
        }
        Mode::Relaxed => Ok(DominatingSystem {
            trails: vec![],
            stars: h
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(a, _))| Star::new(a, vec![e]))
                .collect(),
            mode,
        }),
    }
}

struct Run<'a> {
    h: &'a Graph,
    ds: DominatingSystem,
    report: SearchReport,
}

impl Run<'_> {
    fn accept(&mut self, next: DominatingSystem) {
        debug_assert!(next.is_valid(self.h));
        let obj = next.objective();
        assert!(
            obj < *self.report.objectives.last().expect("seeded"),
            "accepted move must strictly improve the objective"
        );
        self.report.objectives.push(obj);
        self.ds = next;
    }

    /// One productive step; `Ok(false)` on a stall.
    fn step(&mut self, cap: usize) -> Result<Option<ViolationWitness>, ()> {
        if let Some(next) = normalize_step(self.h, &self.ds) {
            self.report.moves.normalize += 1;
            self.accept(next);
            return Ok(None);
        }
        if let Some((_, next)) = scan_cycles(self.h, &self.ds, cap) {
            self.report.moves.cycle += 1;
            self.accept(next);
            return Ok(None);
        }
        let f = StarLeafBipartite::build(self.h, &self.ds);
        let mut s = match f.hall() {
            HallCertificate::Matching(m) => {
                let c = case1_move(self.h, &self.ds, &f, &m).ok_or(())?;
                let next = improve_by_cycle(self.h, &self.ds, &c).ok_or(())?;
                self.report.moves.case1 += 1;
                self.accept(next);
                return Ok(None);
            }
            HallCertificate::Violator(s) => s,
        };
        // Each redirect to a smaller violator shrinks S, so this terminates.
        loop {
            match case21_move(self.h, &self.ds, &f, &s) {
                Ok(next) => {
                    self.report.moves.case21 += 1;
                    self.accept(next);
                    return Ok(None);
                }
                Err(CaseError::ClaimViolation(r)) => {
                    self.report.moves.redirects += 1;
                    match r {
                        Redirect::Cycle(c) => return self.take_cycle(&c),
                        Redirect::SmallerViolator(s2) => {
                            s = s2;
                            continue;
                        }
                    }
                }
                Err(CaseError::Rejected) => return Err(()),
                Err(CaseError::NotApplicable) => {}
            }
            let nfs = neighborhood_of(&f.graph, &s);
            let t = *nfs
                .iter()
                .find(|&&t| f.neighbors_in(t, &s).len() <= 2)
                .expect("case 2-1 not applicable means a leaf with at most two neighbours in S");
            match case22_witness(self.h, &self.ds, &f, &s, t) {
                Case22Outcome::Witness(wit) => return Ok(Some(wit)),
                Case22Outcome::Redirect(Redirect::Cycle(c)) => {
                    self.report.moves.redirects += 1;
                    return self.take_cycle(&c);
                }
                Case22Outcome::Redirect(Redirect::SmallerViolator(s2)) => {
                    self.report.moves.redirects += 1;
                    s = s2;
                }
                Case22Outcome::Improved(next) => {
                    self.report.moves.case22 += 1;
                    self.accept(next);
                    return Ok(None);
                }
                Case22Outcome::Stall => return Err(()),
            }
        }
    }

    fn take_cycle(&mut self, c: &Cycle) -> Result<Option<ViolationWitness>, ()> {
        let next = improve_by_cycle(self.h, &self.ds, c).ok_or(())?;
        self.report.moves.cycle += 1;
        self.accept(next);
        Ok(None)
    }
}

/// Searches for a dominating system of `h` with at most `k` elements.
pub fn find_bounded_system(h: &Graph, k: usize, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let seed = seed_system(h, config.mode)?;
    let mut run = Run {
        h,
        report: SearchReport {
            objectives: vec![seed.objective()],
            ..Default::default()
        },
        ds: seed,
    };
    let short_cap = config.cycle_cap.unwrap_or_else(|| girth(h).map_or(3, |g| g + 4));
    let mut cap = short_cap;
    loop {
        if run.ds.cardinality() <= k && is_normalized(h, &run.ds) {
            return Ok(SearchOutcome {
                result: SearchResult::System(run.ds.clone()),
                final_state: run.ds,
                report: run.report,
            });
        }
        match run.step(cap) {
            Ok(Some(wit)) => {
                return Ok(SearchOutcome {
                    result: SearchResult::Witness(wit),
                    final_state: run.ds,
                    report: run.report,
                })
            }
            Ok(None) => cap = short_cap,
            Err(()) if cap < h.n() => cap = h.n(),
            Err(()) => break,
        }
    }
    run.report.stalled = true;
    let final_state = run.ds.clone();
    if !config.fallback {
        return Ok(SearchOutcome {
            result: SearchResult::NoBoundedSystem { minimum: None },
            final_state,
            report: run.report,
        });
    }
    run.report.fallback_used = true;
    let best = min_system_exhaustive(h, config.mode, config.budget)?;
    let result = match best {
        Some((ds, m)) if m <= k => SearchResult::System(ds),
        other => SearchResult::NoBoundedSystem { minimum: other },
    };
    Ok(SearchOutcome {
        result,
        final_state,
        report: run.report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trail(h: &Graph, walk: &[Vertex]) -> ClosedTrail {
        ClosedTrail::from_walk(h, walk.to_vec()).unwrap()
    }

    #[test]
    fn normalize_merges_touching_trails() {
        // Two 4-cycles sharing vertex 0.
        let h = Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)]).unwrap();
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3]), trail(&h, &[0, 4, 5, 6])],
            stars: vec![],
            mode: Mode::Strict,
        };
        assert!(ds.is_valid(&h));
        let n = normalize(&h, &ds);
        assert_eq!(n.cardinality(), 1);
        assert!(n.is_valid(&h));
        assert_eq!(n.trails[0].len(), 8);
        assert_eq!(normalize(&h, &n), n);
    }

    #[test]
    fn normalize_merges_stars_and_drops_centres_on_trails() {
        let h = Graph::star(4);
        let ds = DominatingSystem {
            trails: vec![],
            stars: vec![Star::new(0, vec![0, 1]), Star::new(0, vec![2, 3])],
            mode: Mode::Relaxed,
        };
        let n = normalize(&h, &ds);
        assert_eq!(n.stars, vec![Star::new(0, vec![0, 1, 2, 3])]);

        // C_4 plus a pendant path at 0 of length 3; a star at 0 is redundant.
        let h = Graph::new(7, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap();
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3])],
            stars: vec![Star::new(0, vec![h.edge_id(0, 4).unwrap(), h.edge_id(0, 5).unwrap(), h.edge_id(0, 6).unwrap()])],
            mode: Mode::Strict,
        };
        let n = normalize(&h, &ds);
        assert_eq!(n.cardinality(), 1);
        assert!(n.is_valid(&h));
    }

    #[test]
    fn cycle_merges_two_trails() {
        // 4-cycles A = 0123 and B = 4567 joined by edges 1-4 and 2-7; the
        // cycle 1-4-7-2 uses one edge of each.
        let h = Graph::new(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (1, 4), (2, 7)],
        )
        .unwrap();
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3]), trail(&h, &[4, 5, 6, 7])],
            stars: vec![],
            mode: Mode::Strict,
        };
        assert!(ds.is_valid(&h));
        let c = Cycle::new(&h, vec![1, 4, 7, 2]).unwrap();
        let out = improve_by_cycle(&h, &ds, &c).unwrap();
        assert_eq!(out.cardinality(), 1);
        assert!(out.is_valid(&h));
        assert_eq!(out.trails[0].len(), 8);
    }

    #[test]
    fn cycle_inside_a_trail_is_inapplicable() {
        let h = Graph::cycle(5);
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3, 4])],
            stars: vec![],
            mode: Mode::Strict,
        };
        let c = Cycle::new(&h, vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(improve_by_cycle(&h, &ds, &c), None);
    }

    #[test]
    fn cycle_absorbs_stars_centred_on_it() {
        // C_4 = x(0) a(1) b(2) c(3) with pendants 0-4 and 2-5; stars at 0 and 2.
        let h = Graph::new(6, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (2, 5)]).unwrap();
        let e = |a, b| h.edge_id(a, b).unwrap();
        let ds = DominatingSystem {
            trails: vec![],
            stars: vec![Star::new(0, vec![e(0, 1), e(0, 3), e(0, 4)]), Star::new(2, vec![e(1, 2), e(2, 3), e(2, 5)])],
            mode: Mode::Strict,
        };
        assert!(ds.is_valid(&h));
        let c = Cycle::new(&h, vec![0, 1, 2, 3]).unwrap();
        let out = improve_by_cycle(&h, &ds, &c).unwrap();
        assert!(out.objective() < ds.objective());
        assert_eq!(out.cardinality(), 1);
        assert!(out.stars.is_empty());
    }

    #[test]
    fn case1_single_trail_has_no_cycle() {
        let h = Graph::cycle(5);
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3, 4])],
            stars: vec![],
            mode: Mode::Strict,
        };
        let f = StarLeafBipartite::build(&h, &ds);
        let HallCertificate::Matching(m) = f.hall() else {
            panic!("no centers, trivially covered");
        };
        assert_eq!(case1_move(&h, &ds, &f, &m), None);
    }

    #[test]
    fn c5_is_immediate() {
        let out = find_bounded_system(&Graph::cycle(5), 1, &SearchConfig::default()).unwrap();
        let SearchResult::System(ds) = out.result else {
            panic!("expected a system");
        };
        assert_eq!(ds.cardinality(), 1);
        assert_eq!(out.report.objectives.len(), 1);
    }

    #[test]
    fn case21_on_a_violator() {
        // Centers 0, 1, 2 share the two leaves 3, 4 and each has a third
        // edge into the 4-cycle trail 5678.
        let mut e = vec![(5, 6), (6, 7), (7, 8), (8, 5)];
        for c in 0..3 {
            e.extend([(c, 3), (c, 4), (c, 5)]);
        }
        let h = Graph::new(9, e).unwrap();
        assert!(h.is_triangle_free());
        let id = |a, b| h.edge_id(a, b).unwrap();
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[5, 6, 7, 8])],
            stars: (0..3).map(|c| Star::new(c, vec![id(c, 3), id(c, 4), id(c, 5)])).collect(),
            mode: Mode::Strict,
        };
        assert!(ds.is_valid(&h));
        let f = StarLeafBipartite::build(&h, &ds);
        let HallCertificate::Violator(s) = f.hall() else {
            panic!("three centers, two leaves");
        };
        assert_eq!(s, vec![0, 1, 2]);
        let out = case21_move(&h, &ds, &f, &s).unwrap();
        assert!(out.is_valid(&h));
        assert_eq!(out.cardinality(), ds.cardinality() - 1);
    }

    #[test]
    fn case1_forest_returns_none() {
        // Two 4-cycles joined by the bridge 0-4; the line graph fails the
        // degree-sum hypothesis for k = 1.
        let h = Graph::new(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4)]).unwrap();
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3]), trail(&h, &[4, 5, 6, 7])],
            stars: vec![],
            mode: Mode::Strict,
        };
        assert!(ds.is_valid(&h));
        let f = StarLeafBipartite::build(&h, &ds);
        let HallCertificate::Matching(m) = f.hall() else {
            panic!("no centers");
        };
        assert_eq!(case1_move(&h, &ds, &f, &m), None);
    }

    /// Trails A = 0123 and B = 4567; star centers 8 and 9 share the leaf 10.
    fn witness_host(extra: &[(Vertex, Vertex)]) -> (Graph, DominatingSystem) {
        let mut e = vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)];
        e.extend([(8, 10), (8, 0), (8, 4), (9, 10), (9, 2), (9, 6)]);
        e.extend_from_slice(extra);
        let h = Graph::new(11, e).unwrap();
        let id = |a, b| h.edge_id(a, b).unwrap();
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3]), trail(&h, &[4, 5, 6, 7])],
            stars: vec![
                Star::new(8, vec![id(8, 10), id(8, 0), id(8, 4)]),
                Star::new(9, vec![id(9, 10), id(9, 2), id(9, 6)]),
            ],
            mode: Mode::Strict,
        };
        assert!(h.is_triangle_free());
        assert!(ds.is_valid(&h));
        assert!(is_normalized(&h, &ds));
        (h, ds)
    }

    #[test]
    fn case22_yields_a_witness() {
        let (h, ds) = witness_host(&[]);
        let f = StarLeafBipartite::build(&h, &ds);
        let HallCertificate::Violator(s) = f.hall() else {
            panic!("two centers share one leaf");
        };
        assert_eq!(s, vec![8, 9]);
        assert_eq!(case21_move(&h, &ds, &f, &s), Err(CaseError::NotApplicable));
        let Case22Outcome::Witness(w) = case22_witness(&h, &ds, &f, &s, 10) else {
            panic!("expected a witness");
        };
        assert_eq!((w.x, w.t), (8, 10));
        assert_eq!(w.u, vec![0, 4]);
        assert!(w.w.is_empty());
        assert_eq!(w.phi, vec![(0, 1), (4, 5)]);
        // |N| = p + q + 1 = 3 = d(x) + d(t) - 2.
        assert_eq!(w.matching.len(), 3);
        assert!(w.verify(&h));
        let corr = line_graph(&h).unwrap();
        let i = w.line_vertices(&corr);
        assert!(corr.line.is_independent(&i));
        assert!(i.iter().any(|&v| corr.line.degree(v) <= i.len()));
    }

    #[test]
    fn case22_uw_edge_redirects_to_a_four_cycle() {
        // t = 10 also sees the trail vertex 1, which is adjacent to u = 0.
        let (h, ds) = witness_host(&[(10, 1)]);
        let f = StarLeafBipartite::build(&h, &ds);
        let HallCertificate::Violator(s) = f.hall() else {
            panic!("violator expected");
        };
        let Case22Outcome::Redirect(Redirect::Cycle(c)) = case22_witness(&h, &ds, &f, &s, 10) else {
            panic!("expected a cycle");
        };
        assert_eq!(c.len(), 4);
        assert!(cycle_is_light(&h, &ds, &c));
        let out = improve_by_cycle(&h, &ds, &c).unwrap();
        assert!(out.objective() < ds.objective());
    }

    #[test]
    fn case22_pendant_redirects_to_smaller_violator() {
        // Trail 0..7; centers 8, 9, 10, 11 with leaves t = 12, pendant u = 13
        // and r = 14, so S = {8, 9, 10, 11} has N_F(S) = {12, 13, 14}.
        let mut e: Vec<(Vertex, Vertex)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        e.extend([(8, 12), (8, 13), (8, 0), (9, 12), (9, 14), (9, 2)]);
        e.extend([(10, 14), (10, 4), (10, 6), (11, 14), (11, 1), (11, 5)]);
        let h = Graph::new(15, e).unwrap();
        assert!(h.is_triangle_free());
        let id = |a, b| h.edge_id(a, b).unwrap();
        let star = |c: Vertex, ls: [Vertex; 3]| Star::new(c, ls.iter().map(|&l| id(c, l)).collect());
        let ds = DominatingSystem {
            trails: vec![trail(&h, &[0, 1, 2, 3, 4, 5, 6, 7])],
            stars: vec![star(8, [12, 13, 0]), star(9, [12, 14, 2]), star(10, [14, 4, 6]), star(11, [14, 1, 5])],
            mode: Mode::Strict,
        };
        assert!(ds.is_valid(&h));
        let f = StarLeafBipartite::build(&h, &ds);
        let s = vec![8, 9, 10, 11];
        assert_eq!(neighborhood_of(&f.graph, &s), vec![12, 13, 14]);
        let out = case22_witness(&h, &ds, &f, &s, 12);
        assert_eq!(out, Case22Outcome::Redirect(Redirect::SmallerViolator(vec![9, 10, 11])));
        assert_eq!(neighborhood_of(&f.graph, &[9, 10, 11]), vec![12, 14]);
    }

    #[test]
    fn dependent_violator_is_a_claim_violation() {
        // Adjacent centers 0 and 1 joined in F by the path 0-2-4-3-1.
        let h = Graph::new(
            8,
            [(0, 1), (0, 2), (0, 6), (1, 3), (1, 7), (4, 2), (4, 3), (4, 5)],
        )
        .unwrap();
        assert!(h.is_triangle_free());
        let id = |a, b| h.edge_id(a, b).unwrap();
        let ds = DominatingSystem {
            trails: vec![],
            stars: vec![
                Star::new(0, vec![id(0, 1), id(0, 2), id(0, 6)]),
                Star::new(1, vec![id(1, 3), id(1, 7)]),
                Star::new(4, vec![id(4, 2), id(4, 3), id(4, 5)]),
            ],
            mode: Mode::Relaxed,
        };
        assert!(ds.is_valid(&h));
        let f = StarLeafBipartite::build(&h, &ds);
        let r = dependent_violator_redirect(&h, &f, &[0, 1, 4]);
        let Some(Redirect::Cycle(c)) = r else {
            panic!("expected a cycle, got {r:?}");
        };
        assert!(c.vertices().contains(&0) && c.vertices().contains(&1));
        assert!(matches!(
            case21_move(&h, &ds, &f, &[0, 1, 4]),
            Err(CaseError::ClaimViolation(Redirect::Cycle(_)))
        ));
    }

    #[test]
    fn relaxed_seed_is_valid() {
        let h = Graph::path(5);
        let seed = seed_system(&h, Mode::Relaxed).unwrap();
        assert!(seed.is_valid(&h));
        let out = find_bounded_system(
            &h,
            2,
            &SearchConfig {
                mode: Mode::Relaxed,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(matches!(out.result, SearchResult::System(ref d) if d.cardinality() <= 2));
    }
}
