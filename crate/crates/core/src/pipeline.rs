//! End-to-end runs: claw-free graph to a 2-factor with few cycles, and to a
//! partition into few cliques-or-Hamiltonian parts, with self-contained
//! certificates and an independent verifier.

use crate::closure::{closure, find_claw, Claw, ClosureError, ClosureStep, ClosureTrace};
use crate::degree::{sigma_k, DegreeError, HypothesisReport, DEFAULT_NODE_BUDGET};
use crate::domsys::{
    system_to_partition, system_to_two_factor, ConversionError, DominatingSystem, Mode, SystemJson,
    DEFAULT_SYSTEM_BUDGET,
};
use crate::graph::{hamiltonian_cycle, Graph, StructureError, TwoFactor, Vertex};
use crate::linegraph::{root_graph, RootCorrespondence, RootError};
use crate::matching::{min_cycle_two_factor_bruteforce, DEFAULT_FACTOR_BUDGET};
use crate::search::{find_bounded_system, SearchConfig, SearchError, SearchReport, SearchResult, ViolationWitness};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Largest order for which the 2-factor of the input graph itself is found
/// by brute force.
pub const BRUTE_FORCE_MAX_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Independent-set search for the hypotheses.
    pub degree: u64,
    /// Exhaustive dominating-system fallback.
    pub system: u64,
    /// Brute-force 2-factor and partition searches on the input graph.
    pub factor: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            degree: DEFAULT_NODE_BUDGET,
            system: DEFAULT_SYSTEM_BUDGET,
            factor: DEFAULT_FACTOR_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("k must be positive")]
    ZeroK,
    #[error("graph is not claw-free: center {} with leaves {:?}", .0.center, .0.leaves)]
    NotClawFree(Claw),
    #[error("hypotheses fail for k = {}", .report.k)]
    HypothesesFail {
        report: Box<HypothesisReport>,
        /// Vertices of the closure forming an independent set `I` with
        /// `|I| >= δ(I)`, when the search produced one.
        witness: Option<Vec<Vertex>>,
    },
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Conversion(#[from] ConversionError),
    #[error("no dominating system with at most {k} elements although the hypotheses hold")]
    NoBoundedSystem { k: usize },
    #[error("brute force found no 2-factor of the input with at most {k} cycles")]
    NoSmallFactorInInput { k: usize },
    #[error("no partition of the input into at most {k} admissible parts")]
    NoPartition { k: usize },
    #[error("brute-force search exceeded its budget of {0}")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureDigest {
    pub steps: Vec<ClosureStep>,
    pub added_edges: usize,
    pub output: Graph,
    /// Hex SHA-256 of the JSON of `(steps, output)`.
    pub sha256: String,
}

impl ClosureDigest {
    fn hash(steps: &[ClosureStep], output: &Graph) -> String {
        let bytes = serde_json::to_vec(&(steps, output)).expect("serialisable");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn from_trace(t: &ClosureTrace) -> Self {
        ClosureDigest {
            sha256: Self::hash(&t.steps, &t.output),
            added_edges: t.added_edge_count(),
            steps: t.steps.clone(),
            output: t.output.clone(),
        }
    }
}

/// A self-contained record of one run; [`verify`] re-checks it from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineCertificate {
    pub graph: Graph,
    pub k: usize,
    pub hypotheses: HypothesisReport,
    pub closure: ClosureDigest,
    pub root: Graph,
    pub edge_to_vertex: Vec<Vertex>,
    pub system: SystemJson,
    /// Cycles of a 2-factor of the closure.
    pub two_factor_closure: Vec<Vec<Vertex>>,
    /// Cycles of a 2-factor of the input itself, found by brute force.
    pub two_factor_graph: Option<Vec<Vec<Vertex>>>,
    pub search: SearchReport,
}

fn check_claw_free(g: &Graph) -> Result<(), PipelineError> {
    match find_claw(g) {
        Some(c) => Err(PipelineError::NotClawFree(c)),
        None => Ok(()),
    }
}

/// Both hypotheses, closure, triangle-free root, bounded dominating system,
/// 2-factor of the closure and, for small inputs, a brute-force 2-factor of
/// `g` with at most `k` cycles.
pub fn run_main_theorem(g: &Graph, k: usize, budgets: &Budgets) -> Result<PipelineCertificate, PipelineError> {
    if k == 0 {
        return Err(PipelineError::ZeroK);
    }
    check_claw_free(g)?;
    let hypotheses = HypothesisReport::compute(g, k, budgets.degree)?;
    if !hypotheses.both_hold() {
        return Err(PipelineError::HypothesesFail {
            witness: witness_for(g, k).map(|(w, corr)| w.line_vertices(&corr)),
            report: Box::new(hypotheses),
        });
    }
    let trace = closure(g)?;
    let corr = root_graph(&trace.output)?;
    let cfg = SearchConfig {
        budget: budgets.system,
        ..Default::default()
    };
    let out = find_bounded_system(&corr.root, k, &cfg)?;
    let ds = match out.result {
        SearchResult::System(ds) => ds,
        SearchResult::Witness(w) => {
            return Err(PipelineError::HypothesesFail {
                witness: Some(w.line_vertices(&corr)),
                report: Box::new(hypotheses),
            })
        }
        SearchResult::NoBoundedSystem { .. } => return Err(PipelineError::NoBoundedSystem { k }),
    };
    let tf = system_to_two_factor(&ds, &corr)?;
    let two_factor_graph = if g.n() <= BRUTE_FORCE_MAX_ORDER {
        match min_cycle_two_factor_bruteforce(g, budgets.factor) {
            Ok(Some((f, c))) if c <= k => Some(f.to_lists()),
            Ok(_) => return Err(PipelineError::NoSmallFactorInInput { k }),
            Err(_) => None,
        }
    } else {
        None
    };
    Ok(PipelineCertificate {
        graph: g.clone(),
        k,
        hypotheses,
        closure: ClosureDigest::from_trace(&trace),
        system: ds.to_json(&corr.root),
        root: corr.root,
        edge_to_vertex: corr.edge_to_vertex,
        two_factor_closure: tf.to_lists(),
        two_factor_graph,
        search: out.report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("graph is not claw-free")]
    NotClawFree,
    #[error("recomputed hypotheses differ from the certificate")]
    HypothesesMismatch,
    #[error("hypotheses do not hold")]
    HypothesesFail,
    #[error("closure trace: {0}")]
    Closure(ClosureError),
    #[error("closure digest mismatch")]
    Digest,
    #[error("root correspondence is not a line-graph isomorphism onto the closure")]
    Root,
    #[error("root graph has a triangle")]
    RootNotTriangleFree,
    #[error("dominating system: {0}")]
    System(String),
    #[error("system has {found} elements, more than {k}")]
    TooManyElements { found: usize, k: usize },
    #[error("2-factor of the closure: {0}")]
    ClosureFactor(StructureError),
    #[error("2-factor of the closure does not match the system")]
    ConversionMismatch,
    #[error("2-factor of the input: {0}")]
    GraphFactor(StructureError),
    #[error("{which} 2-factor has {found} cycles, more than {k}")]
    TooManyCycles { which: &'static str, found: usize, k: usize },
    #[error(transparent)]
    Degree(#[from] DegreeError),
}

fn sorted_cycles(tf: &TwoFactor) -> Vec<Vec<Vertex>> {
    let mut v: Vec<Vec<Vertex>> = tf.cycles().iter().map(|c| c.vertices().to_vec()).collect();
    v.sort();
    v
}

/// Re-checks every part of a certificate without reusing any result of the
/// producing run.
pub fn verify(cert: &PipelineCertificate) -> Result<(), VerifyError> {
    verify_with_budget(cert, DEFAULT_NODE_BUDGET)
}

pub fn verify_with_budget(cert: &PipelineCertificate, degree_budget: u64) -> Result<(), VerifyError> {
    let g = &cert.graph;
    let k = cert.k;
    if find_claw(g).is_some() {
        return Err(VerifyError::NotClawFree);
    }
    let hyp = HypothesisReport::compute(g, k, degree_budget)?;
    if hyp != cert.hypotheses {
        return Err(VerifyError::HypothesesMismatch);
    }
    if !hyp.both_hold() {
        return Err(VerifyError::HypothesesFail);
    }
    let trace = ClosureTrace {
        input: g.clone(),
        output: cert.closure.output.clone(),
        steps: cert.closure.steps.clone(),
    };
    trace.verify().map_err(VerifyError::Closure)?;
    if ClosureDigest::hash(&trace.steps, &trace.output) != cert.closure.sha256
        || trace.added_edge_count() != cert.closure.added_edges
    {
        return Err(VerifyError::Digest);
    }
    let corr = RootCorrespondence {
        root: cert.root.clone(),
        line: trace.output.clone(),
        edge_to_vertex: cert.edge_to_vertex.clone(),
    };
    if !corr.verify() {
        return Err(VerifyError::Root);
    }
    if !corr.root.is_triangle_free() {
        return Err(VerifyError::RootNotTriangleFree);
    }
    let ds = DominatingSystem::from_json(&corr.root, &cert.system).map_err(|e| VerifyError::System(e.to_string()))?;
    if ds.mode != Mode::Strict {
        return Err(VerifyError::System("not in strict mode".into()));
    }
    ds.validate(&corr.root).map_err(|e| VerifyError::System(e.to_string()))?;
    if ds.cardinality() > k {
        return Err(VerifyError::TooManyElements {
            found: ds.cardinality(),
            k,
        });
    }
    let tf = TwoFactor::new(&corr.line, cert.two_factor_closure.clone()).map_err(VerifyError::ClosureFactor)?;
    if tf.cycle_count() > k {
        return Err(VerifyError::TooManyCycles {
            which: "closure",
            found: tf.cycle_count(),
            k,
        });
    }
    let expected = system_to_two_factor(&ds, &corr).map_err(|_| VerifyError::ConversionMismatch)?;
    if sorted_cycles(&expected) != sorted_cycles(&tf) {
        return Err(VerifyError::ConversionMismatch);
    }
    if let Some(lists) = &cert.two_factor_graph {
        let tg = TwoFactor::new(g, lists.clone()).map_err(VerifyError::GraphFactor)?;
        if tg.cycle_count() > k {
            return Err(VerifyError::TooManyCycles {
                which: "input",
                found: tg.cycle_count(),
                k,
            });
        }
    }
    Ok(())
}

// --------------------------------------------------------------- partition

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionSource {
    /// Read off a relaxed dominating system of the closure's root.
    Closure,
    /// The closure's parts were not admissible in the input; found by
    /// exhaustive search over vertex subsets.
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneratePartition {
    pub parts: Vec<Vec<Vertex>>,
    pub source: PartitionSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("vertex {0} is in no part or in two parts")]
    NotAPartition(Vertex),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("part {0} induces neither K_1, K_2 nor a Hamiltonian graph")]
    Inadmissible(usize),
}

/// A single vertex, an edge, or a vertex set with a Hamilton cycle.
pub fn is_admissible_part(g: &Graph, part: &[Vertex]) -> bool {
    match part.len() {
        0 => false,
        1 => true,
        2 => g.has_edge(part[0], part[1]),
        _ => hamiltonian_cycle(&g.induced_subgraph(part)).is_some(),
    }
}

impl DegeneratePartition {
    pub fn validate(&self, g: &Graph) -> Result<(), PartitionError> {
        let mut seen = vec![false; g.n()];
        for (i, p) in self.parts.iter().enumerate() {
            if p.is_empty() {
                return Err(PartitionError::EmptyPart(i));
            }
            for &v in p {
                if v >= g.n() || seen[v] {
                    return Err(PartitionError::NotAPartition(v.min(g.n())));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(PartitionError::NotAPartition(v));
        }
        for (i, p) in self.parts.iter().enumerate() {
            if !is_admissible_part(g, p) {
                return Err(PartitionError::Inadmissible(i));
            }
        }
        Ok(())
    }
}

/// Fewest admissible parts covering `g`, if at most `k`; dynamic programming
/// over vertex subsets anchored at the lowest uncovered vertex.
pub fn min_partition_bruteforce(g: &Graph, k: usize, budget: u64) -> Result<Option<Vec<Vec<Vertex>>>, PipelineError> {
    let n = g.n();
    assert!(n <= 20, "subset search is for small graphs");
    let full = (1usize << n) - 1;
    let mut admissible = vec![false; 1 << n];
    let mut work = 0u64;
    for (mask, slot) in admissible.iter_mut().enumerate().skip(1) {
        work += 1;
        if work > budget {
            return Err(PipelineError::BudgetExceeded(budget));
        }
        let part: Vec<Vertex> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        *slot = is_admissible_part(g, &part);
    }
    // best[mask] = (parts, last part) for covering exactly `mask`.
    let mut best: Vec<Option<(usize, usize)>> = vec![None; 1 << n];
    best[0] = Some((0, 0));
    for mask in 0..full {
        let Some((cnt, _)) = best[mask] else { continue };
        if cnt >= k {
            continue;
        }
        let low = (!mask).trailing_zeros() as usize;
        let rest = full & !mask & !(1 << low);
        let mut sub = rest;
        loop {
            work += 1;
            if work > budget {
                return Err(PipelineError::BudgetExceeded(budget));
            }
            let part = sub | 1 << low;
            if admissible[part] {
                let next = mask | part;
                if best[next].is_none_or(|(c, _)| c > cnt + 1) {
                    best[next] = Some((cnt + 1, part));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let Some(_) = best[full] else {
        return Ok(None);
    };
    let mut parts = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let (_, part) = best[mask].expect("reachable");
        parts.push((0..n).filter(|&v| part >> v & 1 == 1).collect());
        mask &= !part;
    }
    parts.sort();
    Ok(Some(parts))
}

/// Partition of `V(g)` into at most `k` parts, each a vertex, an edge or a
/// Hamiltonian subgraph, under `σ_{k+1}(g) >= |g|` alone.
pub fn run_degenerate_partition(g: &Graph, k: usize, budgets: &Budgets) -> Result<DegeneratePartition, PipelineError> {
    if k == 0 {
        return Err(PipelineError::ZeroK);
    }
    check_claw_free(g)?;
    if g.n() == 0 {
        return Ok(DegeneratePartition {
            parts: vec![],
            source: PartitionSource::Closure,
        });
    }
    let sigma = sigma_k(g, k + 1)?;
    if !sigma.at_least(g.n() as u64) {
        return Err(PipelineError::HypothesesFail {
            report: Box::new(HypothesisReport::compute(g, k, budgets.degree)?),
            witness: None,
        });
    }
    partition_without_hypotheses(g, k, budgets)
}

/// The partition pipeline without the degree-sum gate; fails with
/// [`PipelineError::NoPartition`] when no partition into `k` parts is found.
pub fn partition_without_hypotheses(
    g: &Graph,
    k: usize,
    budgets: &Budgets,
) -> Result<DegeneratePartition, PipelineError> {
    check_claw_free(g)?;
    let trace = closure(g)?;
    let parts = closure_parts(&trace.output, k, budgets)?;
    let lifted = DegeneratePartition {
        parts,
        source: PartitionSource::Closure,
    };
    if lifted.validate(g).is_ok() {
        return Ok(lifted);
    }
    if g.n() > BRUTE_FORCE_MAX_ORDER {
        return Err(PipelineError::NoPartition { k });
    }
    match min_partition_bruteforce(g, k, budgets.factor)? {
        Some(parts) => Ok(DegeneratePartition {
            parts,
            source: PartitionSource::BruteForce,
        }),
        None => Err(PipelineError::NoPartition { k }),
    }
}

/// Parts of the closure from a relaxed system of its root. Isolated vertices
/// of the closure have no root edge and become singleton parts. With several
/// components each one gets its minimum number of parts.
fn closure_parts(cl: &Graph, k: usize, budgets: &Budgets) -> Result<Vec<Vec<Vertex>>, PipelineError> {
    let comps = cl.connected_components();
    let target = if comps.len() == 1 { k } else { 1 };
    let mut parts: Vec<Vec<Vertex>> = Vec::new();
    for comp in comps {
        if comp.len() == 1 {
            parts.push(comp);
            continue;
        }
        let sub = cl.induced_subgraph(&comp);
        let corr = root_graph(&sub)?;
        let cfg = SearchConfig {
            mode: Mode::Relaxed,
            budget: budgets.system,
            ..Default::default()
        };
        let ds = match find_bounded_system(&corr.root, target, &cfg)?.result {
            SearchResult::System(ds) => ds,
            SearchResult::NoBoundedSystem { minimum: Some((ds, _)) } => ds,
            _ => return Err(PipelineError::NoPartition { k }),
        };
        for p in system_to_partition(&ds, &corr)? {
            parts.push(p.into_iter().map(|v| comp[v]).collect());
        }
    }
    if parts.len() > k {
        return Err(PipelineError::NoPartition { k });
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort();
    Ok(parts)
}

/// Closure, root and a search without fallback, used only to explain a
/// hypothesis failure.
pub fn witness_for(g: &Graph, k: usize) -> Option<(ViolationWitness, RootCorrespondence)> {
    let trace = closure(g).ok()?;
    let corr = root_graph(&trace.output).ok()?;
    let cfg = SearchConfig {
        fallback: false,
        ..Default::default()
    };
    match find_bounded_system(&corr.root, k, &cfg).ok()?.result {
        SearchResult::Witness(w) => Some((w, corr)),
        _ => None,
    }
}
