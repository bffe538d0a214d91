//! Conversions between dominating systems of `H` and cycle covers of `L(H)`.

use super::{DominatingSystem, Mode, Star, SystemViolation};
use crate::graph::{ClosedTrail, EdgeId, StructureError, TwoFactor, Vertex};
use crate::linegraph::RootCorrespondence;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConversionError {
    #[error("invalid system: {0}")]
    Invalid(#[from] SystemViolation),
    #[error("conversion to a 2-factor needs a strict-mode system")]
    ModeMismatch,
    #[error("dominated edge {0} has no trail occurrence to splice into")]
    UnassignedEdge(EdgeId),
    #[error("malformed structure: {0}")]
    Structure(#[from] StructureError),
    #[error("2-factor cycle {0} does not reduce to a closed trail or a star")]
    ReductionFailed(usize),
}

/// One cyclic sequence of line-graph vertices per element. Stars list their
/// edges in ascending id order; a trail follows its walk, and each dominated
/// edge is spliced in at the first `(trail, position)` whose walk vertex it
/// touches, just before the trail edge leaving that position.
pub fn system_to_cover(ds: &DominatingSystem, corr: &RootCorrespondence) -> Result<Vec<Vec<Vertex>>, ConversionError> {
    let h = &corr.root;
    ds.validate(h)?;
    let covered = ds.covered_mask(h);
    // slot[(trail, position)] collects dominated edges in ascending id order.
    let mut slots: Vec<Vec<Vec<EdgeId>>> = ds.trails.iter().map(|t| vec![Vec::new(); t.len()]).collect();
    let mut first_at: Vec<Option<(usize, usize)>> = vec![None; h.n()];
    for (ti, t) in ds.trails.iter().enumerate() {
        for (pos, &v) in t.walk().iter().enumerate() {
            first_at[v].get_or_insert((ti, pos));
        }
    }
    for e in 0..h.m() {
        if covered[e] {
            continue;
        }
        let (a, b) = h.edge(e);
        let at = match (first_at[a], first_at[b]) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => return Err(ConversionError::UnassignedEdge(e)),
        };
        slots[at.0][at.1].push(e);
    }
    let map = &corr.edge_to_vertex;
    let mut out = Vec::with_capacity(ds.cardinality());
    for (ti, t) in ds.trails.iter().enumerate() {
        let mut seq = Vec::new();
        for (pos, &e) in t.edges().iter().enumerate() {
            seq.extend(slots[ti][pos].iter().map(|&d| map[d]));
            seq.push(map[e]);
        }
        out.push(seq);
    }
    for s in &ds.stars {
        out.push(s.edges.iter().map(|&e| map[e]).collect());
    }
    Ok(out)
}

/// The 2-factor of `L(H)` with one cycle per element.
pub fn system_to_two_factor(ds: &DominatingSystem, corr: &RootCorrespondence) -> Result<TwoFactor, ConversionError> {
    if ds.mode != Mode::Strict {
        return Err(ConversionError::ModeMismatch);
    }
    let cover = system_to_cover(ds, corr)?;
    Ok(TwoFactor::new(&corr.line, cover)?)
}

/// Vertex sets of `L(H)`, one per element: single vertices and edges for
/// one- and two-edge stars, Hamiltonian parts otherwise.
pub fn system_to_partition(ds: &DominatingSystem, corr: &RootCorrespondence) -> Result<Vec<Vec<Vertex>>, ConversionError> {
    let mut parts = system_to_cover(ds, corr)?;
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(parts)
}

/// Pulls each cycle of a 2-factor of `L(H)` back to `H`. Consecutive cycle
/// vertices are edges of `H` sharing exactly one endpoint; if all shared
/// endpoints coincide the cycle is a star, otherwise the edges whose two
/// shared endpoints differ form a closed trail that touches every other edge
/// of the cycle.
pub fn two_factor_to_system(tf: &TwoFactor, corr: &RootCorrespondence) -> Result<DominatingSystem, ConversionError> {
    let h = &corr.root;
    let to_edge = corr.vertex_to_edge();
    let mut trails = Vec::new();
    let mut stars = Vec::new();
    for (ci, c) in tf.cycles().iter().enumerate() {
        let edges: Vec<EdgeId> = c.vertices().iter().map(|&v| to_edge[v]).collect();
        let len = edges.len();
        // shared[i] = common endpoint of edges[i] and edges[i+1]
        let mut shared = Vec::with_capacity(len);
        for i in 0..len {
            let (a, b) = h.edge(edges[i]);
            let (c2, d) = h.edge(edges[(i + 1) % len]);
            let s = if a == c2 || a == d {
                a
            } else if b == c2 || b == d {
                b
            } else {
                return Err(ConversionError::ReductionFailed(ci));
            };
            shared.push(s);
        }
        if shared.iter().all(|&s| s == shared[0]) {
            stars.push(Star::new(shared[0], edges));
            continue;
        }
        // edges[i] moves from shared[i-1] to shared[i] when they differ.
        let mut walk: Vec<Vertex> = (0..len)
            .filter(|&i| shared[(i + len - 1) % len] != shared[i])
            .map(|i| shared[i])
            .collect();
        let m = (0..walk.len()).min_by_key(|&i| walk[i]).expect("non-empty");
        walk.rotate_left(m);
        let trail = ClosedTrail::from_walk(h, walk).map_err(|_| ConversionError::ReductionFailed(ci))?;
        trails.push(trail);
    }
    let ds = DominatingSystem {
        trails,
        stars,
        mode: Mode::Strict,
    };
    ds.validate(h)?;
    Ok(ds)
}
