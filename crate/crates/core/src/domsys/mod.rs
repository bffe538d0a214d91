//! Dominating systems: edge-disjoint closed trails and stars such that every
//! remaining edge touches a trail.

mod convert;
mod exhaustive;

pub use convert::{
    system_to_cover, system_to_partition, system_to_two_factor, two_factor_to_system, ConversionError,
};
pub use exhaustive::{
    cycle_space_basis, has_dominating_closed_trail, min_system_exhaustive, DomSearchError,
    DEFAULT_SYSTEM_BUDGET,
};

use crate::bitset::VertexSet;
use crate::graph::{ClosedTrail, EdgeId, Graph, StructureError, Vertex};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Stars need at least three edges.
    Strict,
    /// Stars need at least one edge.
    Relaxed,
}

impl Mode {
    pub fn min_star_size(self) -> usize {
        match self {
            Mode::Strict => 3,
            Mode::Relaxed => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Star {
    pub center: Vertex,
    /// Sorted edge ids, all incident to `center`.
    pub edges: Vec<EdgeId>,
}

impl Star {
    pub fn new(center: Vertex, mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        Star { center, edges }
    }

    pub fn leaves(&self, h: &Graph) -> Vec<Vertex> {
        self.edges.iter().map(|&e| h.other_end(e, self.center)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatingSystem {
    pub trails: Vec<ClosedTrail>,
    pub stars: Vec<Star>,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemViolation {
    #[error("trail {index} is not a closed trail of the host: {error}")]
    BadTrail { index: usize, error: StructureError },
    #[error("trail {0} was built over a different host")]
    ForeignTrail(usize),
    #[error("star {index} has {size} edges, below the minimum for this mode")]
    StarTooSmall { index: usize, size: usize },
    #[error("star {index} contains edge {edge}, which misses its center or the host")]
    StarEdgeOffCenter { index: usize, edge: EdgeId },
    #[error("edge {0} is used by more than one element")]
    Overlap(EdgeId),
    #[error("edge {0} is uncovered and has no endpoint on a closed trail")]
    Undominated(EdgeId),
}

/// Lexicographic objective: fewer elements first, then more covered edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub cardinality: usize,
    pub covered: usize,
}

impl Ord for Objective {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cardinality
            .cmp(&other.cardinality)
            .then(other.covered.cmp(&self.covered))
    }
}

impl PartialOrd for Objective {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl DominatingSystem {
    pub fn cardinality(&self) -> usize {
        self.trails.len() + self.stars.len()
    }

    pub fn element_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.trails
            .iter()
            .flat_map(|t| t.edges().iter().copied())
            .chain(self.stars.iter().flat_map(|s| s.edges.iter().copied()))
    }

    pub fn covered_count(&self) -> usize {
        self.element_edges().count()
    }

    /// `covered[e]` for every host edge.
    pub fn covered_mask(&self, h: &Graph) -> Vec<bool> {
        let mut c = vec![false; h.m()];
        for e in self.element_edges() {
            if e < h.m() {
                c[e] = true;
            }
        }
        c
    }

    pub fn trail_vertices(&self, h: &Graph) -> VertexSet {
        let mut s = VertexSet::new(h.n());
        for t in &self.trails {
            for &v in t.walk() {
                if v < h.n() {
                    s.insert(v);
                }
            }
        }
        s
    }

    pub fn objective(&self) -> Objective {
        Objective {
            cardinality: self.cardinality(),
            covered: self.covered_count(),
        }
    }

    /// Checks every element and the domination condition, reporting the first
    /// failure.
    pub fn validate(&self, h: &Graph) -> Result<(), SystemViolation> {
        for (index, t) in self.trails.iter().enumerate() {
            match ClosedTrail::from_walk(h, t.walk().to_vec()) {
                Ok(ref re) if re == t => {}
                Ok(_) => return Err(SystemViolation::ForeignTrail(index)),
                Err(error) => return Err(SystemViolation::BadTrail { index, error }),
            }
        }
        for (index, s) in self.stars.iter().enumerate() {
            if s.edges.len() < self.mode.min_star_size() {
                return Err(SystemViolation::StarTooSmall {
                    index,
                    size: s.edges.len(),
                });
            }
            if let Some(&edge) = s.edges.iter().find(|&&e| {
                e >= h.m() || {
                    let (a, b) = h.edge(e);
                    a != s.center && b != s.center
                }
            }) {
                return Err(SystemViolation::StarEdgeOffCenter { index, edge });
            }
        }
        let mut used = vec![false; h.m()];
        for e in self.element_edges() {
            if std::mem::replace(&mut used[e], true) {
                return Err(SystemViolation::Overlap(e));
            }
        }
        let on_trail = self.trail_vertices(h);
        for (e, &(a, b)) in h.edges().iter().enumerate() {
            if !used[e] && !on_trail.contains(a) && !on_trail.contains(b) {
                return Err(SystemViolation::Undominated(e));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, h: &Graph) -> bool {
        self.validate(h).is_ok()
    }

    /// Uncovered edges with an endpoint on a trail.
    pub fn dominated_edges(&self, h: &Graph) -> Vec<EdgeId> {
        let covered = self.covered_mask(h);
        let on_trail = self.trail_vertices(h);
        (0..h.m())
            .filter(|&e| {
                let (a, b) = h.edge(e);
                !covered[e] && (on_trail.contains(a) || on_trail.contains(b))
            })
            .collect()
    }

    pub fn to_json(&self, h: &Graph) -> SystemJson {
        SystemJson {
            mode: self.mode,
            trails: self.trails.iter().map(|t| t.walk().to_vec()).collect(),
            stars: self
                .stars
                .iter()
                .map(|s| StarJson {
                    center: s.center,
                    leaves: s.leaves(h),
                })
                .collect(),
        }
    }

    pub fn from_json(h: &Graph, j: &SystemJson) -> Result<Self, StructureError> {
        let trails = j
            .trails
            .iter()
            .map(|w| ClosedTrail::from_walk(h, w.clone()))
            .collect::<Result<_, _>>()?;
        let mut stars = Vec::new();
        for s in &j.stars {
            let mut edges = Vec::new();
            for &l in &s.leaves {
                if s.center >= h.n() || l >= h.n() {
                    return Err(StructureError::VertexOutOfRange(s.center.max(l)));
                }
                edges.push(h.edge_id(s.center, l).ok_or(StructureError::NotAdjacent(s.center, l))?);
            }
            stars.push(Star::new(s.center, edges));
        }
        Ok(DominatingSystem {
            trails,
            stars,
            mode: j.mode,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarJson {
    pub center: Vertex,
    pub leaves: Vec<Vertex>,
}

/// Trails as closed vertex walks, stars as center plus leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub mode: Mode,
    pub trails: Vec<Vec<Vertex>>,
    pub stars: Vec<StarJson>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let c5 = Graph::cycle(5);
        let ds = DominatingSystem {
            trails: vec![ClosedTrail::from_walk(&c5, vec![0, 1, 2, 3, 4]).unwrap()],
            stars: vec![],
            mode: Mode::Strict,
        };
        assert_eq!(ds.validate(&c5), Ok(()));

        let claw = Graph::star(3);
        let star = DominatingSystem {
            trails: vec![],
            stars: vec![Star::new(0, vec![0, 1, 2])],
            mode: Mode::Strict,
        };
        assert_eq!(star.validate(&claw), Ok(()));

        let p3 = Graph::path(3);
        let mut two = DominatingSystem {
            trails: vec![],
            stars: vec![Star::new(1, vec![0, 1])],
            mode: Mode::Strict,
        };
        assert_eq!(two.validate(&p3), Err(SystemViolation::StarTooSmall { index: 0, size: 2 }));
        two.mode = Mode::Relaxed;
        assert_eq!(two.validate(&p3), Ok(()));
    }

    #[test]
    fn validate_detects_overlap_and_domination() {
        let h = Graph::star(3);
        let ds = DominatingSystem {
            trails: vec![],
            stars: vec![Star::new(0, vec![0, 1]), Star::new(0, vec![1, 2])],
            mode: Mode::Relaxed,
        };
        assert_eq!(ds.validate(&h), Err(SystemViolation::Overlap(1)));
        let ds = DominatingSystem {
            trails: vec![],
            stars: vec![Star::new(0, vec![0, 1])],
            mode: Mode::Relaxed,
        };
        assert_eq!(ds.validate(&h), Err(SystemViolation::Undominated(2)));
        let ds = DominatingSystem {
            trails: vec![],
            stars: vec![Star::new(1, vec![0, 1, 2])],
            mode: Mode::Strict,
        };
        assert_eq!(ds.validate(&h), Err(SystemViolation::StarEdgeOffCenter { index: 0, edge: 1 }));
    }

    #[test]
    fn objective_order() {
        let a = Objective { cardinality: 1, covered: 3 };
        let b = Objective { cardinality: 1, covered: 5 };
        let c = Objective { cardinality: 2, covered: 9 };
        assert!(b < a);
        assert!(a < c);
    }

    #[test]
    fn json_round_trip() {
        let h = Graph::complete_bipartite(2, 3);
        let ds = DominatingSystem {
            trails: vec![ClosedTrail::from_walk(&h, vec![0, 2, 1, 3]).unwrap()],
            stars: vec![],
            mode: Mode::Strict,
        };
        let j = ds.to_json(&h);
        let text = serde_json::to_string(&j).unwrap();
        let back: SystemJson = serde_json::from_str(&text).unwrap();
        assert_eq!(DominatingSystem::from_json(&h, &back).unwrap(), ds);
    }
}
