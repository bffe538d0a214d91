//! Claw-free graph toolkit: local-completion closure, root-graph recovery, dominating
//! systems, matching-based 2-factors and the improvement search that turns
//! degree conditions into 2-factors with few cycles.

pub mod bitset;
pub mod graph;
pub mod degree;
pub mod closure;
pub mod linegraph;
pub mod matching;
pub mod domsys;
pub mod corpus;
pub mod search;
pub mod pipeline;
