//! Edge-list and graph6 encodings.
//!
//! Edge-list text: first line `n m`, then `m` lines `u v`. graph6 is accepted
//! on input when the first byte is a graph6 size byte (63..=126) or the
//! `>>graph6<<` header. Output is always edge-list.

use super::{Graph, GraphError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("malformed header line: {0:?}")]
    BadHeader(String),
    #[error("malformed edge on line {line}: {text:?}")]
    BadEdgeLine { line: usize, text: String },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("invalid graph6 data: {0}")]
    BadGraph6(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

const GRAPH6_HEADER: &str = ">>graph6<<";

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let trimmed = text.trim_start_matches('\u{feff}');
    match trimmed.as_bytes().first() {
        None => Err(ParseError::Empty),
        Some(&b) if (63..=126).contains(&b) || trimmed.starts_with(GRAPH6_HEADER) => {
            parse_graph6(trimmed.lines().next().unwrap_or(""))
        }
        Some(_) => parse_edge_list(trimmed),
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or(ParseError::Empty)?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| ParseError::BadHeader(header.to_string()))?;
    let [n, m] = nums[..] else {
        return Err(ParseError::BadHeader(header.to_string()));
    };
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let pair: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| ParseError::BadEdgeLine {
                line,
                text: l.to_string(),
            })?;
        let [u, v] = pair[..] else {
            return Err(ParseError::BadEdgeLine {
                line,
                text: l.to_string(),
            });
        };
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::new(n, edges)?)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let body = line.trim_end().strip_prefix(GRAPH6_HEADER).unwrap_or(line.trim_end());
    let bytes = body.as_bytes();
    if bytes.iter().any(|b| !(63..=126).contains(b)) {
        return Err(ParseError::BadGraph6("byte outside 63..=126"));
    }
    let sixes = |bs: &[u8]| bs.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    let (n, rest) = match bytes {
        [] => return Err(ParseError::BadGraph6("missing size")),
        [126, 126, tail @ ..] => {
            if tail.len() < 6 {
                return Err(ParseError::BadGraph6("truncated size"));
            }
            (sixes(&tail[..6]), &tail[6..])
        }
        [126, tail @ ..] => {
            if tail.len() < 3 {
                return Err(ParseError::BadGraph6("truncated size"));
            }
            (sixes(&tail[..3]), &tail[3..])
        }
        [b, tail @ ..] => ((b - 63) as usize, tail),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(ParseError::BadGraph6("wrong body length"));
    }
    let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::new(n, edges)?)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for s in [12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// JSON shape for graphs embedded in reports and certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<&GraphJson> for Graph {
    type Error = GraphError;
    fn try_from(j: &GraphJson) -> Result<Self, Self::Error> {
        Graph::new(j.n, j.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson::from(&g)
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;
    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        Graph::try_from(&j)
    }
}
