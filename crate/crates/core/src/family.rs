//! Named graph families and the textual spec grammar used by the CLI and the
//! service.
//!
//! | text              | family                                |
//! |-------------------|---------------------------------------|
//! | `K5`              | complete graph on 5 vertices          |
//! | `K3,3` / `K1,2,3` | complete multipartite graph           |
//! | `S4`              | star with 4 leaves (5 vertices)       |
//! | `stars:3+4+2`     | disjoint union of stars               |
//! | `P6`              | path on 6 vertices                    |
//! | `C7`              | cycle on 7 vertices                   |
//! | `g6:C~`           | arbitrary graph given in graph6       |
//!
//! Vertex numbering is fixed per family: complete graphs, paths and cycles
//! use `0..n` with path edges `(i, i+1)` and the cycle closed by `(n-1, 0)`;
//! a star has its centre at 0; star forests lay components out consecutively,
//! centre first; multipartite graphs number their parts consecutively in the
//! given order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::graph6::{encode_graph6, parse_graph6};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid graph spec at `{token}`: {reason}")]
pub struct SpecError {
    pub token: String,
    pub reason: String,
}

impl SpecError {
    fn new(token: impl Into<String>, reason: impl Into<String>) -> Self {
        SpecError {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FamilySpec {
    Complete(usize),
    Star(usize),
    StarForest(Vec<usize>),
    CompleteMultipartite(Vec<usize>),
    Path(usize),
    Cycle(usize),
    /// A graph6 string, kept verbatim.
    Arbitrary(String),
}

impl FamilySpec {
    /// Checks the size bounds of each family.
    pub fn validate(&self) -> Result<(), SpecError> {
        let tok = self.to_string();
        match self {
            FamilySpec::Complete(n) if *n < 2 => {
                Err(SpecError::new(tok, "complete graphs need n >= 2"))
            }
            FamilySpec::Star(n) if *n < 1 => Err(SpecError::new(tok, "stars need n >= 1")),
            FamilySpec::StarForest(leaves) if leaves.is_empty() => {
                Err(SpecError::new(tok, "a star forest needs at least one star"))
            }
            FamilySpec::StarForest(leaves) if leaves.contains(&0) => {
                Err(SpecError::new(tok, "every star needs at least one leaf"))
            }
            FamilySpec::CompleteMultipartite(parts) if parts.len() < 2 => Err(SpecError::new(
                tok,
                "a multipartite graph needs at least two parts",
            )),
            FamilySpec::CompleteMultipartite(parts) if parts.contains(&0) => {
                Err(SpecError::new(tok, "every part needs at least one vertex"))
            }
            FamilySpec::Path(n) if *n < 2 => Err(SpecError::new(tok, "paths need n >= 2")),
            FamilySpec::Cycle(n) if *n < 3 => Err(SpecError::new(tok, "cycles need n >= 3")),
            FamilySpec::Arbitrary(g6) => parse_graph6(g6)
                .map(|_| ())
                .map_err(|e| SpecError::new(tok, e.to_string())),
            _ => Ok(()),
        }
    }

    /// Vertex count without building the graph (graph6 specs are decoded).
    pub fn vertex_count(&self) -> usize {
        match self {
            FamilySpec::Complete(n) | FamilySpec::Path(n) | FamilySpec::Cycle(n) => *n,
            FamilySpec::Star(n) => n + 1,
            FamilySpec::StarForest(leaves) => leaves.iter().map(|l| l + 1).sum(),
            FamilySpec::CompleteMultipartite(parts) => parts.iter().sum(),
            FamilySpec::Arbitrary(g6) => parse_graph6(g6).map_or(0, |g| g.vertex_count()),
        }
    }

    /// Part sizes when the family is complete (one part) or complete
    /// multipartite; these are the boards the counts solver handles.
    pub fn part_sizes(&self) -> Option<Vec<usize>> {
        match self {
            FamilySpec::Complete(n) => Some(vec![*n]),
            FamilySpec::Star(n) => Some(vec![1, *n]),
            FamilySpec::CompleteMultipartite(parts) => Some(parts.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(xs: &[usize], sep: &str) -> String {
            xs.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(sep)
        }
        match self {
            FamilySpec::Complete(n) => write!(f, "K{n}"),
            FamilySpec::Star(n) => write!(f, "S{n}"),
            FamilySpec::StarForest(l) => write!(f, "stars:{}", join(l, "+")),
            FamilySpec::CompleteMultipartite(p) => write!(f, "K{}", join(p, ",")),
            FamilySpec::Path(n) => write!(f, "P{n}"),
            FamilySpec::Cycle(n) => write!(f, "C{n}"),
            FamilySpec::Arbitrary(g6) => write!(f, "g6:{g6}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_family_spec(s)
    }
}

impl TryFrom<String> for FamilySpec {
    type Error = SpecError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse_family_spec(&s)
    }
}

impl From<FamilySpec> for String {
    fn from(spec: FamilySpec) -> Self {
        spec.to_string()
    }
}

fn number(token: &str) -> Result<usize, SpecError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(SpecError::new(token, "expected a non-negative integer"));
    }
    token
        .parse()
        .map_err(|_| SpecError::new(token, "integer too large"))
}

/// Parses the family grammar described in the module docs and validates the
/// size bounds.
pub fn parse_family_spec(text: &str) -> Result<FamilySpec, SpecError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(SpecError::new("", "empty graph spec"));
    }
    let spec = if let Some(rest) = text.strip_prefix("stars:") {
        let leaves = rest.split('+').map(number).collect::<Result<Vec<_>, _>>()?;
        FamilySpec::StarForest(leaves)
    } else if let Some(rest) = text.strip_prefix("g6:") {
        parse_graph6(rest).map_err(|e| SpecError::new(rest, e.to_string()))?;
        FamilySpec::Arbitrary(rest.to_string())
    } else {
        let mut chars = text.chars();
        let head = chars.next().expect("nonempty");
        let rest = chars.as_str();
        match head {
            'K' if rest.contains(',') => FamilySpec::CompleteMultipartite(
                rest.split(',').map(number).collect::<Result<_, _>>()?,
            ),
            'K' => FamilySpec::Complete(number(rest)?),
            'S' => FamilySpec::Star(number(rest)?),
            'P' => FamilySpec::Path(number(rest)?),
            'C' => FamilySpec::Cycle(number(rest)?),
            _ => {
                let token: String = text.chars().take_while(|c| !c.is_ascii_digit()).collect();
                let token = if token.is_empty() {
                    text.to_string()
                } else {
                    token
                };
                return Err(SpecError::new(token, "unknown graph family"));
            }
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Builds the concrete graph for a (valid) spec using the numbering
/// conventions in the module docs.
pub fn build_family(spec: &FamilySpec) -> Result<Graph, SpecError> {
    spec.validate()?;
    let g = match spec {
        FamilySpec::Complete(n) => complete_multipartite(&vec![1; *n]),
        FamilySpec::Star(n) => star(*n),
        FamilySpec::StarForest(leaves) => {
            let stars: Vec<Graph> = leaves.iter().map(|&l| star(l)).collect();
            disjoint_union(&stars)
        }
        FamilySpec::CompleteMultipartite(parts) => complete_multipartite(parts),
        FamilySpec::Path(n) => Graph::new(*n, (1..*n).map(|i| (i - 1, i))).expect("path"),
        FamilySpec::Cycle(n) => Graph::new(*n, (0..*n).map(|i| (i, (i + 1) % n))).expect("cycle"),
        FamilySpec::Arbitrary(g6) => {
            parse_graph6(g6).map_err(|e| SpecError::new(g6.as_str(), e.to_string()))?
        }
    };
    Ok(g)
}

fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|l| (0, l))).expect("star")
}

fn complete_multipartite(parts: &[usize]) -> Graph {
    let owner: Vec<usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(p, &size)| std::iter::repeat_n(p, size))
        .collect();
    let n = owner.len();
    let edges = (0..n).flat_map(|a| {
        let owner = &owner;
        (a + 1..n)
            .filter(move |&b| owner[a] != owner[b])
            .map(move |b| (a, b))
    });
    Graph::new(n, edges).expect("multipartite")
}

/// Places the parts side by side; part `i` is shifted by the total vertex
/// count of the parts before it.
pub fn disjoint_union(parts: &[Graph]) -> Graph {
    let mut offset = 0;
    let mut edges = Vec::new();
    for g in parts {
        edges.extend(g.edges().iter().map(|&(a, b)| (a + offset, b + offset)));
        offset += g.vertex_count();
    }
    Graph::new(offset, edges).expect("offsets keep parts disjoint")
}

/// Encodes a built graph as an `Arbitrary` spec.
pub fn arbitrary_spec(g: &Graph) -> FamilySpec {
    FamilySpec::Arbitrary(encode_graph6(g))
}
