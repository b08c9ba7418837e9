use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::graph6;

/// A family of immersion targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    Clique {
        k: usize,
    },
    CompleteBipartite {
        s: usize,
        t: usize,
    },
    /// `K^m_{m,t}`: `K_{m,t}` whose `m`-side is a clique.
    CliqueToppedBipartite {
        m: usize,
        t: usize,
    },
    Explicit {
        graph6: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("target parameters must be positive")]
    NonPositive,
    #[error("target has {0} vertices, more than supported")]
    TooLarge(usize),
    #[error("invalid explicit target: {0}")]
    Graph6(#[from] graph6::Graph6Error),
    #[error("cannot parse target {0:?}; expected kst:S,T | clique:K | kll:L,T | g6:<line>")]
    Syntax(String),
}

impl TargetSpec {
    pub fn order(&self) -> Result<usize, TargetError> {
        Ok(match self {
            TargetSpec::Clique { k } => *k,
            TargetSpec::CompleteBipartite { s, t } => s + t,
            TargetSpec::CliqueToppedBipartite { m, t } => m + t,
            TargetSpec::Explicit { graph6 } => graph6::decode(graph6)?.order(),
        })
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Clique { k } => write!(f, "clique:{k}"),
            TargetSpec::CompleteBipartite { s, t } => write!(f, "kst:{s},{t}"),
            TargetSpec::CliqueToppedBipartite { m, t } => write!(f, "kll:{m},{t}"),
            TargetSpec::Explicit { graph6 } => write!(f, "g6:{graph6}"),
        }
    }
}

impl FromStr for TargetSpec {
    type Err = TargetError;

    fn from_str(s: &str) -> Result<Self, TargetError> {
        let syntax = || TargetError::Syntax(s.to_string());
        let (kind, args) = s.split_once(':').ok_or_else(syntax)?;
        let pair = |args: &str| -> Result<(usize, usize), TargetError> {
            let (a, b) = args.split_once(',').ok_or_else(syntax)?;
            Ok((
                a.trim().parse().map_err(|_| syntax())?,
                b.trim().parse().map_err(|_| syntax())?,
            ))
        };
        let spec = match kind {
            "clique" => TargetSpec::Clique {
                k: args.trim().parse().map_err(|_| syntax())?,
            },
            "kst" => {
                let (s, t) = pair(args)?;
                TargetSpec::CompleteBipartite { s, t }
            }
            "kll" => {
                let (m, t) = pair(args)?;
                TargetSpec::CliqueToppedBipartite { m, t }
            }
            "g6" => {
                graph6::decode(args)?;
                TargetSpec::Explicit {
                    graph6: args.to_string(),
                }
            }
            _ => return Err(syntax()),
        };
        Ok(spec)
    }
}

/// Builds the target graph. Clique vertices and the first bipartition side come first.
pub fn make_target(spec: &TargetSpec) -> Result<Graph, TargetError> {
    let too_large = |n: usize| TargetError::TooLarge(n);
    match *spec {
        TargetSpec::Clique { k } => {
            if k == 0 {
                return Err(TargetError::NonPositive);
            }
            Graph::complete(k).map_err(|_| too_large(k))
        }
        TargetSpec::CompleteBipartite { s, t } => {
            if s == 0 || t == 0 {
                return Err(TargetError::NonPositive);
            }
            let edges: Vec<_> = (0..s)
                .flat_map(|i| (s..s + t).map(move |j| (i, j)))
                .collect();
            Graph::from_edges(s + t, &edges).map_err(|_| too_large(s + t))
        }
        TargetSpec::CliqueToppedBipartite { m, t } => {
            if m == 0 || t == 0 {
                return Err(TargetError::NonPositive);
            }
            let mut edges: Vec<_> = (0..m)
                .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                .collect();
            edges.extend((0..m).flat_map(|i| (m..m + t).map(move |j| (i, j))));
            Graph::from_edges(m + t, &edges).map_err(|_| too_large(m + t))
        }
        TargetSpec::Explicit { ref graph6 } => Ok(graph6::decode(graph6)?),
    }
}
