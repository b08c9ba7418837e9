//! Immersion certificates and their checker.
//!
//! The checker deliberately uses nothing but adjacency queries on the host graph, so a bug in
//! the search cannot hide behind a matching bug here.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::Graph;

/// The walk realizing one edge of the target graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertPath {
    pub h_edge: [usize; 2],
    pub walk: Vec<usize>,
}

/// Witness that `h` is immersed in `g`: an injective branch map and one walk per edge of
/// `h`, pairwise edge-disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImmersionCertificate {
    /// `branch[i]` is the host vertex of target vertex `i`.
    pub branch: Vec<usize>,
    pub paths: Vec<CertPath>,
}

impl ImmersionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    /// First 16 hex digits of the SHA-256 of the JSON encoding.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_json().as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn path_for(&self, u: usize, v: usize) -> Option<&CertPath> {
        self.paths
            .iter()
            .find(|p| p.h_edge == [u, v] || p.h_edge == [v, u])
    }

    /// Sum of walk lengths, in edges.
    pub fn total_length(&self) -> usize {
        self.paths
            .iter()
            .map(|p| p.walk.len().saturating_sub(1))
            .sum()
    }
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Violation {
    BranchLength {
        expected: usize,
        found: usize,
    },
    BranchOutOfRange {
        h_vertex: usize,
        vertex: usize,
    },
    NonInjective {
        h_vertices: [usize; 2],
        vertex: usize,
    },
    /// A walk is listed for a pair that is not an edge of the target.
    UnknownEdge {
        h_edge: [usize; 2],
    },
    DuplicatePath {
        h_edge: [usize; 2],
    },
    MissingPath {
        h_edge: [usize; 2],
    },
    EndpointMismatch {
        h_edge: [usize; 2],
        expected: [usize; 2],
        found: [Option<usize>; 2],
    },
    NotAdjacent {
        h_edge: [usize; 2],
        step: [usize; 2],
    },
    RepeatedEdgeInPath {
        h_edge: [usize; 2],
        edge: [usize; 2],
    },
    SharedEdge {
        edge: [usize; 2],
        h_edges: [[usize; 2]; 2],
    },
}

impl Violation {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::BranchLength { .. } => "branch_length",
            Violation::BranchOutOfRange { .. } => "branch_out_of_range",
            Violation::NonInjective { .. } => "non_injective",
            Violation::UnknownEdge { .. } => "unknown_edge",
            Violation::DuplicatePath { .. } => "duplicate_path",
            Violation::MissingPath { .. } => "missing_path",
            Violation::EndpointMismatch { .. } => "endpoint_mismatch",
            Violation::NotAdjacent { .. } => "not_adjacent",
            Violation::RepeatedEdgeInPath { .. } => "repeated_edge_in_path",
            Violation::SharedEdge { .. } => "shared_edge",
        }
    }
}

fn key(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Checks, in order: branch map shape and injectivity, one walk per target edge, endpoints,
/// host adjacency along each walk, no edge repeated inside a walk, and no host edge shared
/// between walks. Runs in time linear in the total walk length.
pub fn verify_certificate(g: &Graph, h: &Graph, c: &ImmersionCertificate) -> Result<(), Violation> {
    if c.branch.len() != h.order() {
        return Err(Violation::BranchLength {
            expected: h.order(),
            found: c.branch.len(),
        });
    }
    let mut image: HashMap<usize, usize> = HashMap::new();
    for (i, &v) in c.branch.iter().enumerate() {
        if v >= g.order() {
            return Err(Violation::BranchOutOfRange {
                h_vertex: i,
                vertex: v,
            });
        }
        if let Some(&j) = image.get(&v) {
            return Err(Violation::NonInjective {
                h_vertices: [j, i],
                vertex: v,
            });
        }
        image.insert(v, i);
    }

    let mut covered: HashSet<[usize; 2]> = HashSet::new();
    for p in &c.paths {
        let [a, b] = p.h_edge;
        if !h.has_edge(a, b) {
            return Err(Violation::UnknownEdge { h_edge: p.h_edge });
        }
        if !covered.insert(key(a, b)) {
            return Err(Violation::DuplicatePath { h_edge: p.h_edge });
        }
    }
    for a in 0..h.order() {
        for b in a + 1..h.order() {
            if h.has_edge(a, b) && !covered.contains(&[a, b]) {
                return Err(Violation::MissingPath { h_edge: [a, b] });
            }
        }
    }

    for p in &c.paths {
        let [a, b] = p.h_edge;
        let expected = [c.branch[a], c.branch[b]];
        let found = [p.walk.first().copied(), p.walk.last().copied()];
        if found != [Some(expected[0]), Some(expected[1])] {
            return Err(Violation::EndpointMismatch {
                h_edge: p.h_edge,
                expected,
                found,
            });
        }
    }

    let mut owner: HashMap<[usize; 2], [usize; 2]> = HashMap::new();
    for p in &c.paths {
        let mut own: HashSet<[usize; 2]> = HashSet::new();
        for step in p.walk.windows(2) {
            if !g.has_edge(step[0], step[1]) {
                return Err(Violation::NotAdjacent {
                    h_edge: p.h_edge,
                    step: [step[0], step[1]],
                });
            }
            let e = key(step[0], step[1]);
            if !own.insert(e) {
                return Err(Violation::RepeatedEdgeInPath {
                    h_edge: p.h_edge,
                    edge: e,
                });
            }
        }
    }
    for p in &c.paths {
        for step in p.walk.windows(2) {
            let e = key(step[0], step[1]);
            if let Some(&other) = owner.get(&e) {
                return Err(Violation::SharedEdge {
                    edge: e,
                    h_edges: [other, p.h_edge],
                });
            }
            owner.insert(e, p.h_edge);
        }
    }
    Ok(())
}
