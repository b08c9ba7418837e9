//! A complete bipartite immersion built from a non-adjacent pair inside the common
//! neighborhood of a decomposition, with the crossing connections routed through a
//! cyclically shifted set of relay vertices.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::immersion::{CertPath, ImmersionCertificate};
use crate::proof::decomposition::Decomposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossingError {
    #[error("{0} is not a common neighbor of the decomposed pair")]
    NotCommon(usize),
    #[error("{0} and {1} are adjacent or equal")]
    NotAPair(usize, usize),
    #[error("the graph has even order {0}")]
    EvenOrder(usize),
    #[error("small side size {ell} must be between 1 and {max}")]
    SmallSide { ell: usize, max: usize },
    #[error("the non-neighbor sets of the pair overlap in a clique")]
    Overlap,
    #[error(
        "premise violated: {found} non-neighbors of the pair in the x-clique, need more than {ell}"
    )]
    PremiseViolated { found: usize, ell: usize },
    #[error("{found} non-neighbors of u in the x-clique exceed the small side size {ell}")]
    SmallSideOverfull { found: usize, ell: usize },
    #[error("{found} non-neighbors of u in the y-clique, need {needed} big-side vertices there")]
    TooFewCrossing { found: usize, needed: usize },
    #[error("{relays} relay vertices cannot carry {rows} by {cols} crossing connections")]
    TooFewRelays {
        relays: usize,
        rows: usize,
        cols: usize,
    },
}

/// Builds a `K_{ell, m+1-ell}` certificate (`n = 2m + 1`) from a decomposition of `g` and a
/// non-adjacent pair `u, v` of common neighbors.
///
/// When `v` misses fewer x-clique vertices than y-clique vertices the decomposition is
/// mirrored first. The small side is the non-neighbors of `u` in the x-clique topped up with
/// the lowest non-neighbors of `v` there (`x_1, x_2, ...`); the big side is the rest of the
/// x-clique plus the lowest non-neighbors of `u` in the y-clique (`y_1, y_2, ...`), truncated
/// to size when the x-clique alone is large enough. The pair `x_i, y_j` is joined by
/// `x_i - z - y_j` where `z` is entry `(i + j) mod r` of the `r` non-neighbors of `v` in the
/// y-clique; every other pair is adjacent. Indices are zero-based and ascending.
pub fn claim4_construct(
    g: &Graph,
    d: &Decomposition,
    u: usize,
    v: usize,
    ell: usize,
) -> Result<ImmersionCertificate, CrossingError> {
    for w in [u, v] {
        if !d.common.contains(w) {
            return Err(CrossingError::NotCommon(w));
        }
    }
    if u == v || g.has_edge(u, v) {
        return Err(CrossingError::NotAPair(u, v));
    }
    let n = g.order();
    if n.is_multiple_of(2) {
        return Err(CrossingError::EvenOrder(n));
    }
    let m = n / 2;
    if ell == 0 || ell > m {
        return Err(CrossingError::SmallSide { ell, max: m });
    }
    let split =
        |d: &Decomposition, a: usize| d.split(a).cloned().expect("common vertices have splits");
    let mirrored;
    let d = if split(d, v).x_non.len() < split(d, v).y_non.len() {
        mirrored = d.mirrored();
        &mirrored
    } else {
        d
    };
    let (su, sv) = (split(d, u), split(d, v));
    if !su.x_non.is_disjoint(sv.x_non) || !su.y_non.is_disjoint(sv.y_non) {
        return Err(CrossingError::Overlap);
    }
    let union = su.x_non.union(sv.x_non).len();
    if union <= ell {
        return Err(CrossingError::PremiseViolated { found: union, ell });
    }
    if su.x_non.len() > ell {
        return Err(CrossingError::SmallSideOverfull {
            found: su.x_non.len(),
            ell,
        });
    }
    let crossing_needed = (m + 1).saturating_sub(d.x_side.len());
    if su.y_non.len() < crossing_needed {
        return Err(CrossingError::TooFewCrossing {
            found: su.y_non.len(),
            needed: crossing_needed,
        });
    }
    let xs: Vec<usize> = sv.x_non.iter().take(ell - su.x_non.len()).collect();
    let ys: Vec<usize> = su.y_non.iter().take(crossing_needed).collect();
    let relays = sv.y_non.to_vec();
    let crossings = !xs.is_empty() && !ys.is_empty();
    if crossings && (relays.len() < xs.len() || relays.len() < ys.len()) {
        return Err(CrossingError::TooFewRelays {
            relays: relays.len(),
            rows: xs.len(),
            cols: ys.len(),
        });
    }

    let small: VertexSet = su.x_non.union(xs.iter().copied().collect());
    let big_total = m + 1 - ell;
    let mut big: Vec<usize> = d.x_side.difference(small).iter().take(big_total).collect();
    big.extend(&ys);
    let small = small.to_vec();
    let index_of = |list: &[usize], w: usize| list.iter().position(|&z| z == w);

    let mut branch = small.clone();
    branch.extend(&big);
    let mut paths = Vec::with_capacity(ell * big_total);
    for (i, &s) in small.iter().enumerate() {
        for (j, &b) in big.iter().enumerate() {
            let walk = match (index_of(&xs, s), index_of(&ys, b)) {
                (Some(xi), Some(yj)) => vec![s, relays[(xi + yj) % relays.len()], b],
                _ => vec![s, b],
            };
            paths.push(CertPath {
                h_edge: [i, ell + j],
                walk,
            });
        }
    }
    Ok(ImmersionCertificate { branch, paths })
}

/// Block sizes for a synthetic graph matching the decomposition pattern of
/// [`claim4_construct`]: an x-clique and a y-clique, and two non-adjacent common neighbors
/// `u, v` of `x` and `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowUp {
    /// x-clique vertices missed by `u`, then by `v`, then seen by both (including `x`).
    pub x_miss_u: usize,
    pub x_miss_v: usize,
    pub x_rest: usize,
    pub y_miss_u: usize,
    pub y_miss_v: usize,
    pub y_rest: usize,
}

/// Labelled parts of a [`BlowUp`] graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUpGraph {
    pub graph: Graph,
    pub x: usize,
    pub y: usize,
    pub u: usize,
    pub v: usize,
}

impl BlowUp {
    pub fn order(&self) -> usize {
        2 + self.x_miss_u
            + self.x_miss_v
            + self.x_rest
            + self.y_miss_u
            + self.y_miss_v
            + self.y_rest
    }

    /// Vertices are laid out as `u, v`, the x-clique blocks in field order, then the y-clique
    /// blocks; `x` and `y` are the first vertices of the respective rest blocks. Each block
    /// missed by `u` (resp. `v`) on one side is complete to the block missed by `u` (resp. `v`)
    /// on the other side, which keeps the independence number at two; `x` and `y` have no
    /// neighbors across. Returns `None` if a rest block is empty or the order exceeds 64.
    pub fn build(&self) -> Option<BlowUpGraph> {
        if self.x_rest == 0 || self.y_rest == 0 || self.order() > 64 {
            return None;
        }
        let (u, v) = (0, 1);
        let mut next = 2;
        let mut block = |len: usize| {
            let b: Vec<usize> = (next..next + len).collect();
            next += len;
            b
        };
        let (xu, xv, xr) = (
            block(self.x_miss_u),
            block(self.x_miss_v),
            block(self.x_rest),
        );
        let (yu, yv, yr) = (
            block(self.y_miss_u),
            block(self.y_miss_v),
            block(self.y_rest),
        );
        let mut edges = Vec::new();
        for side in [[&xu, &xv, &xr], [&yu, &yv, &yr]] {
            let all: Vec<usize> = side.iter().flat_map(|b| b.iter().copied()).collect();
            for (i, &a) in all.iter().enumerate() {
                edges.extend(all[i + 1..].iter().map(|&b| (a, b)));
            }
            edges.extend(side[1].iter().chain(side[2]).map(|&w| (u, w)));
            edges.extend(side[0].iter().chain(side[2]).map(|&w| (v, w)));
        }
        for (p, q) in [(&xu, &yu), (&xv, &yv)] {
            edges.extend(p.iter().flat_map(|&a| q.iter().map(move |&b| (a, b))));
        }
        Some(BlowUpGraph {
            graph: Graph::from_edges(self.order(), &edges).ok()?,
            x: xr[0],
            y: yr[0],
            u,
            v,
        })
    }
}
