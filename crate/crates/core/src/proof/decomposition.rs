use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};
use crate::invariants::independence_number;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0} and {1} are adjacent or equal; the decomposition needs a non-adjacent pair")]
    NotAPair(usize, usize),
    #[error("independence number is {0}, the decomposition needs exactly 2")]
    Alpha(usize),
}

/// How one common neighbor `a` splits the two cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split {
    pub a: usize,
    /// Members of the x-clique adjacent to `a`.
    pub x_adj: VertexSet,
    /// Members of the x-clique not adjacent to `a`.
    pub x_non: VertexSet,
    pub y_adj: VertexSet,
    pub y_non: VertexSet,
}

/// The partition of the vertex set around a non-adjacent pair `x, y`: their common
/// neighborhood, the clique of vertices missed by `y` (containing `x`) and the clique of
/// vertices missed by `x` (containing `y`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub x: usize,
    pub y: usize,
    pub common: VertexSet,
    pub x_side: VertexSet,
    pub y_side: VertexSet,
    /// One entry per common neighbor, in ascending order.
    pub splits: Vec<Split>,
    /// Members of the x-clique complete to all of `common`, and the rest.
    pub x_adj_all: VertexSet,
    pub x_non_all: VertexSet,
    pub y_adj_all: VertexSet,
    pub y_non_all: VertexSet,
}

impl Decomposition {
    pub fn split(&self, a: usize) -> Option<&Split> {
        self.splits.iter().find(|s| s.a == a)
    }

    /// The same decomposition with the roles of `x` and `y` exchanged.
    pub fn mirrored(&self) -> Decomposition {
        Decomposition {
            x: self.y,
            y: self.x,
            common: self.common,
            x_side: self.y_side,
            y_side: self.x_side,
            splits: self
                .splits
                .iter()
                .map(|s| Split {
                    a: s.a,
                    x_adj: s.y_adj,
                    x_non: s.y_non,
                    y_adj: s.x_adj,
                    y_non: s.x_non,
                })
                .collect(),
            x_adj_all: self.y_adj_all,
            x_non_all: self.y_non_all,
            y_adj_all: self.x_adj_all,
            y_non_all: self.x_non_all,
        }
    }
}

/// Decomposes `g` around the non-adjacent pair `x, y`. Requires `α(g) = 2`, which makes the
/// three parts cover the vertex set and the two sides cliques.
pub fn decompose(g: &Graph, x: usize, y: usize) -> Result<Decomposition, DecomposeError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y || g.has_edge(x, y) {
        return Err(DecomposeError::NotAPair(x, y));
    }
    let alpha = independence_number(g);
    if alpha != 2 {
        return Err(DecomposeError::Alpha(alpha));
    }
    Ok(decompose_unchecked(g, x, y))
}

/// [`decompose`] without the pair and independence-number checks.
pub(crate) fn decompose_unchecked(g: &Graph, x: usize, y: usize) -> Decomposition {
    let all = g.vertices();
    let common = g.neighbors(x).intersection(g.neighbors(y));
    let x_side = all.difference(g.closed_neighbors(y));
    let y_side = all.difference(g.closed_neighbors(x));
    let splits: Vec<Split> = common
        .iter()
        .map(|a| {
            let nb = g.neighbors(a);
            Split {
                a,
                x_adj: x_side.intersection(nb),
                x_non: x_side.difference(nb),
                y_adj: y_side.intersection(nb),
                y_non: y_side.difference(nb),
            }
        })
        .collect();
    let complete_to_common = |side: VertexSet| -> VertexSet {
        side.iter()
            .filter(|&w| common.is_subset(g.neighbors(w)))
            .collect()
    };
    let x_adj_all = complete_to_common(x_side);
    let y_adj_all = complete_to_common(y_side);
    Decomposition {
        x,
        y,
        common,
        x_side,
        y_side,
        splits,
        x_adj_all,
        x_non_all: x_side.difference(x_adj_all),
        y_adj_all,
        y_non_all: y_side.difference(y_adj_all),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::enumerate_alpha2;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn c5_example() {
        let c5 = Graph::cycle(5).unwrap();
        let d = decompose(&c5, 0, 2).unwrap();
        assert_eq!(d.common, set(&[1]));
        assert_eq!(d.x_side, set(&[0, 4]));
        assert_eq!(d.y_side, set(&[2, 3]));
        let s = d.split(1).unwrap();
        assert_eq!((s.x_adj, s.x_non), (set(&[0]), set(&[4])));
        assert_eq!((s.y_adj, s.y_non), (set(&[2]), set(&[3])));
        assert_eq!(d.x_adj_all, set(&[0]));
        assert_eq!(d.mirrored().mirrored(), d);
        assert_eq!(d.mirrored(), decompose(&c5, 2, 0).unwrap());
    }

    #[test]
    fn usage_errors() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(decompose(&c5, 0, 1), Err(DecomposeError::NotAPair(0, 1)));
        assert_eq!(decompose(&c5, 3, 3), Err(DecomposeError::NotAPair(3, 3)));
        assert!(matches!(
            decompose(&c5, 0, 7),
            Err(DecomposeError::Graph(_))
        ));
        let c6 = Graph::cycle(6).unwrap();
        assert_eq!(decompose(&c6, 0, 2), Err(DecomposeError::Alpha(3)));
    }

    #[test]
    fn petersen_complement_partitions() {
        let g = Graph::petersen().complement();
        for (x, y) in g.non_edges() {
            let d = decompose(&g, x, y).unwrap();
            assert_eq!(d.common.len() + d.x_side.len() + d.y_side.len(), 10);
        }
    }

    #[test]
    fn invariants_hold_exhaustively() {
        for n in 3..=8 {
            for g in enumerate_alpha2(n, true).unwrap() {
                for (x, y) in g.non_edges() {
                    let d = decompose(&g, x, y).unwrap();
                    assert!(d.common.is_disjoint(d.x_side) && d.x_side.is_disjoint(d.y_side));
                    assert!(d.common.is_disjoint(d.y_side));
                    assert_eq!(d.common.union(d.x_side).union(d.y_side), g.vertices());
                    assert!(d.x_side.contains(x) && d.y_side.contains(y));
                    assert!(g.is_clique(d.x_side) && g.is_clique(d.y_side));
                    for s in &d.splits {
                        assert_eq!(s.x_adj.union(s.x_non), d.x_side);
                        assert!(d.x_adj_all.is_subset(s.x_adj) && d.y_adj_all.is_subset(s.y_adj));
                        assert!(g.is_complete_to(s.x_non, s.y_non));
                    }
                }
            }
        }
    }
}
