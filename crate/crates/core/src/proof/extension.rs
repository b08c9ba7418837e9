//! Growing the large side of a complete bipartite immersion by one vertex, using a
//! non-adjacent pair with enough common neighbors.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};
use crate::immersion::{
    make_target, verify_certificate, CertPath, ImmersionCertificate, TargetSpec, Violation,
};
use crate::invariants::independence_number;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0} and {1} are adjacent or equal")]
    NotAPair(usize, usize),
    #[error("independence number is {0}, expected 2")]
    Alpha(usize),
    #[error("the small side must have at least one vertex")]
    EmptySmallSide,
    #[error("premise violated: the pair has {common} common neighbors, fewer than {needed}")]
    PremiseViolated { common: usize, needed: usize },
    #[error("inner certificate has {0} branch vertices, fewer than the small side plus one")]
    InnerTooSmall(usize),
    #[error("inner certificate rejected in the reduced graph: {0:?}")]
    InnerInvalid(Violation),
}

/// How the small side `L` of the inner immersion sits relative to the pair `u, v`, when
/// neither of them is complete to `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub u: usize,
    pub v: usize,
    pub small_side: VertexSet,
    /// Adjacent to `u` only.
    pub u_only: VertexSet,
    /// Adjacent to both.
    pub both: VertexSet,
    /// Adjacent to `v` only.
    pub v_only: VertexSet,
    /// Common neighbors of the pair outside the small side.
    pub spare: VertexSet,
    /// `(c, f(c))` for each `c` in `v_only`: the spare vertex carrying the detour `u-f(c)-v-c`.
    pub detours: Vec<(usize, usize)>,
}

/// Partitions `small_side` around the non-adjacent pair and matches the `v`-only part into the
/// spare common neighbors in ascending order. Returns `None` when there are too few spare
/// vertices.
pub fn extension_witness(
    g: &Graph,
    u: usize,
    v: usize,
    small_side: VertexSet,
) -> Option<ExtensionWitness> {
    let (nu, nv) = (g.neighbors(u), g.neighbors(v));
    let common = nu.intersection(nv);
    let spare = common.difference(small_side);
    let v_only = small_side.intersection(nv).difference(nu);
    if spare.len() < v_only.len() {
        return None;
    }
    Some(ExtensionWitness {
        u,
        v,
        small_side,
        u_only: small_side.intersection(nu).difference(nv),
        both: small_side.intersection(common),
        v_only,
        spare,
        detours: v_only.iter().zip(spare.iter()).collect(),
    })
}

/// Turns a `K_{ell,k}` certificate in `g - {u, v}` (in that graph's labels) into a
/// `K_{ell,k+1}` certificate in `g`. The inner walks are kept and the new big-side vertex is
/// `u`, or `v` when only `v` is complete to the small side. Small-side vertices not adjacent
/// to `u` are reached through detours `u-f(c)-v-c` over distinct spare common neighbors.
pub fn claim1_extend(
    g: &Graph,
    u: usize,
    v: usize,
    ell: usize,
    inner: &ImmersionCertificate,
) -> Result<ImmersionCertificate, ExtendError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v || g.has_edge(u, v) {
        return Err(ExtendError::NotAPair(u, v));
    }
    let alpha = independence_number(g);
    if alpha != 2 {
        return Err(ExtendError::Alpha(alpha));
    }
    if ell == 0 {
        return Err(ExtendError::EmptySmallSide);
    }
    let common = g.neighbors(u).intersection(g.neighbors(v)).len();
    if common + 1 < ell {
        return Err(ExtendError::PremiseViolated {
            common,
            needed: ell - 1,
        });
    }
    if inner.branch.len() <= ell {
        return Err(ExtendError::InnerTooSmall(inner.branch.len()));
    }
    let k = inner.branch.len() - ell;
    let (reduced, map) = g.delete_vertices([u, v].into_iter().collect());
    let inner_target =
        make_target(&TargetSpec::CompleteBipartite { s: ell, t: k }).expect("orders fit");
    verify_certificate(&reduced, &inner_target, inner).map_err(ExtendError::InnerInvalid)?;

    let lift = |w: usize| map.backward[w];
    let mut branch: Vec<usize> = inner.branch.iter().map(|&w| lift(w)).collect();
    let mut paths: Vec<CertPath> = inner
        .paths
        .iter()
        .map(|p| CertPath {
            h_edge: p.h_edge,
            walk: p.walk.iter().map(|&w| lift(w)).collect(),
        })
        .collect();
    let small: Vec<usize> = branch[..ell].to_vec();
    let small_side: VertexSet = small.iter().copied().collect();
    let new = ell + k;

    let joined = [u, v]
        .into_iter()
        .find(|&w| small_side.is_subset(g.neighbors(w)));
    match joined {
        Some(w) => {
            branch.push(w);
            paths.extend(small.iter().enumerate().map(|(i, &l)| CertPath {
                h_edge: [i, new],
                walk: vec![l, w],
            }));
        }
        None => {
            let witness = extension_witness(g, u, v, small_side)
                .expect("a pair with ell - 1 common neighbors leaves enough spare vertices");
            branch.push(u);
            for (i, &l) in small.iter().enumerate() {
                let walk = match witness.detours.iter().find(|&&(c, _)| c == l) {
                    Some(&(c, spare)) => vec![c, v, spare, u],
                    None => vec![l, u],
                };
                paths.push(CertPath {
                    h_edge: [i, new],
                    walk,
                });
            }
        }
    }
    Ok(ImmersionCertificate { branch, paths })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c5_joins_through_v() {
        let c5 = Graph::cycle(5).unwrap();
        // g - {0, 2} relabels 1, 3, 4 as 0, 1, 2; small side {3}, big side {4}
        let inner = ImmersionCertificate {
            branch: vec![1, 2],
            paths: vec![CertPath {
                h_edge: [0, 1],
                walk: vec![1, 2],
            }],
        };
        let out = claim1_extend(&c5, 0, 2, 1, &inner).unwrap();
        assert_eq!(out.branch, vec![3, 4, 2]);
        let k12 = make_target(&TargetSpec::CompleteBipartite { s: 1, t: 2 }).unwrap();
        assert_eq!(verify_certificate(&c5, &k12, &out), Ok(()));
    }

    #[test]
    fn premise_and_usage_errors() {
        let c5 = Graph::cycle(5).unwrap();
        let inner = ImmersionCertificate {
            branch: vec![1, 2],
            paths: vec![CertPath {
                h_edge: [0, 1],
                walk: vec![1, 2],
            }],
        };
        assert_eq!(
            claim1_extend(&c5, 0, 2, 3, &inner),
            Err(ExtendError::PremiseViolated {
                common: 1,
                needed: 2
            })
        );
        assert_eq!(
            claim1_extend(&c5, 0, 1, 1, &inner),
            Err(ExtendError::NotAPair(0, 1))
        );
        assert_eq!(
            claim1_extend(&c5, 0, 2, 0, &inner),
            Err(ExtendError::EmptySmallSide)
        );
        let broken = ImmersionCertificate {
            branch: vec![0, 1],
            paths: vec![CertPath {
                h_edge: [0, 1],
                walk: vec![0, 1],
            }],
        };
        assert!(matches!(
            claim1_extend(&c5, 0, 2, 1, &broken),
            Err(ExtendError::InnerInvalid(_))
        ));
        let c6 = Graph::cycle(6).unwrap();
        assert_eq!(
            claim1_extend(&c6, 0, 2, 1, &inner),
            Err(ExtendError::Alpha(3))
        );
    }

    #[test]
    fn witness_partitions_small_side() {
        // u = 0, v = 1 non-adjacent; 2 sees both, 3 sees only u, 4 sees only v, 5 and 6 see both
        let g = Graph::from_edges(
            7,
            &[
                (0, 2),
                (1, 2),
                (0, 3),
                (1, 4),
                (0, 5),
                (1, 5),
                (0, 6),
                (1, 6),
            ],
        )
        .unwrap();
        let w = extension_witness(&g, 0, 1, [2, 3, 4].into_iter().collect()).unwrap();
        assert_eq!(w.u_only.to_vec(), vec![3]);
        assert_eq!(w.both.to_vec(), vec![2]);
        assert_eq!(w.v_only.to_vec(), vec![4]);
        assert_eq!(w.spare.to_vec(), vec![5, 6]);
        assert_eq!(w.detours, vec![(4, 5)]);
        assert!(extension_witness(&g, 0, 1, [4].into_iter().collect()).is_some());
        let sparse = Graph::from_edges(5, &[(0, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(
            extension_witness(&sparse, 0, 1, [3, 4].into_iter().collect()),
            None
        );
    }
}
