//! Immersion as rewriting: edge lifts and deletions, and a breadth-first rewriting search that
//! serves as an independent oracle for the path-based solver on tiny graphs.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_form;
use crate::graph::{Graph, VertexMap, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftStep {
    /// Replace `uv`, `vw` by `uw`.
    Lift([usize; 3]),
    DeleteVertex(usize),
    DeleteEdge([usize; 2]),
}

/// Serialized as a JSON array of externally tagged steps, e.g. `[{"lift":[0,1,2]}]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LiftSequence {
    pub steps: Vec<LiftStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {u}-{v} is not present")]
    MissingEdge { u: usize, v: usize },
    #[error("lift endpoints must differ, got {0} twice")]
    EqualEndpoints(usize),
    #[error("chord {u}-{w} already present; the lift would create a parallel edge")]
    ExistingChord { u: usize, w: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index} is not applicable: {error}")]
pub struct SequenceError {
    pub index: usize,
    pub error: LiftError,
}

fn in_range(g: &Graph, vs: &[usize]) -> Result<(), LiftError> {
    match vs.iter().find(|&&v| v >= g.order()) {
        Some(&vertex) => Err(LiftError::VertexOutOfRange {
            vertex,
            n: g.order(),
        }),
        None => Ok(()),
    }
}

/// Deletes `uv` and `vw` and adds `uw`.
pub fn lift(g: &Graph, u: usize, v: usize, w: usize) -> Result<Graph, LiftError> {
    in_range(g, &[u, v, w])?;
    if u == w {
        return Err(LiftError::EqualEndpoints(u));
    }
    if !g.has_edge(u, v) {
        return Err(LiftError::MissingEdge { u, v });
    }
    if !g.has_edge(v, w) {
        return Err(LiftError::MissingEdge { u: v, v: w });
    }
    if g.has_edge(u, w) {
        return Err(LiftError::ExistingChord { u, w });
    }
    let mut out = g.clone();
    out.remove_edge(u, v);
    out.remove_edge(v, w);
    out.add_edge(u, w);
    Ok(out)
}

fn apply_step(g: &Graph, step: LiftStep) -> Result<(Graph, Option<VertexMap>), LiftError> {
    match step {
        LiftStep::Lift([u, v, w]) => lift(g, u, v, w).map(|h| (h, None)),
        LiftStep::DeleteEdge([u, v]) => {
            in_range(g, &[u, v])?;
            if !g.has_edge(u, v) {
                return Err(LiftError::MissingEdge { u, v });
            }
            let mut h = g.clone();
            h.remove_edge(u, v);
            Ok((h, None))
        }
        LiftStep::DeleteVertex(v) => {
            in_range(g, &[v])?;
            let (h, map) = g.delete_vertices(VertexSet::singleton(v));
            Ok((h, Some(map)))
        }
    }
}

/// Applies the steps left to right. Returns the final graph and the map from original
/// vertices to surviving ones.
pub fn apply_sequence(g: &Graph, seq: &LiftSequence) -> Result<(Graph, VertexMap), SequenceError> {
    let mut cur = g.clone();
    let mut map = VertexMap::identity(g.order());
    for (index, &step) in seq.steps.iter().enumerate() {
        let (next, delta) =
            apply_step(&cur, step).map_err(|error| SequenceError { index, error })?;
        if let Some(delta) = delta {
            map = map.then(&delta);
        }
        cur = next;
    }
    Ok((cur, map))
}

/// Result of the rewriting search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteOutcome {
    /// A sequence whose result is isomorphic to the target.
    pub sequence: Option<LiftSequence>,
    /// True when the whole reachable space was explored; with no sequence this proves that the
    /// target is not immersed.
    pub exhausted: bool,
}

/// Breadth-first search over graphs reachable by lifts and edge deletions, memoized by
/// canonical form, down to `max_steps` rewriting steps. A state containing `h` as a subgraph
/// ends the search; the returned sequence is completed with the deletions that leave exactly
/// a copy of `h`. Every step removes one edge, so `max_steps >= |E(g)|` is always exhaustive.
pub fn immersion_by_rewriting(g: &Graph, h: &Graph, max_steps: usize) -> RewriteOutcome {
    if h.order() > g.order() || h.size() > g.size() {
        return RewriteOutcome {
            sequence: None,
            exhausted: true,
        };
    }
    struct Node {
        graph: Graph,
        parent: usize,
        step: Option<LiftStep>,
        depth: usize,
    }
    let mut nodes = vec![Node {
        graph: g.clone(),
        parent: usize::MAX,
        step: None,
        depth: 0,
    }];
    let mut seen: HashSet<Graph> = HashSet::from([canonical_form(g)]);
    let mut queue = VecDeque::from([0usize]);
    let mut cut = false;
    while let Some(idx) = queue.pop_front() {
        if let Some(embedding) = subgraph_embedding(&nodes[idx].graph, h) {
            let mut steps = Vec::new();
            let mut at = idx;
            while let Some(step) = nodes[at].step {
                steps.push(step);
                at = nodes[at].parent;
            }
            steps.reverse();
            steps.extend(trim_to_image(&nodes[idx].graph, h, &embedding));
            return RewriteOutcome {
                sequence: Some(LiftSequence { steps }),
                exhausted: false,
            };
        }
        let (graph, depth) = (nodes[idx].graph.clone(), nodes[idx].depth);
        if graph.size() <= h.size() {
            continue;
        }
        if depth >= max_steps {
            cut = true;
            continue;
        }
        for step in successors(&graph) {
            let (next, _) = apply_step(&graph, step).expect("successor steps are applicable");
            if seen.insert(canonical_form(&next)) {
                nodes.push(Node {
                    graph: next,
                    parent: idx,
                    step: Some(step),
                    depth: depth + 1,
                });
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    RewriteOutcome {
        sequence: None,
        exhausted: !cut,
    }
}

/// All lifts and edge deletions applicable to `g`, in a fixed order.
fn successors(g: &Graph) -> Vec<LiftStep> {
    let mut out = Vec::new();
    for v in 0..g.order() {
        let nb = g.neighbors(v).to_vec();
        for (i, &u) in nb.iter().enumerate() {
            for &w in &nb[i + 1..] {
                if !g.has_edge(u, w) {
                    out.push(LiftStep::Lift([u, v, w]));
                }
            }
        }
    }
    out.extend(g.edges().map(|(u, v)| LiftStep::DeleteEdge([u, v])));
    out
}

/// An injective map `V(h) → V(g)` carrying edges to edges, by plain backtracking.
pub fn subgraph_embedding(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    fn go(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: VertexSet) -> bool {
        let u = map.len();
        if u == h.order() {
            return true;
        }
        for cand in g.vertices().difference(used) {
            if g.degree(cand) < h.degree(u) {
                continue;
            }
            if h.neighbors(u)
                .iter()
                .filter(|&w| w < u)
                .all(|w| g.has_edge(map[w], cand))
            {
                map.push(cand);
                let mut next = used;
                next.insert(cand);
                if go(g, h, map, next) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    if h.order() > g.order() {
        return None;
    }
    let mut map = Vec::with_capacity(h.order());
    go(g, h, &mut map, VertexSet::EMPTY).then_some(map)
}

/// Deletions reducing `g` to the image of `h` under `embedding`: surplus edges first, then
/// unused vertices from the highest index down so earlier labels stay valid.
fn trim_to_image(g: &Graph, h: &Graph, embedding: &[usize]) -> Vec<LiftStep> {
    let image: HashSet<(usize, usize)> = h
        .edges()
        .map(|(a, b)| {
            let (x, y) = (embedding[a], embedding[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    let mut steps: Vec<LiftStep> = g
        .edges()
        .filter(|e| !image.contains(e))
        .map(|(u, v)| LiftStep::DeleteEdge([u, v]))
        .collect();
    let used: VertexSet = embedding.iter().copied().collect();
    let mut unused = g.vertices().difference(used).to_vec();
    unused.reverse();
    steps.extend(unused.into_iter().map(LiftStep::DeleteVertex));
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;

    #[test]
    fn lift_on_a_path() {
        let p3 = Graph::path(3).unwrap();
        let out = lift(&p3, 0, 1, 2).unwrap();
        assert_eq!(out.edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(out.degree(1), 0);
    }

    #[test]
    fn lift_on_c4_gives_triangle() {
        let c4 = Graph::cycle(4).unwrap();
        let out = lift(&c4, 0, 1, 2).unwrap();
        assert_eq!(
            out.edges().collect::<Vec<_>>(),
            vec![(0, 2), (0, 3), (2, 3)]
        );
        assert_eq!(out.size(), c4.size() - 1);
        assert_eq!(out.degree(1), c4.degree(1) - 2);
        assert_eq!(out.degree(0), c4.degree(0));
        assert_eq!(out.degree(2), c4.degree(2));
    }

    #[test]
    fn lift_errors() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(
            lift(&k3, 0, 1, 2),
            Err(LiftError::ExistingChord { u: 0, w: 2 })
        );
        assert_eq!(lift(&k3, 0, 1, 0), Err(LiftError::EqualEndpoints(0)));
        let p3 = Graph::path(3).unwrap();
        assert_eq!(
            lift(&p3, 1, 0, 2),
            Err(LiftError::MissingEdge { u: 0, v: 2 })
        );
        assert_eq!(
            lift(&p3, 0, 2, 1),
            Err(LiftError::MissingEdge { u: 0, v: 2 })
        );
        assert!(matches!(
            lift(&p3, 0, 1, 5),
            Err(LiftError::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn sequences_apply_in_order() {
        let c5 = Graph::cycle(5).unwrap();
        let (same, map) = apply_sequence(&c5, &LiftSequence::default()).unwrap();
        assert_eq!(same, c5);
        assert_eq!(map, VertexMap::identity(5));

        let seq = LiftSequence {
            steps: vec![LiftStep::DeleteVertex(4), LiftStep::DeleteEdge([3, 4])],
        };
        let err = apply_sequence(&c5, &seq).unwrap_err();
        assert_eq!(err.index, 1);

        let seq = LiftSequence {
            steps: vec![LiftStep::DeleteVertex(1), LiftStep::DeleteVertex(0)],
        };
        let (g, map) = apply_sequence(&c5, &seq).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(map.backward, vec![2, 3, 4]);
        assert_eq!(map.forward, vec![None, None, Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn rewriting_finds_triangle_in_c5() {
        let c5 = Graph::cycle(5).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let out = immersion_by_rewriting(&c5, &k3, 10);
        let seq = out.sequence.expect("C5 immerses K3");
        let lifts = seq
            .steps
            .iter()
            .filter(|s| matches!(s, LiftStep::Lift(_)))
            .count();
        assert_eq!(lifts, 2);
        let (result, _) = apply_sequence(&c5, &seq).unwrap();
        assert!(are_isomorphic(&result, &k3));
    }

    #[test]
    fn rewriting_identity_and_failure() {
        let g = Graph::petersen();
        let out = immersion_by_rewriting(&g, &g, 0);
        assert_eq!(out.sequence, Some(LiftSequence::default()));

        let p4 = Graph::path(4).unwrap();
        let out = immersion_by_rewriting(&p4, &Graph::complete(3).unwrap(), 10);
        assert_eq!(
            out,
            RewriteOutcome {
                sequence: None,
                exhausted: true
            }
        );

        // a budget too small to reach the target is undecided, not a refutation
        let c5 = Graph::cycle(5).unwrap();
        let out = immersion_by_rewriting(&c5, &Graph::complete(3).unwrap(), 1);
        assert_eq!(
            out,
            RewriteOutcome {
                sequence: None,
                exhausted: false
            }
        );
    }

    #[test]
    fn json_is_an_array_of_tagged_steps() {
        let seq = LiftSequence {
            steps: vec![
                LiftStep::Lift([0, 1, 2]),
                LiftStep::DeleteEdge([3, 4]),
                LiftStep::DeleteVertex(5),
            ],
        };
        let json = serde_json::to_string(&seq).unwrap();
        assert_eq!(
            json,
            r#"[{"lift":[0,1,2]},{"delete_edge":[3,4]},{"delete_vertex":5}]"#
        );
        assert_eq!(serde_json::from_str::<LiftSequence>(&json).unwrap(), seq);
    }
}
