//! Exact immersion search.
//!
//! The outer search enumerates injective branch maps, target vertex by target vertex, with a
//! degree filter, component check and an edge-count bound. Interchangeable target vertices
//! (twins: equal neighborhoods up to each other) are mapped in increasing host order, which
//! quotients out the part-internal symmetry of cliques and complete bipartite targets.
//!
//! For a complete branch map the inner search packs pairwise edge-disjoint paths, one per
//! target edge, by backtracking:
//! - a demand whose terminals are adjacent in the residual graph is routed over that edge
//!   (any solution can be rewired to do so);
//! - each terminal must keep residual degree at least its number of unrouted demands, and the
//!   residual edge count must cover the sum of residual distances;
//! - the demand with the fewest shortest paths is branched on, trying simple paths by
//!   increasing length and then lexicographically.

#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graph::{bit, Graph, VertexSet};
use crate::immersion::certificate::{CertPath, ImmersionCertificate};
use crate::immersion::target::{make_target, TargetError, TargetSpec};

/// Resource limits for one search. Exceeding either yields [`SearchOutcome::Undecided`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
    /// Wall-clock limit; ignored on targets without a clock.
    pub max_millis: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 50_000_000,
            max_millis: None,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            max_millis: None,
        }
    }

    pub fn doubled(self) -> Self {
        Budget {
            max_nodes: self.max_nodes.saturating_mul(2),
            max_millis: self.max_millis.map(|m| m.saturating_mul(2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ImmersionCertificate),
    /// The search was exhaustive: no immersion exists.
    NotFound,
    /// The budget ran out before the question was settled.
    Undecided,
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&ImmersionCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

/// Search statistics, useful for tuning budgets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub branch_maps: u64,
}

pub fn find_immersion(g: &Graph, h: &Graph, budget: Budget) -> SearchOutcome {
    find_immersion_with_stats(g, h, budget).0
}

pub fn find_immersion_with_stats(
    g: &Graph,
    h: &Graph,
    budget: Budget,
) -> (SearchOutcome, SearchStats) {
    if h.order() > g.order() || h.size() > g.size() {
        return (SearchOutcome::NotFound, SearchStats::default());
    }
    let mut search = Search::new(g, h, budget);
    let mut phi = vec![usize::MAX; h.order()];
    let outcome = match search.assign(0, &mut phi, 0, 0) {
        Ok(Some(c)) => SearchOutcome::Found(c),
        Ok(None) => SearchOutcome::NotFound,
        Err(Abort) => SearchOutcome::Undecided,
    };
    (outcome, search.stats)
}

/// `K_{s,t}` immersion; the first `s` branch vertices form the `s`-side.
pub fn find_kst_immersion(
    g: &Graph,
    s: usize,
    t: usize,
    budget: Budget,
) -> Result<SearchOutcome, TargetError> {
    find_target_immersion(g, &TargetSpec::CompleteBipartite { s, t }, budget)
}

pub fn find_target_immersion(
    g: &Graph,
    spec: &TargetSpec,
    budget: Budget,
) -> Result<SearchOutcome, TargetError> {
    let h = make_target(spec)?;
    Ok(find_immersion(g, &h, budget))
}

struct Abort;

const UNREACHABLE: u32 = u32::MAX;

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    twins: Vec<VertexSet>,
    candidates: Vec<usize>,
    component: Vec<usize>,
    h_edges: Vec<(usize, usize)>,
    budget: Budget,
    #[cfg(not(target_arch = "wasm32"))]
    started: Option<Instant>,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, h: &'a Graph, budget: Budget) -> Self {
        let hn = h.order();
        // most constrained first: highest degree, then most already-ordered neighbors
        let mut order: Vec<usize> = Vec::with_capacity(hn);
        let mut placed = VertexSet::EMPTY;
        while order.len() < hn {
            let next = (0..hn)
                .filter(|&v| !placed.contains(v))
                .max_by_key(|&v| {
                    (
                        h.neighbors(v).intersection(placed).len(),
                        h.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .expect("unplaced vertex remains");
            placed.insert(next);
            order.push(next);
        }
        let twins = (0..hn)
            .map(|u| {
                (0..hn)
                    .filter(|&w| {
                        w != u && {
                            let a = h.neighbors(u).difference(VertexSet::singleton(w));
                            let b = h.neighbors(w).difference(VertexSet::singleton(u));
                            a == b
                        }
                    })
                    .collect()
            })
            .collect();
        let mut candidates: Vec<usize> = (0..g.order()).collect();
        candidates.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut component = vec![0; g.order()];
        for (i, comp) in g.components().into_iter().enumerate() {
            for v in comp {
                component[v] = i;
            }
        }
        Search {
            g,
            h,
            order,
            twins,
            candidates,
            component,
            h_edges: h.edges().collect(),
            budget,
            #[cfg(not(target_arch = "wasm32"))]
            started: budget.max_millis.map(|_| Instant::now()),
            stats: SearchStats::default(),
        }
    }

    fn tick(&mut self) -> Result<(), Abort> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget.max_nodes {
            return Err(Abort);
        }
        #[cfg(not(target_arch = "wasm32"))]
        if self.stats.nodes.is_multiple_of(1024) {
            if let (Some(start), Some(ms)) = (self.started, self.budget.max_millis) {
                if start.elapsed().as_millis() as u64 > ms {
                    return Err(Abort);
                }
            }
        }
        Ok(())
    }

    /// `min_edges` lower-bounds the host edges needed by target edges between mapped vertices.
    fn assign(
        &mut self,
        idx: usize,
        phi: &mut [usize],
        used: u64,
        min_edges: usize,
    ) -> Result<Option<ImmersionCertificate>, Abort> {
        if idx == self.order.len() {
            self.stats.branch_maps += 1;
            return self.route(phi);
        }
        self.tick()?;
        let u = self.order[idx];
        let need = self.h.degree(u);
        for ci in 0..self.candidates.len() {
            let cand = self.candidates[ci];
            if used & bit(cand) != 0 || self.g.degree(cand) < need {
                continue;
            }
            let twins_ok = self.twins[u]
                .iter()
                .filter(|&w| phi[w] != usize::MAX)
                .all(|w| (w < u) == (phi[w] < cand));
            if !twins_ok {
                continue;
            }
            let mut extra = 0;
            let mut same_component = true;
            for w in self.h.neighbors(u) {
                if phi[w] == usize::MAX {
                    continue;
                }
                if self.component[phi[w]] != self.component[cand] {
                    same_component = false;
                    break;
                }
                extra += if self.g.has_edge(phi[w], cand) { 1 } else { 2 };
            }
            if !same_component || min_edges + extra > self.g.size() {
                continue;
            }
            phi[u] = cand;
            let found = self.assign(idx + 1, phi, used | bit(cand), min_edges + extra)?;
            phi[u] = usize::MAX;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn route(&mut self, phi: &[usize]) -> Result<Option<ImmersionCertificate>, Abort> {
        let demands: Vec<(usize, usize)> = self
            .h_edges
            .iter()
            .map(|&(a, b)| (phi[a], phi[b]))
            .collect();
        let mut residual = self.g.rows().to_vec();
        let mut walks: Vec<Option<Vec<usize>>> = vec![None; demands.len()];
        if !self.pack(&mut residual, &demands, &mut walks)? {
            return Ok(None);
        }
        let paths = self
            .h_edges
            .iter()
            .zip(walks)
            .map(|(&(a, b), walk)| CertPath {
                h_edge: [a, b],
                walk: walk.expect("every demand routed"),
            })
            .collect();
        Ok(Some(ImmersionCertificate {
            branch: phi.to_vec(),
            paths,
        }))
    }

    fn pack(
        &mut self,
        res: &mut [u64],
        demands: &[(usize, usize)],
        walks: &mut [Option<Vec<usize>>],
    ) -> Result<bool, Abort> {
        self.tick()?;
        let mut direct = Vec::new();
        for (i, &(s, t)) in demands.iter().enumerate() {
            if walks[i].is_none() && res[s] & bit(t) != 0 {
                res[s] &= !bit(t);
                res[t] &= !bit(s);
                walks[i] = Some(vec![s, t]);
                direct.push(i);
            }
        }
        let pending: Vec<usize> = (0..demands.len()).filter(|&i| walks[i].is_none()).collect();
        if pending.is_empty() {
            return Ok(true);
        }
        let solved = self.branch_on_demand(res, demands, walks, &pending)?;
        if !solved {
            for i in direct {
                let (s, t) = demands[i];
                res[s] |= bit(t);
                res[t] |= bit(s);
                walks[i] = None;
            }
        }
        Ok(solved)
    }

    fn branch_on_demand(
        &mut self,
        res: &mut [u64],
        demands: &[(usize, usize)],
        walks: &mut [Option<Vec<usize>>],
        pending: &[usize],
    ) -> Result<bool, Abort> {
        let n = self.g.order();
        let mut need = vec![0u32; n];
        for &i in pending {
            need[demands[i].0] += 1;
            need[demands[i].1] += 1;
        }
        if (0..n).any(|v| need[v] > res[v].count_ones()) {
            return Ok(false);
        }
        let residual_edges: u32 = res.iter().map(|r| r.count_ones()).sum::<u32>() / 2;
        let mut total = 0u32;
        let mut choice: Option<((u64, std::cmp::Reverse<u32>, usize), Vec<u32>)> = None;
        for &i in pending {
            let (s, t) = demands[i];
            let dist = bfs(res, t);
            let d = dist[s];
            if d == UNREACHABLE {
                return Ok(false);
            }
            total += d;
            let key = (count_shortest(res, &dist, s), std::cmp::Reverse(d), i);
            if choice.as_ref().is_none_or(|(k, _)| key < *k) {
                choice = Some((key, dist));
            }
        }
        if total > residual_edges {
            return Ok(false);
        }
        let ((_, std::cmp::Reverse(d), i), dist) = choice.expect("pending is non-empty");
        let (s, _) = demands[i];
        let mut path = vec![s];
        for len in d as usize..n {
            if self.extend(res, demands, walks, i, &mut path, bit(s), len, &dist)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Extends `path` by exactly `remaining` edges towards the demand's target.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        res: &mut [u64],
        demands: &[(usize, usize)],
        walks: &mut [Option<Vec<usize>>],
        i: usize,
        path: &mut Vec<usize>,
        visited: u64,
        remaining: usize,
        dist: &[u32],
    ) -> Result<bool, Abort> {
        let t = demands[i].1;
        let x = *path.last().expect("path starts at the source");
        if remaining == 0 {
            debug_assert_eq!(x, t);
            for w in path.windows(2) {
                res[w[0]] &= !bit(w[1]);
                res[w[1]] &= !bit(w[0]);
            }
            walks[i] = Some(path.clone());
            if self.pack(res, demands, walks)? {
                return Ok(true);
            }
            walks[i] = None;
            for w in path.windows(2) {
                res[w[0]] |= bit(w[1]);
                res[w[1]] |= bit(w[0]);
            }
            return Ok(false);
        }
        self.tick()?;
        for y in VertexSet::from_bits(res[x] & !visited) {
            if (y == t) != (remaining == 1) || dist[y] as usize > remaining - 1 {
                continue;
            }
            path.push(y);
            let done = self.extend(
                res,
                demands,
                walks,
                i,
                path,
                visited | bit(y),
                remaining - 1,
                dist,
            )?;
            path.pop();
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn bfs(res: &[u64], source: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; res.len()];
    dist[source] = 0;
    let mut seen = bit(source);
    let mut frontier = bit(source);
    let mut d = 0;
    while frontier != 0 {
        d += 1;
        let mut next = 0u64;
        for v in VertexSet::from_bits(frontier) {
            next |= res[v];
        }
        next &= !seen;
        for v in VertexSet::from_bits(next) {
            dist[v] = d;
        }
        seen |= next;
        frontier = next;
    }
    dist
}

/// Number of shortest paths from `s` to the BFS root of `dist`, saturating.
fn count_shortest(res: &[u64], dist: &[u32], s: usize) -> u64 {
    let d = dist[s];
    let mut layer = vec![0u64; res.len()];
    layer[s] = 1;
    let mut frontier = bit(s);
    for level in (1..=d).rev() {
        let mut next = 0u64;
        for v in VertexSet::from_bits(frontier) {
            for w in VertexSet::from_bits(res[v]) {
                if dist[w] == level - 1 {
                    layer[w] = layer[w].saturating_add(layer[v]);
                    next |= bit(w);
                }
            }
        }
        frontier = next;
    }
    let root = VertexSet::from_bits(frontier).first().unwrap_or(s);
    layer[root]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::certificate::verify_certificate;

    fn found(g: &Graph, h: &Graph) -> ImmersionCertificate {
        match find_immersion(g, h, Budget::default()) {
            SearchOutcome::Found(c) => {
                assert_eq!(verify_certificate(g, h, &c), Ok(()));
                c
            }
            other => panic!("expected an immersion, got {other:?}"),
        }
    }

    #[test]
    fn c5_contains_k3() {
        let c5 = Graph::cycle(5).unwrap();
        let c = found(&c5, &Graph::complete(3).unwrap());
        assert_eq!(c.total_length(), 5);
    }

    #[test]
    fn path_does_not_contain_k3() {
        let p4 = Graph::path(4).unwrap();
        assert_eq!(
            find_immersion(&p4, &Graph::complete(3).unwrap(), Budget::default()),
            SearchOutcome::NotFound
        );
    }

    #[test]
    fn k1_is_trivial() {
        let g = Graph::cycle(4).unwrap();
        let c = found(&g, &Graph::complete(1).unwrap());
        assert!(c.paths.is_empty());
        assert_eq!(c.branch.len(), 1);
    }

    #[test]
    fn kst_examples() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(find_kst_immersion(&c5, 1, 2, Budget::default())
            .unwrap()
            .is_found());
        assert_eq!(
            find_kst_immersion(&c5, 3, 3, Budget::default()).unwrap(),
            SearchOutcome::NotFound
        );
        let cp = Graph::petersen().complement();
        let out = find_kst_immersion(&cp, 2, 3, Budget::default()).unwrap();
        let h = make_target(&TargetSpec::CompleteBipartite { s: 2, t: 3 }).unwrap();
        assert_eq!(
            verify_certificate(&cp, &h, out.certificate().unwrap()),
            Ok(())
        );
    }

    #[test]
    fn k4_needs_degree_three() {
        // a 6-cycle has maximum degree 2
        let c6 = Graph::cycle(6).unwrap();
        assert_eq!(
            find_immersion(&c6, &Graph::complete(4).unwrap(), Budget::default()),
            SearchOutcome::NotFound
        );
        // the octahedron is 4-regular with 12 edges
        let oct = Graph::complete(6)
            .unwrap()
            .without_edge(0, 1)
            .unwrap()
            .without_edge(2, 3)
            .unwrap()
            .without_edge(4, 5)
            .unwrap();
        found(&oct, &Graph::complete(5).unwrap());
    }

    #[test]
    fn tiny_budget_is_undecided() {
        let g = Graph::petersen();
        assert_eq!(
            find_immersion(&g, &Graph::complete(4).unwrap(), Budget::nodes(3)),
            SearchOutcome::Undecided
        );
    }

    #[test]
    fn petersen_immerses_k4_but_not_k5() {
        found(&Graph::petersen(), &Graph::complete(4).unwrap());
        // cubic: no vertex of degree 4
        assert_eq!(
            find_immersion(
                &Graph::petersen(),
                &Graph::complete(5).unwrap(),
                Budget::default()
            ),
            SearchOutcome::NotFound
        );
    }

    #[test]
    fn shortest_path_counts() {
        let c4 = Graph::cycle(4).unwrap();
        let dist = bfs(c4.rows(), 2);
        assert_eq!(count_shortest(c4.rows(), &dist, 0), 2);
        let k4 = Graph::complete(4).unwrap();
        let dist = bfs(k4.rows(), 1);
        assert_eq!(count_shortest(k4.rows(), &dist, 0), 1);
    }
}
