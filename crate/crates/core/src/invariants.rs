//! Exact graph invariants: independence number, induced C4 detection, maximum matching,
//! and the chromatic number of graphs with independence number at most two.

use thiserror::Error;

use crate::graph::{bit, Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("chromatic number via matchings requires independence number <= 2, found {0}")]
    AlphaTooLarge(usize),
}

/// Size of a maximum clique, by branch and bound with a greedy colouring bound.
pub fn clique_number(g: &Graph) -> usize {
    let mut best = 0;
    expand_clique(g.rows(), g.vertices().bits(), 0, &mut best);
    best
}

/// `α(g)`: clique number of the complement.
pub fn independence_number(g: &Graph) -> usize {
    clique_number(&g.complement())
}

/// Colours `cand` greedily; returns vertices with their colour numbers, non-decreasing in colour.
fn colour_sort(adj: &[u64], cand: u64) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut uncoloured = cand;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut q = uncoloured;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !bit(v) & !adj[v];
            uncoloured &= !bit(v);
            order.push((v, colour));
        }
    }
    order
}

fn expand_clique(adj: &[u64], mut cand: u64, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    let order = colour_sort(adj, cand);
    for &(v, colour) in order.iter().rev() {
        if size + colour <= *best {
            return;
        }
        expand_clique(adj, cand & adj[v], size + 1, best);
        cand &= !bit(v);
    }
}

/// True iff some four vertices induce exactly a 4-cycle.
pub fn has_induced_c4(g: &Graph) -> bool {
    g.non_edges().any(|(a, c)| {
        let common = g.neighbors(a).intersection(g.neighbors(c));
        common
            .iter()
            .any(|b| !common.difference(g.closed_neighbors(b)).is_empty())
    })
}

/// An induced 4-cycle `[a, b, c, d]` (in cyclic order), if one exists.
pub fn find_induced_c4(g: &Graph) -> Option<[usize; 4]> {
    for (a, c) in g.non_edges() {
        let common = g.neighbors(a).intersection(g.neighbors(c));
        for b in common {
            if let Some(d) = common.difference(g.closed_neighbors(b)).first() {
                return Some([a, b, c, d]);
            }
        }
    }
    None
}

const NONE: usize = usize::MAX;

/// Edmonds' blossom algorithm for maximum cardinality matching in general graphs.
struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.order();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.order()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns the free endpoint of an augmenting path.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.order();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        None
    }

    fn run(mut self) -> Vec<(usize, usize)> {
        let n = self.g.order();
        // greedy warm start
        for (u, v) in self.g.edges() {
            if self.mate[u] == NONE && self.mate[v] == NONE {
                self.mate[u] = v;
                self.mate[v] = u;
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            if let Some(mut v) = self.find_path(root) {
                while v != NONE {
                    let pv = self.parent[v];
                    let ppv = self.mate[pv];
                    self.mate[v] = pv;
                    self.mate[pv] = v;
                    v = ppv;
                }
            }
        }
        (0..n)
            .filter(|&u| self.mate[u] != NONE && u < self.mate[u])
            .map(|u| (u, self.mate[u]))
            .collect()
    }
}

/// A maximum matching as a list of edges `(u, v)` with `u < v`.
pub fn maximum_matching(g: &Graph) -> Vec<(usize, usize)> {
    Blossom::new(g).run()
}

/// `μ(g)`, the size of a maximum matching.
pub fn max_matching(g: &Graph) -> usize {
    maximum_matching(g).len()
}

/// `χ(g)` for `α(g) <= 2`: colour classes are cliques of size at most two, i.e. vertices
/// and the edges of a matching in the complement, so `χ = n − μ(ḡ)`.
pub fn chromatic_number_alpha2(g: &Graph) -> Result<usize, InvariantError> {
    let alpha = independence_number(g);
    if alpha > 2 {
        return Err(InvariantError::AlphaTooLarge(alpha));
    }
    Ok(g.order() - max_matching(&g.complement()))
}

/// True iff deleting any edge strictly increases the independence number.
pub fn is_alpha_critical(g: &Graph) -> bool {
    let alpha = independence_number(g);
    g.edges().all(|(u, v)| {
        let h = g.without_edge(u, v).expect("edge endpoints are in range");
        independence_number(&h) > alpha
    })
}

/// Some maximum independent set, smallest-first in the branch order.
pub fn maximum_independent_set(g: &Graph) -> VertexSet {
    let comp = g.complement();
    let target = clique_number(&comp);
    let mut found = VertexSet::EMPTY;
    find_clique_of_size(
        comp.rows(),
        comp.vertices().bits(),
        VertexSet::EMPTY,
        target,
        &mut found,
    );
    found
}

fn find_clique_of_size(
    adj: &[u64],
    mut cand: u64,
    cur: VertexSet,
    target: usize,
    out: &mut VertexSet,
) -> bool {
    if cur.len() == target {
        *out = cur;
        return true;
    }
    while cand != 0 {
        if cur.len() + (cand.count_ones() as usize) < target {
            return false;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= !bit(v);
        let mut next = cur;
        next.insert(v);
        if find_clique_of_size(adj, cand & adj[v], next, target, out) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive α over all vertex subsets.
    fn alpha_brute(g: &Graph) -> usize {
        let n = g.order();
        (0u64..1 << n)
            .filter(|&s| g.is_independent(VertexSet::from_bits(s)))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Exhaustive matching size by recursion over the lowest unmatched vertex.
    fn matching_brute(g: &Graph, free: u64) -> usize {
        if free == 0 {
            return 0;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !bit(v);
        let mut best = matching_brute(g, rest);
        for w in VertexSet::from_bits(g.rows()[v] & rest) {
            best = best.max(1 + matching_brute(g, rest & !bit(w)));
        }
        best
    }

    #[test]
    fn independence_examples() {
        assert_eq!(independence_number(&Graph::complete(4).unwrap()), 1);
        assert_eq!(independence_number(&Graph::cycle(5).unwrap()), 2);
        let p = Graph::petersen();
        assert_eq!(alpha_brute(&p), 4);
        assert_eq!(independence_number(&p), 4);
        assert_eq!(independence_number(&Graph::empty(0).unwrap()), 0);
        assert_eq!(independence_number(&Graph::empty(7).unwrap()), 7);
        let mis = maximum_independent_set(&p);
        assert_eq!(mis.len(), 4);
        assert!(p.is_independent(mis));
    }

    #[test]
    fn induced_c4_examples() {
        assert!(has_induced_c4(&Graph::cycle(4).unwrap()));
        assert!(!has_induced_c4(&Graph::complete(4).unwrap()));
        assert!(!has_induced_c4(&Graph::cycle(5).unwrap()));
        let [a, b, c, d] = find_induced_c4(&Graph::cycle(4).unwrap()).unwrap();
        assert_eq!([a, b, c, d], [0, 1, 2, 3]);
        // C4 plus a chord is not induced
        let diamond = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert!(!has_induced_c4(&diamond));
    }

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching(&Graph::cycle(5).unwrap()), 2);
        assert_eq!(max_matching(&Graph::complete(4).unwrap()), 2);
        let p = Graph::petersen();
        assert_eq!(matching_brute(&p, p.vertices().bits()), 5);
        assert_eq!(max_matching(&p), 5);
        let m = maximum_matching(&p);
        let covered: VertexSet = m.iter().flat_map(|&(u, v)| [u, v]).collect();
        assert_eq!(covered.len(), 10);
        assert!(m.iter().all(|&(u, v)| p.has_edge(u, v)));
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number_alpha2(&Graph::complete(5).unwrap()), Ok(5));
        assert_eq!(chromatic_number_alpha2(&Graph::cycle(5).unwrap()), Ok(3));
        assert_eq!(
            chromatic_number_alpha2(&Graph::petersen().complement()),
            Ok(5)
        );
        assert_eq!(
            chromatic_number_alpha2(&Graph::petersen()),
            Err(InvariantError::AlphaTooLarge(4))
        );
    }

    #[test]
    fn alpha_critical_examples() {
        assert!(is_alpha_critical(&Graph::cycle(5).unwrap()));
        assert!(is_alpha_critical(&Graph::complete(5).unwrap()));
        let chord = Graph::cycle(5).unwrap().with_edge(0, 2).unwrap();
        assert!(!is_alpha_critical(&chord));
    }

    /// Deterministic pseudo-random graphs from a 64-bit LCG, for oracle comparisons.
    fn lcg_graphs(count: usize, max_n: usize) -> Vec<Graph> {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 33
        };
        (0..count)
            .map(|_| {
                let n = 1 + (next() as usize % max_n);
                let density = next() % 100;
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if next() % 100 < density {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
            .collect()
    }

    #[test]
    fn alpha_and_matching_agree_with_brute_force() {
        for g in lcg_graphs(400, 11) {
            assert_eq!(independence_number(&g), alpha_brute(&g), "{g:?}");
            assert_eq!(
                max_matching(&g),
                matching_brute(&g, g.vertices().bits()),
                "{g:?}"
            );
            let m = maximum_matching(&g);
            let covered: VertexSet = m.iter().flat_map(|&(u, v)| [u, v]).collect();
            assert_eq!(covered.len(), 2 * m.len());
        }
    }
}
