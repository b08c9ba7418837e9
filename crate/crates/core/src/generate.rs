//! Isomorph-free generation of triangle-free graphs and, through complements, of graphs with
//! independence number at most two.
//!
//! Generation is by canonical augmentation: a graph on `k + 1` vertices is produced from a
//! canonical parent on `k` vertices by adding a vertex whose neighborhood is an independent
//! set of the parent. A child is kept only if the added vertex lies in the automorphism orbit
//! of the vertex its canonical labeling puts last; accepted children of one parent are then
//! deduplicated. Every isomorphism class is emitted exactly once.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::canon::canonical_labeling;
use crate::graph::{bit, Graph, VertexSet};
use crate::invariants::independence_number;

/// Largest order enumerated unless configured otherwise.
pub const DEFAULT_MAX_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("order {n} outside the supported range 1..={max}")]
    OrderOutOfRange { n: usize, max: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct Generator {
    pub max_order: usize,
}

impl Default for Generator {
    fn default() -> Self {
        Generator {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl Generator {
    pub fn with_max_order(max_order: usize) -> Self {
        Generator { max_order }
    }

    fn check(&self, n: usize) -> Result<(), GenError> {
        if n == 0 || n > self.max_order {
            Err(GenError::OrderOutOfRange {
                n,
                max: self.max_order,
            })
        } else {
            Ok(())
        }
    }

    /// One canonical representative per isomorphism class of triangle-free graphs on `n`
    /// vertices, in a deterministic order.
    pub fn triangle_free(&self, n: usize) -> Result<Vec<Graph>, GenError> {
        self.check(n)?;
        let mut level = vec![Graph::empty(1).expect("one vertex")];
        for _ in 1..n {
            level = level.iter().flat_map(augment).collect();
        }
        Ok(level)
    }

    /// Complements of the triangle-free classes; with `exact`, only graphs with `α = 2`.
    pub fn alpha2(&self, n: usize, exact: bool) -> Result<Vec<Graph>, GenError> {
        Ok(self
            .triangle_free(n)?
            .into_iter()
            .map(|g| g.complement())
            .filter(|g| !exact || independence_number(g) == 2)
            .collect())
    }
}

pub fn enumerate_triangle_free(n: usize) -> Result<Vec<Graph>, GenError> {
    Generator::default().triangle_free(n)
}

pub fn enumerate_alpha2(n: usize, exact: bool) -> Result<Vec<Graph>, GenError> {
    Generator::default().alpha2(n, exact)
}

/// Independent sets of `g` as bitmasks, in increasing numeric order.
fn independent_sets(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let rows = g.rows();
    (0u64..1 << n)
        .filter(|&s| VertexSet::from_bits(s).iter().all(|v| rows[v] & s == 0))
        .collect()
}

/// Accepted, pairwise non-isomorphic children of a canonical parent.
fn augment(parent: &Graph) -> Vec<Graph> {
    let k = parent.order();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in independent_sets(parent) {
        let mut rows = parent.rows().to_vec();
        for v in VertexSet::from_bits(s) {
            rows[v] |= bit(k);
        }
        rows.push(s);
        let child = Graph::from_rows(&rows).expect("order below the row width");
        let canon = canonical_labeling(&child);
        let last = canon
            .labeling
            .iter()
            .position(|&l| l == k)
            .expect("labeling is a permutation");
        let accept = last == k || {
            let orbits = canon.orbits();
            orbits[last] == orbits[k]
        };
        if accept && seen.insert(canon.graph.clone()) {
            out.push(canon.graph);
        }
    }
    out
}

/// Deletes edges in lexicographic order whenever doing so keeps `α` unchanged. A single pass
/// suffices: an edge that is critical stays critical after other edges are removed without
/// changing `α`.
pub fn alpha_critical_reduce(g: &Graph) -> Graph {
    let alpha = independence_number(g);
    let mut cur = g.clone();
    for (u, v) in g.edges() {
        let cand = cur.without_edge(u, v).expect("edge of the input");
        if independence_number(&cand) == alpha {
            cur = cand;
        }
    }
    cur
}

/// Complement of a random triangle-free graph: pairs are visited in a seeded random order and
/// inserted when they close no triangle, stopping at a seeded edge-count target or maximality.
pub fn random_alpha2(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let target = rng.gen_range(0..=n * n / 4);
    let mut g = Graph::empty(n).expect("order within row width");
    for (u, v) in pairs {
        if g.size() >= target {
            break;
        }
        if g.neighbors(u).is_disjoint(g.neighbors(v)) {
            g.add_edge(u, v);
        }
    }
    g.complement()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::canon::tests::brute_canonical;

    fn has_triangle(g: &Graph) -> bool {
        g.edges()
            .any(|(u, v)| !g.neighbors(u).is_disjoint(g.neighbors(v)))
    }

    /// All labeled triangle-free graphs, deduplicated by brute-force canonical form.
    fn brute_triangle_free_classes(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        let mut classes = HashSet::new();
        for mask in 0u64..1 << pairs.len() {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            if !has_triangle(&g) {
                classes.insert(brute_canonical(&g));
            }
        }
        classes.len()
    }

    #[test]
    fn small_counts_match_brute_force() {
        assert_eq!(brute_triangle_free_classes(3), 3);
        assert_eq!(brute_triangle_free_classes(4), 7);
        for n in 1..=5 {
            assert_eq!(
                enumerate_triangle_free(n).unwrap().len(),
                brute_triangle_free_classes(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn emitted_graphs_are_triangle_free_and_distinct() {
        for n in 1..=7 {
            let graphs = enumerate_triangle_free(n).unwrap();
            let forms: HashSet<Graph> = graphs.iter().map(canonical_form).collect();
            assert_eq!(forms.len(), graphs.len());
            assert!(graphs.iter().all(|g| !has_triangle(g) && g.order() == n));
        }
    }

    #[test]
    fn alpha2_examples() {
        let exact = enumerate_alpha2(4, true).unwrap();
        assert_eq!(exact.len(), 6);
        assert!(!exact.contains(&Graph::complete(4).unwrap()));
        let all = enumerate_alpha2(4, false).unwrap();
        assert_eq!(all.len(), 7);
        assert!(all.contains(&Graph::complete(4).unwrap()));
        for g in &all {
            assert!(independence_number(g) <= 2);
        }
    }

    #[test]
    fn order_is_range_checked() {
        assert_eq!(
            enumerate_triangle_free(0),
            Err(GenError::OrderOutOfRange { n: 0, max: 10 })
        );
        assert!(enumerate_triangle_free(11).is_err());
        assert_eq!(
            Generator::with_max_order(3).triangle_free(3).unwrap().len(),
            3
        );
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(
            enumerate_triangle_free(6).unwrap(),
            enumerate_triangle_free(6).unwrap()
        );
    }

    #[test]
    fn reduce_examples() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(alpha_critical_reduce(&c5), c5);
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(alpha_critical_reduce(&k5), k5);
        let chord = c5.with_edge(0, 2).unwrap();
        assert_eq!(alpha_critical_reduce(&chord), c5);
    }

    #[test]
    fn random_alpha2_is_deterministic_and_valid() {
        for seed in 0..50 {
            let g = random_alpha2(8, seed);
            assert_eq!(g, random_alpha2(8, seed));
            assert!(independence_number(&g) <= 2);
        }
        let classes: HashSet<Graph> = (0..1000)
            .map(|s| canonical_form(&random_alpha2(8, s)))
            .collect();
        assert!(classes.len() >= 2);
    }
}
