//! Dense simple graphs on at most 64 vertices, stored as one `u64` neighbor row per vertex.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest vertex count representable by a single `u64` neighbor row.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph with {0} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertices must be distinct, got {0} twice")]
    SameVertex(usize),
}

#[inline]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A set of vertex indices, backed by a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// The full set `{0, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        VertexSet(low_mask(n))
    }

    pub const fn singleton(v: usize) -> Self {
        VertexSet(bit(v))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & bit(v) != 0
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= bit(v);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !bit(v);
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub const fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(d)?;
        if let Some(&v) = members.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(members.into_iter().collect())
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Old-to-new vertex correspondence produced by vertex deletion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexMap {
    /// `forward[old]` is the new index of `old`, or `None` if it was deleted.
    pub forward: Vec<Option<usize>>,
    /// `backward[new]` is the original index.
    pub backward: Vec<usize>,
}

impl VertexMap {
    pub fn identity(n: usize) -> Self {
        VertexMap {
            forward: (0..n).map(Some).collect(),
            backward: (0..n).collect(),
        }
    }

    /// Composes `self` (a → b) with `next` (b → c) into a → c.
    pub fn then(&self, next: &VertexMap) -> VertexMap {
        VertexMap {
            forward: self
                .forward
                .iter()
                .map(|m| m.and_then(|b| next.forward[b]))
                .collect(),
            backward: next.backward.iter().map(|&b| self.backward[b]).collect(),
        }
    }
}

/// An immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
            edge_count: 0,
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw neighbor rows; bits outside `0..n` and the diagonal are dropped
    /// and the relation is symmetrised.
    pub fn from_rows(rows: &[u64]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        let mask = low_mask(n);
        for (u, &row) in rows.iter().enumerate() {
            for v in VertexSet(row & mask & !bit(u)) {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Graph::empty(n)?.complement_checked()
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        if n < 3 {
            return Graph::path(n);
        }
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes i–(i+5).
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).expect("petersen is well formed")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & bit(v) != 0
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Closed neighborhood `N[v]`.
    #[inline]
    pub fn closed_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | bit(v))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !low_mask(u + 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    /// Non-adjacent pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let full = low_mask(self.n);
        (0..self.n).flat_map(move |u| {
            VertexSet(!self.adj[u] & full & !low_mask(u + 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    pub fn complement(&self) -> Graph {
        self.complement_checked()
            .expect("same order as an existing graph")
    }

    fn complement_checked(&self) -> Result<Graph, GraphError> {
        let full = low_mask(self.n);
        let rows: Vec<u64> = (0..self.n).map(|v| !self.adj[v] & full & !bit(v)).collect();
        Graph::from_rows(&rows)
    }

    /// `N(u) ∩ N(v)` for distinct `u`, `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        Ok(VertexSet(self.adj[u] & self.adj[v]))
    }

    pub fn is_clique(&self, set: VertexSet) -> bool {
        set.iter().all(|v| {
            set.difference(VertexSet::singleton(v))
                .is_subset(self.neighbors(v))
        })
    }

    pub fn is_independent(&self, set: VertexSet) -> bool {
        set.iter().all(|v| self.neighbors(v).is_disjoint(set))
    }

    /// Every vertex of `a` adjacent to every vertex of `b`.
    pub fn is_complete_to(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().all(|v| b.is_subset(self.neighbors(v)))
    }

    pub fn is_anticomplete_to(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().all(|v| self.neighbors(v).is_disjoint(b))
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = self.clone();
        g.add_edge(u, v);
        Ok(g)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        g.remove_edge(u, v);
        Ok(g)
    }

    /// Deletes `removed` and relabels survivors densely, preserving their relative order.
    pub fn delete_vertices(&self, removed: VertexSet) -> (Graph, VertexMap) {
        let keep = self.vertices().difference(removed);
        self.induced_subgraph(keep)
    }

    /// The subgraph induced by `keep`, relabeled to `0..|keep|` in ascending order.
    pub fn induced_subgraph(&self, keep: VertexSet) -> (Graph, VertexMap) {
        let keep = keep.intersection(self.vertices());
        let backward = keep.to_vec();
        let mut forward = vec![None; self.n];
        for (new, &old) in backward.iter().enumerate() {
            forward[old] = Some(new);
        }
        let rows: Vec<u64> = backward
            .iter()
            .map(|&old| {
                VertexSet(self.adj[old] & keep.bits())
                    .iter()
                    .fold(0u64, |acc, w| acc | bit(forward[w].unwrap()))
            })
            .collect();
        let g = Graph::from_rows(&rows).expect("subgraph of a valid graph");
        (g, VertexMap { forward, backward })
    }

    /// Relabels by `perm`, where `perm[old] = new`. `perm` must be a permutation of `0..n`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut rows = vec![0u64; self.n];
        for u in 0..self.n {
            rows[perm[u]] = VertexSet(self.adj[u])
                .iter()
                .fold(0u64, |acc, w| acc | bit(perm[w]));
        }
        Graph {
            n: self.n,
            adj: rows,
            edge_count: self.edge_count,
        }
    }

    /// Vertex sets of the connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::singleton(s);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = 0u64;
                for v in frontier {
                    next |= self.adj[v];
                }
                frontier = VertexSet(next).difference(comp);
                comp = comp.union(frontier);
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        if self.adj[u] & bit(v) == 0 {
            self.adj[u] |= bit(v);
            self.adj[v] |= bit(u);
            self.edge_count += 1;
        }
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        if self.adj[u] & bit(v) != 0 {
            self.adj[u] &= !bit(v);
            self.adj[v] &= !bit(u);
            self.edge_count -= 1;
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(n={}, edges={:?})",
            self.n,
            self.edges().collect::<Vec<_>>()
        )
    }
}
