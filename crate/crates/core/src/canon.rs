//! Canonical labeling by individualization and equitable refinement.
//!
//! The search tree individualizes one vertex of the first non-singleton cell per level and
//! refines to the coarsest equitable partition. Leaves are compared by their relabeled
//! adjacency rows; the greatest one defines the canonical form. Leaves that coincide with the
//! first or best leaf yield automorphisms, which prune sibling subtrees in the same orbit
//! and let the search jump back to the common ancestor.

use crate::graph::{bit, Graph};

/// Result of canonical labeling.
#[derive(Debug, Clone)]
pub struct Canonical {
    /// The relabeled graph; equal for two inputs iff they are isomorphic.
    pub graph: Graph,
    /// `labeling[old] = new`.
    pub labeling: Vec<usize>,
    /// Automorphisms discovered during the search; they generate the full group.
    pub generators: Vec<Vec<usize>>,
}

impl Canonical {
    /// Orbit representative (smallest member) of each vertex under the automorphism group.
    pub fn orbits(&self) -> Vec<usize> {
        let n = self.labeling.len();
        let mut uf = UnionFind::new(n);
        for gamma in &self.generators {
            for (v, &w) in gamma.iter().enumerate() {
                uf.union(v, w);
            }
        }
        (0..n).map(|v| uf.min_of(v)).collect()
    }
}

pub fn canonical_labeling(g: &Graph) -> Canonical {
    let n = g.order();
    let mut search = Search {
        g,
        first: None,
        best: None,
        autos: Vec::new(),
    };
    if n > 0 {
        let mut cells = vec![(0..n).collect::<Vec<_>>()];
        refine(g, &mut cells);
        search.visit(cells, &mut Vec::new());
    }
    let (labeling, rows) = match search.best {
        Some(leaf) => (leaf.perm, leaf.cert),
        None => (Vec::new(), Vec::new()),
    };
    Canonical {
        graph: Graph::from_rows(&rows).expect("same order as input"),
        labeling,
        generators: search.autos,
    }
}

pub fn canonical_form(g: &Graph) -> Graph {
    canonical_labeling(g).graph
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order() && a.size() == b.size() && canonical_form(a) == canonical_form(b)
}

struct Leaf {
    perm: Vec<usize>,
    cert: Vec<u64>,
    path: Vec<usize>,
}

struct Search<'g> {
    g: &'g Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(k)` to unwind to the ancestor at depth `k`.
    fn visit(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) -> Option<usize> {
        let level = prefix.len();
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(&cells, prefix);
        };
        let mut children = cells[target].clone();
        children.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for w in children {
            if !explored.is_empty() && self.equivalent_to_explored(prefix, &explored, w) {
                continue;
            }
            explored.push(w);
            let mut next = cells.clone();
            let rest: Vec<usize> = next[target].iter().copied().filter(|&v| v != w).collect();
            next[target] = vec![w];
            next.insert(target + 1, rest);
            refine(self.g, &mut next);
            prefix.push(w);
            let jump = self.visit(next, prefix);
            prefix.pop();
            if let Some(k) = jump {
                if k < level {
                    return Some(k);
                }
            }
        }
        None
    }

    fn equivalent_to_explored(&self, prefix: &[usize], explored: &[usize], w: usize) -> bool {
        let n = self.g.order();
        let mut uf = UnionFind::new(n);
        let mut any = false;
        for gamma in &self.autos {
            if prefix.iter().all(|&p| gamma[p] == p) {
                any = true;
                for (v, &img) in gamma.iter().enumerate() {
                    uf.union(v, img);
                }
            }
        }
        any && explored.iter().any(|&e| uf.find(e) == uf.find(w))
    }

    fn leaf(&mut self, cells: &[Vec<usize>], prefix: &[usize]) -> Option<usize> {
        let n = self.g.order();
        let mut perm = vec![0; n];
        for (i, c) in cells.iter().enumerate() {
            perm[c[0]] = i;
        }
        let mut cert = vec![0u64; n];
        for v in 0..n {
            cert[perm[v]] = self
                .g
                .neighbors(v)
                .iter()
                .fold(0u64, |acc, w| acc | bit(perm[w]));
        }
        let leaf = Leaf {
            perm,
            cert,
            path: prefix.to_vec(),
        };
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                perm: leaf.perm.clone(),
                cert: leaf.cert.clone(),
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return None;
        };
        if leaf.cert == first.cert {
            let gamma = automorphism(&first.perm, &leaf.perm);
            let k = common_prefix(&first.path, prefix);
            self.autos.push(gamma);
            return Some(k);
        }
        let best = self.best.as_ref().expect("set with first");
        if leaf.cert == best.cert {
            let gamma = automorphism(&best.perm, &leaf.perm);
            let k = common_prefix(&best.path, prefix);
            self.autos.push(gamma);
            return Some(k);
        }
        if leaf.cert > best.cert {
            self.best = Some(leaf);
        }
        None
    }
}

/// `γ(v) = a⁻¹(b(v))`, mapping the graph onto itself when `a` and `b` give equal relabelings.
fn automorphism(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut inv_a = vec![0; a.len()];
    for (v, &p) in a.iter().enumerate() {
        inv_a[p] = v;
    }
    b.iter().map(|&p| inv_a[p]).collect()
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Refines `cells` to the coarsest equitable partition finer than it. Cells split by the
/// number of neighbors in a splitter cell, pieces ordered by that count.
pub(crate) fn refine(g: &Graph, cells: &mut Vec<Vec<usize>>) {
    let rows = g.rows();
    'outer: loop {
        for s in 0..cells.len() {
            let splitter = cells[s].iter().fold(0u64, |acc, &v| acc | bit(v));
            let mut split_any = false;
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> = cell
                    .iter()
                    .map(|&v| ((rows[v] & splitter).count_ones(), v))
                    .collect();
                keyed.sort_unstable();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
                if keyed[0].0 != keyed[keyed.len() - 1].0 {
                    split_any = true;
                }
            }
            if split_any {
                *cells = next;
                continue 'outer;
            }
        }
        return;
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn min_of(&mut self, v: usize) -> usize {
        self.find(v)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Canonical form as the greatest relabeled row vector over all `n!` permutations.
    pub(crate) fn brute_canonical(g: &Graph) -> Vec<u64> {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<u64>> = None;
        loop {
            let mut cert = vec![0u64; n];
            for v in 0..n {
                cert[perm[v]] = g.neighbors(v).iter().fold(0, |acc, w| acc | 1 << perm[w]);
            }
            if best.as_ref().is_none_or(|b| cert > *b) {
                best = Some(cert);
            }
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        best.unwrap_or_default()
    }

    fn brute_orbits(g: &Graph) -> Vec<usize> {
        let n = g.order();
        let mut orbit: Vec<usize> = (0..n).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if g.permute(&perm) == *g {
                for v in 0..n {
                    let (a, b) = (orbit[v], orbit[perm[v]]);
                    let m = a.min(b);
                    for o in orbit.iter_mut() {
                        if *o == a || *o == b {
                            *o = m;
                        }
                    }
                }
            }
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        orbit
    }

    fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        (0u64..1 << pairs.len()).map(move |mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    }

    #[test]
    fn relabeling_is_consistent() {
        let g = Graph::petersen();
        let c = canonical_labeling(&g);
        assert_eq!(g.permute(&c.labeling), c.graph);
        assert_eq!(c.orbits(), vec![0; 10]);
        for gamma in &c.generators {
            assert_eq!(g.permute(gamma), g);
        }
    }

    #[test]
    fn classes_match_brute_force_through_six_vertices() {
        use std::collections::HashMap;
        for n in 0..=6 {
            let mut fast_to_slow: HashMap<Graph, Vec<u64>> = HashMap::new();
            let mut slow_to_fast: HashMap<Vec<u64>, Graph> = HashMap::new();
            for g in all_graphs(n) {
                let fast = canonical_form(&g);
                let slow = brute_canonical(&g);
                assert_eq!(
                    fast_to_slow.entry(fast.clone()).or_insert(slow.clone()),
                    &slow
                );
                assert_eq!(slow_to_fast.entry(slow).or_insert(fast.clone()), &fast);
            }
            let expected = [1, 1, 2, 4, 11, 34, 156][n];
            assert_eq!(fast_to_slow.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn agrees_with_brute_force_on_seven_vertices() {
        let mut state = 7u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 33
        };
        let mut sample = Vec::new();
        for _ in 0..150 {
            let g = all_graphs_mask(7, next() & ((1 << 21) - 1));
            let mut perm: Vec<usize> = (0..7).collect();
            for i in (1..7).rev() {
                perm.swap(i, next() as usize % (i + 1));
            }
            let h = g.permute(&perm);
            assert_eq!(canonical_form(&g), canonical_form(&h), "{g:?}");
            assert_eq!(canonical_labeling(&g).orbits(), brute_orbits(&g), "{g:?}");
            sample.push(g);
        }
        for a in sample.iter().take(40) {
            for b in &sample {
                let fast = canonical_form(a) == canonical_form(b);
                let slow = brute_canonical(a) == brute_canonical(b);
                assert_eq!(fast, slow);
            }
        }
    }

    fn all_graphs_mask(n: usize, mask: u64) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn symmetric_graphs_terminate_quickly() {
        for n in [12, 20, 40] {
            let k = Graph::complete(n).unwrap();
            assert_eq!(canonical_form(&k), k);
            let e = Graph::empty(n).unwrap();
            assert_eq!(canonical_form(&e), e);
        }
        let c = canonical_labeling(&Graph::cycle(30).unwrap());
        assert_eq!(c.orbits(), vec![0; 30]);
    }

    #[test]
    fn isomorphism_of_relabeled_complement_of_c5() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(are_isomorphic(&c5, &c5.complement()));
        assert!(!are_isomorphic(&c5, &Graph::path(5).unwrap()));
    }
}
