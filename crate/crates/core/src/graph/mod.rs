//! Simple undirected graphs on vertices `1..=n`.

mod clique;
mod dimacs;
mod matching;
mod set;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub use matching::maximum_matching;
pub use set::{Iter as VertexSetIter, VertexSet};

/// 1-based vertex index.
pub type Vertex = usize;

/// Immutable simple undirected graph. Adjacency is kept as one bitset per
/// vertex and is always symmetric and loop-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { n, m: 0, adj: vec![VertexSet::with_capacity(n); n] }
    }

    /// Builds a graph from an edge list. Duplicates and reversed duplicates
    /// collapse; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.adj[u - 1].insert(v) {
            self.adj[v - 1].insert(u);
            self.m += 1;
        }
        Ok(())
    }

    /// Cycle `1-2-...-n-1`.
    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (1..=n).map(|v| (v, v % n + 1))).expect("cycle needs n >= 3")
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)))).expect("valid")
    }

    /// `K_{a,b}` with sides `{1..a}` and `{a+1..a+b}`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_edges(a + b, (1..=a).flat_map(|u| (a + 1..=a + b).map(move |v| (u, v))))
            .expect("valid")
    }

    /// Seeded Erdős–Rényi graph: every pair `u < v`, visited in
    /// lexicographic order, is an edge with probability `density / 100`.
    pub fn random(n: usize, density: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("random graph needs at least one vertex".into()));
        }
        if !(density > 0.0 && density < 100.0) {
            return Err(Error::Parameter(alloc::format!(
                "density {density} outside the open interval (0, 100)"
            )));
        }
        let p = density / 100.0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Self::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.random_bool(p) {
                    g.insert_edge(u, v)?;
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> core::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| self.adj[u - 1].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u >= 1 && u <= self.n && self.adj[u - 1].contains(v)
    }

    /// Open neighborhood `N(v)`.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[v - 1]
    }

    /// Closed neighborhood `N[v]`.
    pub fn closed_neighbors(&self, v: Vertex) -> VertexSet {
        let mut s = self.adj[v - 1].clone();
        s.insert(v);
        s
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v - 1].len()
    }

    pub fn is_isolated(&self, v: Vertex) -> bool {
        self.adj[v - 1].is_empty()
    }

    pub fn is_universal(&self, v: Vertex) -> bool {
        self.degree(v) + 1 == self.n
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| s.difference(&self.closed_neighbors(v)).is_empty())
    }

    pub fn is_stable(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.adj[v - 1].is_disjoint(s))
    }

    /// True when no vertex outside `q` is adjacent to all of `q`.
    pub fn is_maximal_clique(&self, q: &VertexSet) -> bool {
        self.is_clique(q)
            && self.vertices().filter(|v| !q.contains(*v)).all(|v| !q.is_subset(&self.adj[v - 1]))
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n);
        for u in self.vertices() {
            for v in u + 1..=self.n {
                if !self.has_edge(u, v) {
                    g.insert_edge(u, v).expect("in range");
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components(&self.vertex_set()).len() == 1
    }

    /// Connected components of `G[s]`, each listed once in order of smallest vertex.
    pub fn components(&self, s: &VertexSet) -> Vec<VertexSet> {
        self.bipartite_components_within(s).into_iter().map(|(c, _)| c).collect()
    }

    /// Connected components together with a 2-colorability verdict.
    pub fn bipartite_components(&self) -> Vec<(VertexSet, bool)> {
        self.bipartite_components_within(&self.vertex_set())
    }

    /// As [`Graph::bipartite_components`], restricted to the induced subgraph `G[s]`.
    pub fn bipartite_components_within(&self, s: &VertexSet) -> Vec<(VertexSet, bool)> {
        let mut side = vec![0u8; self.n + 1];
        let mut out = Vec::new();
        for root in s.iter() {
            if side[root] != 0 {
                continue;
            }
            let mut comp = VertexSet::with_capacity(self.n);
            let mut bipartite = true;
            let mut queue = VecDeque::from([root]);
            side[root] = 1;
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for v in self.adj[u - 1].intersection(s).iter() {
                    if side[v] == 0 {
                        side[v] = 3 - side[u];
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        bipartite = false;
                    }
                }
            }
            out.push((comp, bipartite));
        }
        out
    }

    /// Induced subgraph `G[s]`, relabelled to `1..=|s|` in increasing order.
    pub fn induced(&self, s: &VertexSet) -> Self {
        let keep = s.to_vec();
        let mut index = vec![0usize; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i + 1;
        }
        let mut g = Self::empty(keep.len());
        for &u in &keep {
            for v in self.adj[u - 1].intersection(s).iter().filter(|&v| v > u) {
                g.insert_edge(index[u], index[v]).expect("in range");
            }
        }
        g
    }

    /// `G − h`: the subgraph induced by the vertices outside `h`.
    pub fn without(&self, h: &VertexSet) -> Self {
        self.induced(&self.vertex_set().difference(h))
    }

    /// True when a matching covering every vertex exists.
    pub fn has_perfect_matching(&self) -> bool {
        self.n.is_multiple_of(2) && 2 * maximum_matching(self).len() == self.n
    }

    /// Size of a maximum matching.
    pub fn matching_number(&self) -> usize {
        maximum_matching(self).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[Vertex]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn rejects_loops_and_range() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(Graph::from_edges(3, [(1, 4)]), Err(Error::VertexOutOfRange { vertex: 4, n: 3 }));
        let g = Graph::from_edges(3, [(1, 2), (2, 1), (1, 2)]).unwrap();
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn neighborhoods() {
        let g = Graph::cycle(5);
        assert_eq!(g.neighbors(1).to_vec(), [2, 5]);
        assert_eq!(g.closed_neighbors(1).to_vec(), [1, 2, 5]);
        assert!(!g.is_universal(1));
        assert!(Graph::complete(4).is_universal(2));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::complete(5).complement(), Graph::empty(5));
        let c5 = Graph::cycle(5);
        assert_eq!(c5.complement().complement(), c5);
        // C5 is self-complementary: its complement is the cycle 1-3-5-2-4-1.
        let pentagram = Graph::from_edges(5, [(1, 3), (3, 5), (5, 2), (2, 4), (4, 1)]).unwrap();
        assert_eq!(c5.complement(), pentagram);
        assert_eq!(c5.complement().num_edges(), 5);
    }

    #[test]
    fn bipartite_examples() {
        let c5 = Graph::cycle(5).bipartite_components();
        assert_eq!(c5.len(), 1);
        assert!(!c5[0].1);
        let c4 = Graph::cycle(4).bipartite_components();
        assert_eq!(c4, [(set(&[1, 2, 3, 4]), true)]);
        let two = Graph::from_edges(4, [(1, 2), (3, 4)]).unwrap().bipartite_components();
        assert_eq!(two, [(set(&[1, 2]), true), (set(&[3, 4]), true)]);
    }

    #[test]
    fn perfect_matching_examples() {
        assert!(Graph::complete(4).has_perfect_matching());
        assert!(!Graph::complete(5).has_perfect_matching());
        assert!(!Graph::cycle(7).has_perfect_matching());
        let path = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(path.has_perfect_matching());
        let star = Graph::complete_bipartite(1, 3);
        assert!(!star.has_perfect_matching());
    }

    #[test]
    fn random_is_deterministic() {
        let a = Graph::random(10, 50.0, 1).unwrap();
        let b = Graph::random(10, 50.0, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Graph::random(10, 50.0, 2).unwrap());
        assert!(Graph::random(5, 0.0, 1).is_err());
        assert!(Graph::random(5, 100.0, 1).is_err());
        assert!(Graph::random(0, 50.0, 1).is_err());
    }

    #[test]
    fn random_edge_count_within_five_sigma() {
        // Binomial(2415, 0.1): mean 241.5, sigma = sqrt(2415 * 0.1 * 0.9) ~ 14.74.
        let g = Graph::random(70, 10.0, 7).unwrap();
        let sigma = (2415.0f64 * 0.1 * 0.9).sqrt();
        assert!(((g.num_edges() as f64) - 241.5).abs() <= 5.0 * sigma);
    }

    #[test]
    fn induced_and_without() {
        let g = Graph::cycle(5);
        let h = g.without(&set(&[1]));
        assert_eq!(h, Graph::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap());
        assert!(g.is_maximal_clique(&set(&[1, 2])));
        assert!(!g.is_clique(&set(&[1, 3])));
        assert!(g.is_stable(&set(&[1, 3])));
    }
}
