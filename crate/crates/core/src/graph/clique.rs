//! Cliques and stable sets.

use alloc::vec::Vec;

use super::{Graph, Vertex, VertexSet};

impl Graph {
    /// `α(G[s])`, computed exactly as a maximum clique of the complement
    /// restricted to `s`.
    pub fn stability_number(&self, s: &VertexSet) -> usize {
        self.maximum_stable_set(s).len()
    }

    pub fn maximum_stable_set(&self, s: &VertexSet) -> VertexSet {
        let co: Vec<VertexSet> = self
            .vertices()
            .map(|v| {
                let mut nb = s.difference(&self.closed_neighbors(v));
                nb.intersect_with(s);
                nb
            })
            .collect();
        max_clique(&co, s)
    }

    /// `ω(G[s])` with a witness.
    pub fn maximum_clique(&self, s: &VertexSet) -> VertexSet {
        max_clique(&self.adj, s)
    }

    /// Grows a maximal clique from `start`, repeatedly adding the candidate
    /// of highest `weight[v - 1]`, ties going to the lowest index.
    pub fn grow_maximal_clique(&self, weight: &[f64], start: Vertex) -> VertexSet {
        let mut clique = VertexSet::singleton(start);
        let mut candidates = self.neighbors(start).clone();
        while !candidates.is_empty() {
            let mut best = None::<(Vertex, f64)>;
            for v in candidates.iter() {
                let w = weight[v - 1];
                if best.is_none_or(|(_, bw)| w > bw) {
                    best = Some((v, w));
                }
            }
            let (v, _) = best.expect("nonempty");
            clique.insert(v);
            candidates.intersect_with(self.neighbors(v));
        }
        clique
    }
}

/// Branch and bound maximum clique over adjacency bitsets, with a greedy
/// coloring bound on the candidate set.
fn max_clique(adj: &[VertexSet], s: &VertexSet) -> VertexSet {
    let mut best = VertexSet::new();
    let mut current = VertexSet::new();
    expand(adj, &mut current, s.clone(), &mut best);
    best
}

fn expand(adj: &[VertexSet], current: &mut VertexSet, mut cand: VertexSet, best: &mut VertexSet) {
    if cand.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    let (order, bounds) = color_sort(adj, &cand);
    let base = current.len();
    for (&v, &bound) in order.iter().zip(&bounds).rev() {
        if base + bound <= best.len() {
            return;
        }
        current.insert(v);
        expand(adj, current, cand.intersection(&adj[v - 1]), best);
        current.remove(v);
        cand.remove(v);
    }
}

/// Greedy sequential coloring of `cand`; returns vertices ordered by color
/// and, for each position, the number of colors used so far.
fn color_sort(adj: &[VertexSet], cand: &VertexSet) -> (Vec<Vertex>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.len());
    let mut bounds = Vec::with_capacity(cand.len());
    let mut uncolored = cand.clone();
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut avail = uncolored.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            avail.subtract(&adj[v - 1]);
            uncolored.remove(v);
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_alpha(g: &Graph, s: &VertexSet) -> usize {
        let vs = s.to_vec();
        (0u32..1 << vs.len())
            .filter_map(|mask| {
                let set: VertexSet = vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                g.is_stable(&set).then(|| set.len())
            })
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn stability_examples() {
        assert_eq!(Graph::cycle(5).stability_number(&VertexSet::full(5)), 2);
        assert_eq!(Graph::complete_bipartite(3, 3).stability_number(&VertexSet::full(6)), 3);
        assert_eq!(Graph::empty(4).stability_number(&VertexSet::full(4)), 4);
        assert_eq!(Graph::cycle(5).stability_number(&VertexSet::new()), 0);
    }

    #[test]
    fn stability_matches_brute_force() {
        for seed in 0..40 {
            let g = Graph::random(11, 20.0 + 15.0 * (seed % 5) as f64, seed).unwrap();
            let s: VertexSet = g.vertices().filter(|v| !(v + seed as usize).is_multiple_of(3)).collect();
            assert_eq!(g.stability_number(&s), brute_alpha(&g, &s));
            assert_eq!(g.stability_number(&s), g.complement().maximum_clique(&s).len());
            assert!(g.is_stable(&g.maximum_stable_set(&s)));
        }
    }

    #[test]
    fn greedy_clique_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.grow_maximal_clique(&[1.0; 4], 3).len(), 4);
        let c5 = Graph::cycle(5);
        assert_eq!(c5.grow_maximal_clique(&[1.0; 5], 1).to_vec(), [1, 2]);
        // Triangle {1,2,3} with pendant edge 3-4; weight favors 4.
        let g = Graph::from_edges(4, [(1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        assert_eq!(g.grow_maximal_clique(&[0.1, 0.1, 0.1, 0.9], 3).to_vec(), [3, 4]);
        assert_eq!(g.grow_maximal_clique(&[0.5; 4], 3).to_vec(), [1, 2, 3]);
    }

    #[test]
    fn greedy_clique_is_maximal() {
        for seed in 0..30 {
            let g = Graph::random(15, 50.0, seed).unwrap();
            let weight: Vec<f64> = (0..15).map(|i| ((i * 7 + seed as usize) % 5) as f64).collect();
            for v in g.vertices() {
                let q = g.grow_maximal_clique(&weight, v);
                assert!(q.contains(v));
                assert!(g.is_maximal_clique(&q));
            }
        }
    }
}
