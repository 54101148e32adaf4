#![allow(dead_code)]

use eqcol_core::{Graph, VertexSet};
use proptest::prelude::*;

/// Random graph on `n` vertices from an edge mask.
pub fn graph_strategy(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    n.prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |mask| {
            let mut edges = Vec::new();
            let mut it = mask.into_iter();
            for u in 1..=n {
                for v in u + 1..=n {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

pub fn set_from_mask(n: usize, mask: u32) -> VertexSet {
    (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect()
}

/// Every proper coloring with exactly `k` nonempty classes whose sizes are
/// equitable, by brute force over all `k^n` assignments.
pub fn brute_eqcols(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut colors = vec![1usize; n];
    loop {
        let proper = g.edges().all(|(u, v)| colors[u - 1] != colors[v - 1]);
        if proper {
            let mut sizes = vec![0usize; k];
            for &c in &colors {
                sizes[c - 1] += 1;
            }
            let lo = n / k;
            let hi = n.div_ceil(k);
            if sizes.iter().all(|&s| s >= 1 && s >= lo && s <= hi) {
                out.push(colors.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            colors[i] += 1;
            if colors[i] <= k {
                break;
            }
            colors[i] = 1;
            i += 1;
        }
    }
}

/// Brute-force stability number of `s`.
pub fn brute_alpha(g: &Graph, s: &VertexSet) -> usize {
    let vs = s.to_vec();
    let mut best = 0;
    for mask in 0u32..(1 << vs.len()) {
        let pick: Vec<_> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
        let stable = pick.iter().enumerate().all(|(a, &u)| pick[a + 1..].iter().all(|&v| !g.has_edge(u, v)));
        if stable {
            best = best.max(pick.len());
        }
    }
    best
}

/// Brute-force maximum matching size.
pub fn brute_matching(g: &Graph) -> usize {
    fn go(g: &Graph, used: &mut Vec<bool>, from: usize) -> usize {
        let n = g.n();
        let Some(u) = (from..=n).find(|&u| !used[u]) else { return 0 };
        used[u] = true;
        let mut best = go(g, used, u + 1);
        for v in u + 1..=n {
            if !used[v] && g.has_edge(u, v) {
                used[v] = true;
                best = best.max(1 + go(g, used, u + 1));
                used[v] = false;
            }
        }
        used[u] = false;
        best
    }
    go(g, &mut vec![false; g.n() + 1], 1)
}
