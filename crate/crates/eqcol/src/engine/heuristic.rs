//! Constructive and improvement heuristics for equitable colorings.
//!
//! Colorings with exactly `k` colors are built greedily under the class
//! capacities `⌊n/k⌋`/`⌈n/k⌉` and then repaired by a tabu search over
//! swaps and size-preserving moves that minimizes conflicting edges.

use eqcol_core::{EquitableColoring, Graph, Vars, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Class capacities for `n` vertices in `k` classes.
struct Capacity {
    lo: usize,
    big: usize,
}

impl Capacity {
    fn new(n: usize, k: usize) -> Self {
        Self { lo: n / k, big: n % k }
    }

    fn open(&self, sizes: &[usize], bigs: usize, c: usize) -> bool {
        sizes[c] < self.lo || (sizes[c] == self.lo && bigs < self.big)
    }
}

/// Places vertices in `order`, each on the open class ranked best by
/// `prefer` among conflict-free ones, else on the open class with fewest
/// conflicts. Colors are 0-based here.
fn greedy(g: &Graph, k: usize, order: &[Vertex], prefer: impl Fn(Vertex, usize) -> f64) -> Vec<usize> {
    let n = g.n();
    let cap = Capacity::new(n, k);
    let mut color = vec![usize::MAX; n];
    let mut sizes = vec![0usize; k];
    let mut bigs = 0;
    for &v in order {
        let mut conflicts = vec![0usize; k];
        for u in g.neighbors(v).iter() {
            if color[u - 1] != usize::MAX {
                conflicts[color[u - 1]] += 1;
            }
        }
        let pick = (0..k)
            .filter(|&c| cap.open(&sizes, bigs, c))
            .min_by(|&a, &b| {
                conflicts[a]
                    .cmp(&conflicts[b])
                    .then(prefer(v, b).total_cmp(&prefer(v, a)))
                    .then(a.cmp(&b))
            })
            .expect("total capacity is n");
        if sizes[pick] == cap.lo {
            bigs += 1;
        }
        sizes[pick] += 1;
        color[v - 1] = pick;
    }
    color
}

/// Tabu search over assignments with equitable class sizes. Returns the
/// first conflict-free assignment found within `iters` iterations.
fn tabu(g: &Graph, k: usize, mut color: Vec<usize>, iters: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let n = g.n();
    let mut gamma = vec![vec![0i32; k]; n];
    let mut sizes = vec![0usize; k];
    for v in 1..=n {
        sizes[color[v - 1]] += 1;
        for u in g.neighbors(v).iter() {
            gamma[v - 1][color[u - 1]] += 1;
        }
    }
    let mut f: i32 = g.edges().filter(|&(u, v)| color[u - 1] == color[v - 1]).count() as i32;
    if f == 0 {
        return Some(color);
    }
    let lo = n / k;
    let uneven = !n.is_multiple_of(k);
    let mut tabu_until = vec![vec![0usize; k]; n];
    let mut best = f;
    for it in 0..iters {
        // (delta, u, new color of u, optional partner v)
        let mut choice: Option<(i32, usize, usize, Option<usize>)> = None;
        let mut ties = 0u32;
        for u in 0..n {
            let a = color[u];
            if gamma[u][a] == 0 {
                continue;
            }
            let mut consider = |delta: i32, tabu: bool, cand: (usize, usize, Option<usize>)| {
                if tabu && f + delta >= best {
                    return;
                }
                match choice {
                    Some((d, ..)) if delta > d => {}
                    Some((d, ..)) if delta == d => {
                        ties += 1;
                        if rng.random_range(0..ties) == 0 {
                            choice = Some((delta, cand.0, cand.1, cand.2));
                        }
                    }
                    _ => {
                        ties = 1;
                        choice = Some((delta, cand.0, cand.1, cand.2));
                    }
                }
            };
            if uneven && sizes[a] == lo + 1 {
                for c in 0..k {
                    if c != a && sizes[c] == lo {
                        let delta = gamma[u][c] - gamma[u][a];
                        consider(delta, tabu_until[u][c] > it, (u, c, None));
                    }
                }
            }
            for v in 0..n {
                let b = color[v];
                if b == a {
                    continue;
                }
                let adj = i32::from(g.has_edge(u + 1, v + 1));
                let delta = gamma[u][b] - gamma[u][a] + gamma[v][a] - gamma[v][b] - 2 * adj;
                let tabu = tabu_until[u][b] > it || tabu_until[v][a] > it;
                consider(delta, tabu, (u, b, Some(v)));
            }
        }
        let Some((delta, u, c, partner)) = choice else { continue };
        let mut recolor = |v: usize, to: usize, color: &mut Vec<usize>, gamma: &mut Vec<Vec<i32>>| {
            let from = color[v];
            for w in g.neighbors(v + 1).iter() {
                gamma[w - 1][from] -= 1;
                gamma[w - 1][to] += 1;
            }
            color[v] = to;
            sizes[from] -= 1;
            sizes[to] += 1;
            let tenure = (f as usize) + rng.random_range(0..10);
            tabu_until[v][from] = it + 1 + tenure;
        };
        let a = color[u];
        recolor(u, c, &mut color, &mut gamma);
        if let Some(v) = partner {
            recolor(v, a, &mut color, &mut gamma);
        }
        f += delta;
        if f < best {
            best = f;
        }
        if f == 0 {
            return Some(color);
        }
    }
    None
}

fn finish(g: &Graph, color: Vec<usize>) -> Option<EquitableColoring> {
    // Drop empty labels then renumber 1..k.
    let mut map = vec![0usize; g.n() + 1];
    let mut next = 0;
    let colors = color
        .iter()
        .map(|&c| {
            if map[c] == 0 {
                next += 1;
                map[c] = next;
            }
            map[c]
        })
        .collect();
    EquitableColoring::new(g, colors).ok().map(|c| c.canonical())
}

/// A `k`-eqcol by greedy construction and tabu repair, or `None`.
pub fn find_k_eqcol(g: &Graph, k: usize, iters: usize, restarts: usize, seed: u64) -> Option<EquitableColoring> {
    let n = g.n();
    if k == 0 || k > n {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut order: Vec<Vertex> = (1..=n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for attempt in 0..=restarts {
        if attempt > 0 {
            order.shuffle(&mut rng);
            order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        }
        let color = greedy(g, k, &order, |_, _| 0.0);
        if let Some(found) = tabu(g, k, color, iters, &mut rng) {
            return finish(g, found);
        }
    }
    None
}

/// Largest-degree-first greedy with size rebalancing, trying
/// `k = ω, ω+1, ...` until an eqcol appears; `k = n` always succeeds.
pub fn initial_heuristic(g: &Graph, seed: u64) -> EquitableColoring {
    let n = g.n();
    let start = (1..=n).map(|v| g.grow_maximal_clique(&vec![0.0; n], v).len()).max().unwrap_or(1).max(1);
    let iters = 200 * n;
    for k in start..n {
        if let Some(c) = find_k_eqcol(g, k, iters, 2, seed) {
            return c;
        }
    }
    EquitableColoring::new(g, (1..=n).collect()).expect("singletons are equitable")
}

/// Rounds an LP point into colorings with fewer than `incumbent` colors,
/// trying `k` from `lower` upward. Returns the first eqcol found.
pub fn primal_heuristic(
    g: &Graph,
    x: &[f64],
    lower: usize,
    incumbent: usize,
    iters: usize,
    seed: u64,
) -> Option<EquitableColoring> {
    let n = g.n();
    let vars = Vars::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in lower.max(1)..incumbent.min(n + 1) {
        let score = |v: Vertex, c: usize| x[vars.x(v, c + 1).0];
        let confidence = |v: Vertex| (0..k).map(|c| score(v, c)).fold(0.0f64, f64::max);
        let mut order: Vec<Vertex> = (1..=n).collect();
        order.sort_by(|&a, &b| confidence(b).total_cmp(&confidence(a)).then(a.cmp(&b)));
        let color = greedy(g, k, &order, score);
        if let Some(found) = tabu(g, k, color, iters, &mut rng) {
            return finish(g, found);
        }
    }
    None
}
