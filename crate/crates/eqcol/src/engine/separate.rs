//! Separation of violated cuts at a fractional point.
//!
//! Every routine returns only rows whose violation at the point exceeds
//! [`VIOLATION_TOL`], measured on the finished row itself.

use std::collections::HashSet;

use eqcol_core::cuts::{
    block_cut, clique_cut, clique_neighborhood_cut, outside_neighborhood_cut, s_color_capacity, s_color_cut,
    subneighborhood_cut, symmetry_cut, two_rank_core, two_rank_cut, two_rank_empty_variant,
    two_rank_singleton_variant,
};
use eqcol_core::{CutRow, Family, Graph, Vars, Vertex, VertexSet};

pub const VIOLATION_TOL: f64 = 1e-5;

const EPS: f64 = 1e-9;

/// What a separation round runs and how many rows it may return.
#[derive(Clone, Copy, Debug)]
pub struct RoundPolicy {
    pub new_families: bool,
    /// "Enough cuts" threshold and per-family cap.
    pub target: usize,
}

/// Graph data reused across separation calls.
#[derive(Clone, Debug)]
pub struct Separator<'g> {
    g: &'g Graph,
    n: usize,
    vars: Vars,
    /// `α(N(u))` per vertex, index `u - 1`.
    alpha_nb: Vec<usize>,
}

fn keep_best(mut found: Vec<(f64, CutRow)>, cap: usize) -> Vec<CutRow> {
    found.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut seen = HashSet::new();
    found
        .into_iter()
        .filter(|(_, r)| seen.insert(r.family.clone()))
        .take(cap)
        .map(|(_, r)| r)
        .collect()
}

fn violated(row: CutRow, x: &[f64]) -> Option<(f64, CutRow)> {
    let v = row.violation(x);
    (v > VIOLATION_TOL).then_some((v, row))
}

impl<'g> Separator<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let alpha_nb = g.vertices().map(|u| g.stability_number(g.neighbors(u))).collect();
        Self { g, n: g.n(), vars: Vars::new(g.n()), alpha_nb }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    fn x(&self, p: &[f64], v: Vertex, j: usize) -> f64 {
        p[self.vars.x(v, j).0]
    }

    fn w(&self, p: &[f64], j: usize) -> f64 {
        if j > self.n {
            0.0
        } else {
            p[self.vars.w(j).0]
        }
    }

    /// Greedy clique cuts per color, and clique-neighborhood cuts around
    /// every clique found when `new_families` is set.
    pub fn clique_and_clique_neighborhood(&self, p: &[f64], new_families: bool, cap: usize) -> Vec<CutRow> {
        let n = self.n;
        let mut cliques = Vec::new();
        let mut found = Vec::new();
        let mut neighborhood = Vec::new();
        for j in 1..n {
            let weight: Vec<f64> = (1..=n).map(|v| self.x(p, v, j)).collect();
            let mut seen: HashSet<VertexSet> = HashSet::new();
            for v in 1..=n {
                if weight[v - 1] <= EPS {
                    continue;
                }
                let q = self.g.grow_maximal_clique(&weight, v);
                if q.len() < 2 || !seen.insert(q.clone()) {
                    continue;
                }
                let row = clique_cut(self.g, &q, j).expect("grown cliques are cliques");
                if let Some(hit) = violated(row, p) {
                    found.push(hit);
                }
                cliques.push((j, q));
            }
        }
        if new_families {
            // base[u][k] = LHS - RHS of the (u,j,k,∅) row; Q adds Σ_Q x[v][j].
            let mut by_color: Vec<Vec<&VertexSet>> = vec![Vec::new(); n + 1];
            for (j, q) in &cliques {
                by_color[*j].push(q);
            }
            for j in 1..=n.saturating_sub(2) {
                if by_color[j].is_empty() {
                    continue;
                }
                let base = self.clique_neighborhood_base(p, j);
                for q in &by_color[j] {
                    let q_mass: f64 = q.iter().map(|v| self.x(p, v, j)).sum();
                    for u in 1..=n {
                        if q.contains(u) || q.iter().any(|v| self.g.has_edge(u, v)) {
                            continue;
                        }
                        let best = base[u - 1]
                            .iter()
                            .filter_map(|&(k, b)| (b + q_mass > VIOLATION_TOL).then_some((b + q_mass, k)))
                            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
                        if let Some((_, k)) = best {
                            if let Ok(row) = clique_neighborhood_cut(self.g, u, j, k, q) {
                                if let Some(hit) = violated(row, p) {
                                    neighborhood.push(hit);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut out = keep_best(found, cap);
        out.extend(keep_best(neighborhood, cap));
        out
    }

    /// For color `j` and every `u`, the admissible `k` with the value of
    /// `LHS - RHS` of the clique-neighborhood row before adding `Σ_Q x[v][j]`.
    fn clique_neighborhood_base(&self, p: &[f64], j: usize) -> Vec<Vec<(usize, f64)>> {
        let n = self.n;
        let late: f64 = (1..=n).map(|v| self.x(p, v, n - 1) + self.x(p, v, n)).sum();
        let dw: Vec<f64> = (0..=n + 1).map(|l| if l == 0 { 0.0 } else { self.w(p, l) - self.w(p, l + 1) }).collect();
        (1..=n)
            .map(|u| {
                let alpha = self.alpha_nb[u - 1];
                let nb_mass: f64 = self.g.neighbors(u).iter().map(|v| self.x(p, v, j)).sum();
                let fixed = nb_mass + late - self.x(p, u, n);
                (j..=n - 2)
                    .filter(|&k| alpha + 1 >= n.div_ceil(k))
                    .map(|k| {
                        let ck = n.div_ceil(k) as f64;
                        let mut lhs = fixed + (ck - 1.0) * self.x(p, u, j);
                        for l in k + 1..=n {
                            lhs += (ck - n.div_ceil(l) as f64) * self.x(p, u, l);
                        }
                        let mut rhs = 0.0;
                        for l in j..=n {
                            let seg = if l < k {
                                n.div_ceil(l).min(alpha + 1) as f64
                            } else if l <= n - 2 {
                                ck
                            } else {
                                ck + 1.0
                            };
                            rhs += seg * dw[l];
                        }
                        (k, lhs - rhs)
                    })
                    .collect()
            })
            .collect()
    }

    /// Greedy `(S,Q)`-2-rank separation, emitting the dominating variant
    /// when `|Q| <= 1`.
    pub fn two_rank(&self, p: &[f64], cap: usize) -> Vec<CutRow> {
        let n = self.n;
        let mut found = Vec::new();
        for j in 1..n {
            let weight: Vec<f64> = (1..=n).map(|v| self.x(p, v, j)).collect();
            let mut order: Vec<Vertex> = (1..=n).filter(|&v| weight[v - 1] > EPS).collect();
            order.sort_by(|&a, &b| weight[b - 1].total_cmp(&weight[a - 1]).then(a.cmp(&b)));
            let mut seeds: HashSet<(Vertex, Vertex)> = HashSet::new();
            for &a in &order {
                let Some(&b) = order.iter().find(|&&b| b != a && !self.g.has_edge(a, b)) else { continue };
                if !seeds.insert((a.min(b), a.max(b))) {
                    continue;
                }
                let mut s = VertexSet::singleton(a);
                s.insert(b);
                for &v in &order {
                    if s.contains(v) {
                        continue;
                    }
                    let outside = s.difference(self.g.neighbors(v));
                    if self.g.is_clique(&outside) {
                        s.insert(v);
                    }
                }
                if s.len() < 3 {
                    continue;
                }
                let q = two_rank_core(self.g, &s);
                let row = match q.len() {
                    0 if j + 2 <= n => two_rank_empty_variant(self.g, &s, j),
                    1 => two_rank_singleton_variant(self.g, &s, q.first().unwrap(), j),
                    _ => two_rank_cut(self.g, &s, j),
                };
                if let Some(hit) = row.ok().and_then(|r| violated(r, p)) {
                    found.push(hit);
                }
            }
        }
        keep_best(found, cap)
    }

    /// Block rows, plus subneighborhood rows with `S = N(u)` and
    /// outside-neighborhood rows when `new_families` is set; full scans.
    pub fn enumerated_families(&self, p: &[f64], new_families: bool, cap: usize) -> Vec<CutRow> {
        let n = self.n;
        let mut block = Vec::new();
        for v in 1..=n {
            let mut tail = 0.0;
            for j in (1..=n).rev() {
                tail += self.x(p, v, j);
                if j + 2 <= n && tail - self.w(p, j) > VIOLATION_TOL {
                    if let Some(hit) = violated(block_cut(v, j, n).expect("in range"), p) {
                        block.push(hit);
                    }
                }
            }
        }
        let mut out = keep_best(block, cap);
        if !new_families {
            return out;
        }
        let mut sub = Vec::new();
        let mut outside = Vec::new();
        for u in 1..=n {
            let nb = self.g.neighbors(u);
            if self.alpha_nb[u - 1] >= 2 {
                for j in 1..n {
                    if let Ok(row) = subneighborhood_cut(self.g, u, j, nb) {
                        if let Some(hit) = violated(row, p) {
                            sub.push(hit);
                        }
                    }
                }
            }
            if !self.g.is_universal(u) {
                for j in 1..=n / 2 {
                    if self.alpha_nb[u - 1] < n / j {
                        continue;
                    }
                    if let Ok(row) = outside_neighborhood_cut(self.g, u, j) {
                        if let Some(hit) = violated(row, p) {
                            outside.push(hit);
                        }
                    }
                }
            }
        }
        out.extend(keep_best(sub, cap));
        out.extend(keep_best(outside, cap));
        out
    }

    /// Greedy S-color separation over prefixes of the colors sorted by mass.
    pub fn s_color(&self, p: &[f64]) -> Vec<CutRow> {
        let n = self.n;
        let mass: Vec<f64> = (1..=n).map(|j| (1..=n).map(|v| self.x(p, v, j)).sum()).collect();
        let mut order: Vec<usize> = (1..=n).collect();
        order.sort_by(|&a, &b| mass[b - 1].total_cmp(&mass[a - 1]).then(a.cmp(&b)));
        let dw: Vec<f64> = (1..=n).map(|k| self.w(p, k) - self.w(p, k + 1)).collect();
        let violation_of = |set: &[usize]| -> f64 {
            let lhs: f64 = set.iter().map(|&j| mass[j - 1]).sum();
            let rhs: f64 = (1..=n).map(|k| s_color_capacity(n, set, k) as f64 * dw[k - 1]).sum();
            lhs - rhs
        };
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut set = Vec::new();
        for &j in &order {
            set.push(j);
            let v = violation_of(&set);
            if v > VIOLATION_TOL && best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, set.clone()));
            }
        }
        let mut out = Vec::new();
        if let Some((_, s)) = &best {
            out.extend(s_color_cut(s, n).ok().and_then(|r| violated(r, p)).map(|h| h.1));
            // Variant closed under the facet tail condition.
            let mut tail = s.clone();
            loop {
                let half = (tail.len() + 1).div_ceil(2);
                let missing: Vec<usize> = (n.saturating_sub(half) + 1..=n).filter(|c| !tail.contains(c)).collect();
                if missing.is_empty() {
                    break;
                }
                tail.extend(missing);
            }
            if tail.len() != s.len() {
                if let Some((_, row)) = s_color_cut(&tail, n).ok().and_then(|r| violated(r, p)) {
                    out.push(row);
                }
            }
        }
        out
    }

    /// Violated symmetry rows `x[v][j] <= Σ_{u=j-1}^{v-1} x[u][j-1]`.
    pub fn symmetry(&self, p: &[f64], cap: usize) -> Vec<CutRow> {
        let n = self.n;
        let mut found = Vec::new();
        for j in 2..=n {
            let mut prefix = 0.0;
            for v in j..=n {
                prefix += self.x(p, v - 1, j - 1);
                if self.x(p, v, j) - prefix > VIOLATION_TOL {
                    if let Some(hit) = violated(symmetry_cut(v, j, n).expect("in range"), p) {
                        found.push(hit);
                    }
                }
            }
        }
        keep_best(found, cap)
    }

    /// One separation round: cliques (with clique-neighborhood) and 2-rank
    /// first, the enumerated families and S-color only when fewer than
    /// `target` rows came out, symmetry rows always.
    pub fn round(&self, p: &[f64], policy: RoundPolicy) -> Vec<CutRow> {
        let cap = policy.target.max(1);
        let mut out = self.clique_and_clique_neighborhood(p, policy.new_families, cap);
        if policy.new_families {
            out.extend(self.two_rank(p, cap));
        }
        if out.len() < policy.target {
            out.extend(self.enumerated_families(p, policy.new_families, cap));
            if policy.new_families {
                out.extend(self.s_color(p));
            }
        }
        out.extend(self.symmetry(p, cap));
        let mut seen: HashSet<Family> = HashSet::new();
        out.retain(|r| seen.insert(r.family.clone()));
        out
    }
}

pub fn separate_clique_and_clique_neighborhood(g: &Graph, x: &[f64]) -> Vec<CutRow> {
    Separator::new(g).clique_and_clique_neighborhood(x, true, usize::MAX)
}

pub fn separate_two_rank(g: &Graph, x: &[f64]) -> Vec<CutRow> {
    Separator::new(g).two_rank(x, usize::MAX)
}

pub fn separate_enumerated_families(g: &Graph, x: &[f64], cap: usize) -> Vec<CutRow> {
    Separator::new(g).enumerated_families(x, true, cap)
}

pub fn separate_s_color(g: &Graph, x: &[f64]) -> Vec<CutRow> {
    Separator::new(g).s_color(x)
}

pub fn separation_round(g: &Graph, x: &[f64], policy: RoundPolicy) -> Vec<CutRow> {
    Separator::new(g).round(x, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n: usize, f: impl Fn(Var) -> f64) -> Vec<f64> {
        let vars = Vars::new(n);
        (0..vars.len()).map(|i| f(vars.decode(eqcol_core::VarId(i)))).collect()
    }

    use eqcol_core::row::Var;

    #[test]
    fn triangle_clique_cut() {
        let g = Graph::from_edges(4, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let p = point(4, |v| match v {
            Var::X { v, j: 1 } if v <= 3 => 0.5,
            Var::W { j: 1 } => 1.0,
            _ => 0.0,
        });
        let cuts = separate_clique_and_clique_neighborhood(&g, &p);
        let clique = cuts.iter().find(|r| r.family.kind() == "clique").expect("clique cut");
        assert!((clique.violation(&p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn c5_two_rank() {
        let g = Graph::cycle(5);
        let p = point(5, |v| match v {
            Var::X { j: 1, .. } => 0.45,
            Var::W { j: 1 } => 1.0,
            _ => 0.0,
        });
        let cuts = separate_two_rank(&g, &p);
        assert!(!cuts.is_empty());
        assert!(cuts.iter().all(|r| r.violation(&p) > VIOLATION_TOL));
    }

    #[test]
    fn star_subneighborhood() {
        let g = Graph::from_edges(5, (2..=5).map(|v| (1, v))).unwrap();
        // Hub split over colors 1 and 2, leaves all on color 1.
        let p = point(5, |v| match v {
            Var::X { v: 1, j: 1 } => 0.5,
            Var::X { v: 1, j: 2 } => 0.5,
            Var::X { v, j: 1 } if v > 1 => 0.5,
            Var::X { v, j: 2 } if v > 1 => 0.5,
            Var::W { j } if j <= 2 => 1.0,
            _ => 0.0,
        });
        let cuts = separate_enumerated_families(&g, &p, 100);
        assert!(cuts.iter().any(|r| r.family.kind() == "subneighborhood"), "{cuts:?}");
    }

    #[test]
    fn s_color_on_all_colors_enabled() {
        let n = 6;
        let g = Graph::cycle(n);
        // Everything on color 1 while w says n colors.
        let p = point(n, |v| match v {
            Var::X { j: 1, .. } => 1.0,
            Var::W { .. } => 1.0,
            _ => 0.0,
        });
        let cuts = separate_s_color(&g, &p);
        assert!(!cuts.is_empty());
    }

    #[test]
    fn eqcol_points_are_not_separated() {
        let g = Graph::cycle(6);
        let c = eqcol_core::EquitableColoring::new(&g, vec![1, 2, 3, 1, 2, 3]).unwrap().canonical();
        let p: Vec<f64> = c.to_vector().as_slice().iter().map(|&b| f64::from(b)).collect();
        let cuts = separation_round(&g, &p, RoundPolicy { new_families: true, target: 6 });
        assert!(cuts.is_empty(), "{cuts:?}");
    }
}
