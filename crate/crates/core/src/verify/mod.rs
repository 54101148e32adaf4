//! Polytope dimension, face dimensions, facet verdicts and the literal
//! evaluation of each family's sufficient facet conditions.

mod rank;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::cuts::{check_row_vars, gamma, two_rank_core};
use crate::error::precondition;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracle::{EqcolCatalog, EqcolVector, EquitableColoring, Oracle, Predicate};
use crate::row::{CutRow, Family};
use crate::{Error, Result};

pub use rank::{affine_rank, AffineRankReport};

/// One evaluated condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bullet {
    pub label: &'static str,
    pub holds: bool,
}

/// Verdicts for a family's sufficient facet conditions. The facet claim
/// applies when every `required` bullet holds and, if `alternatives` is
/// nonempty, at least one of them holds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionReport {
    pub family: &'static str,
    pub required: Vec<Bullet>,
    pub alternatives: Vec<Bullet>,
}

impl ConditionReport {
    fn new(family: &'static str) -> Self {
        Self { family, required: Vec::new(), alternatives: Vec::new() }
    }

    fn require(&mut self, label: &'static str, holds: bool) -> &mut Self {
        self.required.push(Bullet { label, holds });
        self
    }

    fn alternative(&mut self, label: &'static str, holds: bool) -> &mut Self {
        self.alternatives.push(Bullet { label, holds });
        self
    }

    /// True when the family states a facet claim and all its conditions hold.
    pub fn all_hold(&self) -> bool {
        !(self.required.is_empty() && self.alternatives.is_empty())
            && self.required.iter().all(|b| b.holds)
            && (self.alternatives.is_empty() || self.alternatives.iter().any(|b| b.holds))
    }
}

/// Everything needed to audit inequalities on one small graph: the graph,
/// its full eqcol catalog, `A(G)` and the polytope dimension.
pub struct Audit<'g> {
    g: &'g Graph,
    catalog: EqcolCatalog,
    infeasible: BTreeSet<usize>,
    vectors: Vec<EqcolVector>,
    ecp: AffineRankReport,
}

impl<'g> Audit<'g> {
    pub fn new(g: &'g Graph, oracle: &Oracle) -> Result<Self> {
        let catalog = EqcolCatalog::build(g, oracle)?;
        Ok(Self::from_catalog(g, catalog))
    }

    pub fn from_catalog(g: &'g Graph, catalog: EqcolCatalog) -> Self {
        let infeasible = catalog.infeasible_k_set();
        let vectors: Vec<EqcolVector> = catalog.iter().map(EquitableColoring::to_vector).collect();
        let ecp = affine_rank(vectors.iter().map(EqcolVector::as_slice), None);
        Self { g, catalog, infeasible, vectors, ecp }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn catalog(&self) -> &EqcolCatalog {
        &self.catalog
    }

    /// `A(G)`.
    pub fn infeasible_k_set(&self) -> &BTreeSet<usize> {
        &self.infeasible
    }

    /// Affine dimension of the convex hull of all eqcol vectors.
    pub fn ecp_dimension(&self) -> &AffineRankReport {
        &self.ecp
    }

    /// `n² − (|A(G)| + 2)`.
    pub fn predicted_dimension(&self) -> isize {
        let n = self.g.n() as isize;
        n * n - (self.infeasible.len() as isize + 2)
    }

    /// `n >= 5` and `2 <= χ_eq(G) <= n − 2`.
    pub fn meets_standing_assumption(&self) -> bool {
        let n = self.g.n();
        let chi = self.catalog.chi_eq();
        n >= 5 && (2..=n - 2).contains(&chi)
    }

    /// Dimension of the face `{row tight}`; requires a valid row.
    pub fn face_dimension(&self, row: &CutRow) -> Result<AffineRankReport> {
        check_row_vars(self.g.n(), row)?;
        if !self.catalog.is_valid(row) {
            return Err(precondition!("row {} is not valid for the polytope", row.family.kind()));
        }
        let vars = self.catalog.vars();
        let tight: Vec<&[u8]> = self
            .catalog
            .iter()
            .zip(&self.vectors)
            .filter(|(c, _)| row.tight_at(vars, c))
            .map(|(_, v)| v.as_slice())
            .collect();
        let cap = usize::try_from(self.ecp.affine_dim).ok();
        Ok(affine_rank(tight.iter().copied(), cap))
    }

    pub fn is_facet(&self, row: &CutRow) -> Result<bool> {
        Ok(self.face_dimension(row)?.affine_dim == self.ecp.affine_dim - 1)
    }

    /// Lower bound on the face dimension of a `(u,j,k,Q)`-clique-neighborhood
    /// row: `dim − (3n − |A(G)| − ⌊n/2⌋ − |N(u)| − |Q| − 5)`.
    pub fn clique_neighborhood_face_bound(&self, u: Vertex, q: &VertexSet) -> isize {
        let n = self.g.n() as isize;
        let deficit = 3 * n
            - self.infeasible.len() as isize
            - n / 2
            - self.g.degree(u) as isize
            - q.len() as isize
            - 5;
        self.ecp.affine_dim - deficit
    }

    fn exists(&self, k: usize, spec: &[Predicate]) -> bool {
        if k == 0 || k > self.g.n() {
            return false;
        }
        match self.catalog.find(k, spec) {
            Ok(found) => found.is_some(),
            // A predicate naming a color above k describes an empty class.
            Err(_) => false,
        }
    }

    fn exists_tight(&self, k: usize, row: &CutRow, extra: &[Predicate]) -> bool {
        let mut spec = Vec::from(extra);
        spec.push(Predicate::Tight(row.clone()));
        self.exists(k, &spec)
    }

    /// Evaluates the sufficient facet conditions attached to the row's family.
    pub fn check_sufficient_conditions(&self, row: &CutRow) -> Result<ConditionReport> {
        let g = self.g;
        let n = g.n();
        let report = match &row.family {
            Family::Clique { q, j } => {
                let mut r = ConditionReport::new("clique");
                r.require("j <= n-1", *j < n)
                    .require("Q is a maximal clique", g.is_maximal_clique(q))
                    .require("|Q| >= 2", q.len() >= 2);
                r
            }
            Family::Block { j, .. } => {
                let mut r = ConditionReport::new("block");
                r.require("j <= n-2", *j + 2 <= n).require("j-1 not in A(G)", !self.infeasible.contains(&(j - 1)));
                r
            }
            Family::TwoRank { s, j, .. } => self.two_rank_conditions(row, s, *j),
            Family::TwoRankEmpty { .. } | Family::TwoRankSingleton { .. } => ConditionReport::new("two-rank-variant"),
            Family::Subneighborhood { u, j, s } => self.subneighborhood_conditions(*u, *j, s),
            Family::SColor { colors } => {
                let size = colors.len();
                let half = (size + 1).div_ceil(2);
                let tail_ok = (n.saturating_sub(half) + 1..=n).all(|c| colors.contains(&c));
                let mut r = ConditionReport::new("s-color");
                r.require("3 <= |S| <= n-2", size >= 3 && size + 2 <= n)
                    .require("S contains all colors > n - ⌈(|S|+1)/2⌉", tail_ok)
                    .require("complement of G has a matching of size ⌈(|S|+1)/2⌉", g.complement().matching_number() >= half);
                r
            }
            Family::OutsideNeighborhood { u, j } => self.outside_neighborhood_conditions(row, *u, *j),
            Family::CliqueNeighborhood { u, j, k, q } => self.clique_neighborhood_conditions(row, *u, *j, *k, q),
            other => {
                return Err(Error::Parameter(alloc::format!(
                    "no facet conditions are known for {} rows",
                    other.kind()
                )))
            }
        };
        Ok(report)
    }

    fn two_rank_conditions(&self, row: &CutRow, s: &VertexSet, j: usize) -> ConditionReport {
        let _ = row;
        let g = self.g;
        let n = g.n();
        let q = two_rank_core(g, s);
        let rest = s.difference(&q);
        let co_rest = g.complement().bipartite_components_within(&rest);
        let outside = g.vertex_set().difference(s);
        let mut r = ConditionReport::new("two-rank");
        r.require("j <= n-1", j < n)
            .require("α(S) = 2", g.stability_number(s) == 2)
            .require("|Q| >= 2", q.len() >= 2)
            .require("no component of the complement of G[S∖Q] is bipartite", co_rest.iter().all(|(_, bip)| !bip));

        let no_extension = outside.iter().all(|v| {
            let mut ext = q.clone();
            ext.insert(v);
            !g.is_clique(&ext)
        });
        let j_small = j < n.div_ceil(2);
        let dominated: Vec<Vertex> = outside.iter().filter(|&v| q.is_subset(g.neighbors(v))).collect();
        let odd = n % 2 == 1
            && j_small
            && dominated.iter().all(|&v| {
                self.stable_triples(v, s).any(|h| g.without(&h).complement().has_perfect_matching())
            });
        let even = n.is_multiple_of(2)
            && j_small
            && dominated.iter().all(|&v| {
                self.stable_triples(v, s).any(|h| {
                    let others = g.vertex_set().difference(&h);
                    stable_sets_of_size_three(g, &others).any(|h2| g.without(&h.union(&h2)).complement().has_perfect_matching())
                })
            });
        r.alternative("for all v outside S, Q ∪ {v} is not a clique", no_extension)
            .alternative("n odd, j <= ⌈n/2⌉-1, stable triple H with perfect matching in complement of G-H", odd)
            .alternative("n even, j <= ⌈n/2⌉-1, disjoint stable triples H, H' with perfect matching", even);
        r
    }

    /// Stable sets `{v, a, b}` with `a, b ∈ S`.
    fn stable_triples<'a>(&'a self, v: Vertex, s: &'a VertexSet) -> impl Iterator<Item = VertexSet> + 'a {
        let g = self.g;
        let cand: Vec<Vertex> = s.difference(&g.closed_neighbors(v)).to_vec();
        let pairs: Vec<(Vertex, Vertex)> = cand
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| cand[i + 1..].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| !g.has_edge(a, b))
            .collect();
        pairs.into_iter().map(move |(a, b)| [v, a, b].into_iter().collect())
    }

    fn subneighborhood_conditions(&self, u: Vertex, j: usize, s: &VertexSet) -> ConditionReport {
        let g = self.g;
        let n = g.n();
        let nb = g.neighbors(u);
        let alpha = g.stability_number(s);
        let gj = gamma(n, j, alpha.max(1));
        let mut r = ConditionReport::new("subneighborhood");
        r.require("j <= n-1", j < n)
            .require("S ⊆ N(u)", s.is_subset(nb))
            .require("α(S) >= 2", alpha >= 2)
            .require("S = N(u) or α(S) <= ⌈n/j⌉ - 1", s == nb || alpha < n.div_ceil(j));

        let ks: BTreeSet<usize> = (2..gj).map(|i| n.div_ceil(i) - 1).collect();
        let colorings = ks.iter().all(|&k| {
            self.exists(k, &[Predicate::ClassMeets { color: j, set: s.clone(), count: gamma(n, k, alpha.max(1)) }])
        });
        r.require("for each listed k, a k-eqcol with |C_j ∩ S| = γ_kS", colorings);

        let outside_s = nb.difference(s);
        let singles = outside_s.iter().all(|v| {
            let others = nb.difference(s).difference(&VertexSet::singleton(v));
            let spec = [
                Predicate::ClassMeets { color: j, set: s.clone(), count: alpha },
                Predicate::InClass { v, color: j },
                Predicate::ClassMeets { color: j, set: others, count: 0 },
            ];
            (j..=n).any(|k| self.exists(k, &spec))
        });
        r.require("for each v in N(u)∖S, an eqcol with |C_j ∩ S| = α(S) and (C_j ∩ N(u))∖S = {v}", singles);
        r
    }

    fn outside_neighborhood_conditions(&self, row: &CutRow, u: Vertex, j: usize) -> ConditionReport {
        let g = self.g;
        let n = g.n();
        let nb = g.neighbors(u);
        let closed = g.closed_neighbors(u);
        let outside = g.vertex_set().difference(&closed);
        let mut r = ConditionReport::new("outside-neighborhood");
        r.require("u is not universal", !g.is_universal(u))
            .require("j <= ⌊n/2⌋", j >= 1 && j <= n / 2)
            .require("α(N(u)) >= ⌊n/j⌋", g.stability_number(nb) >= n / j);

        let private = outside.iter().any(|v| !nb.difference(g.neighbors(v)).is_empty());
        r.require("some v outside N[u] has N(u)∖N(v) nonempty", private);

        let matching = n.is_multiple_of(2) || g.without(&VertexSet::singleton(u)).complement().has_perfect_matching();
        r.require("n even, or the complement of G-u has a perfect matching", matching);

        let half = n / 2;
        let pairs = outside.iter().all(|v| {
            let pair: VertexSet = [u, v].into_iter().collect();
            self.exists(half, &[Predicate::ClassEquals { color: j, set: pair }])
        });
        r.require("for each v outside N[u], a ⌊n/2⌋-eqcol with C_j = {u, v}", pairs);

        let steps = (j..=half).filter(|&k| n / k > n / (k + 1)).all(|k| {
            let full_nb = self.exists(k, &[Predicate::ClassMeets { color: j, set: nb.clone(), count: n.div_ceil(k) }]);
            let with_u = self.exists(
                k,
                &[Predicate::InClass { v: u, color: j }, Predicate::ClassMeets { color: j, set: outside.clone(), count: n / k - 1 }],
            );
            full_nb && with_u
        });
        r.require("for each k in j..=⌊n/2⌋ with ⌊n/k⌋ > ⌊n/(k+1)⌋, the two k-eqcols exist", steps);

        let faces = (j..=n.saturating_sub(3)).filter(|k| !self.infeasible.contains(k)).all(|k| self.exists_tight(k, row, &[]));
        r.require("for each k in {j..n-3}∖A(G), a k-eqcol on the face", faces);
        r
    }

    fn clique_neighborhood_conditions(&self, row: &CutRow, u: Vertex, j: usize, k: usize, q: &VertexSet) -> ConditionReport {
        let g = self.g;
        let n = g.n();
        let nb = g.neighbors(u);
        let closed = g.closed_neighbors(u);
        let ck = n.div_ceil(k);
        let mut r = ConditionReport::new("clique-neighborhood");
        r.require("Q is a clique disjoint from N[u]", g.is_clique(q) && q.is_disjoint(&closed))
            .require("j <= k <= n-2", 1 <= j && j <= k && k + 2 <= n)
            .require("α(N(u)) >= ⌈n/k⌉ - 1", g.stability_number(nb) + 1 >= ck)
            .require("some v in Q has N(u)∖N(v) nonempty", q.iter().any(|v| !nb.difference(g.neighbors(v)).is_empty()));

        let faces = (j..=n.saturating_sub(3)).filter(|l| !self.infeasible.contains(l)).all(|l| self.exists_tight(l, row, &[]));
        r.require("for each l in {j..n-3}∖A(G), an l-eqcol on the face", faces);

        let vars = self.catalog.vars();
        let outside = g.vertex_set().difference(&closed.union(q));
        let pairs = outside.iter().all(|v| {
            self.catalog.of_k(k).iter().any(|c| {
                c.color_of(v) == j && row.tight_at(vars, c) && self.recolored_on_face(c, v, row).is_some()
            })
        });
        r.require("for each v outside N[u] ∪ Q, two k-eqcols on the face differing only in v's color, v ∈ C_j first", pairs);

        let splits = (1..ck).all(|i| {
            let l = (n.div_ceil(i) - 1).max(n - 2);
            self.exists_tight(l, row, &[Predicate::InClass { v: u, color: j }])
                && self.exists_tight(l, row, &[Predicate::InClass { v: u, color: l }])
        });
        r.require("for each 1 <= i <= ⌈n/k⌉-1 and l = max(⌈n/i⌉-1, n-2), l-eqcols on the face with u ∈ C_j and u ∈ C_l", splits);
        r
    }

    /// A coloring equal to `c` except that `v` leaves color `c(v)`, still an
    /// eqcol with the same colors and tight at `row`.
    fn recolored_on_face(&self, c: &EquitableColoring, v: Vertex, row: &CutRow) -> Option<EquitableColoring> {
        let vars = self.catalog.vars();
        let base: Vec<usize> = c.colors().collect();
        (1..=c.k()).filter(|&m| m != c.color_of(v)).find_map(|m| {
            let mut colors = base.clone();
            colors[v - 1] = m;
            let other = EquitableColoring::new(self.g, colors).ok()?;
            (other.k() == c.k() && row.tight_at(vars, &other)).then_some(other)
        })
    }
}

/// Stable sets of size three inside `within`.
fn stable_sets_of_size_three<'a>(g: &'a Graph, within: &VertexSet) -> impl Iterator<Item = VertexSet> + 'a {
    let vs = within.to_vec();
    let mut out = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for (jj, &b) in vs.iter().enumerate().skip(i + 1) {
            if g.has_edge(a, b) {
                continue;
            }
            for &c in &vs[jj + 1..] {
                if !g.has_edge(a, c) && !g.has_edge(b, c) {
                    out.push([a, b, c].into_iter().collect());
                }
            }
        }
    }
    out.into_iter()
}
