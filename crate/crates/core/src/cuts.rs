//! Generators for the valid-inequality families of the equitable coloring
//! polytope, plus an enumeration-based validity check.
//!
//! Every generator checks its preconditions and returns the row in `<=`
//! form with exact integer coefficients; the dummy `w[n+1]` is eliminated.

use alloc::vec::Vec;

use crate::error::precondition;
use crate::formulation::telescoped;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracle::{EqcolCatalog, Oracle};
use crate::row::{CutRow, Family, Sense, VarId, Vars};
use crate::{Error, Result};

fn check_color(j: usize, max: usize) -> Result<()> {
    if j == 0 || j > max {
        return Err(Error::ColorOutOfRange { color: j, max });
    }
    Ok(())
}

fn check_vertex(g: &Graph, v: Vertex) -> Result<()> {
    if v == 0 || v > g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(())
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<()> {
    match s.last() {
        Some(v) if v > g.n() => Err(Error::VertexOutOfRange { vertex: v, n: g.n() }),
        _ => Ok(()),
    }
}

/// `Σ_{v∈Q} x[v][j] <= w[j]` for a clique `Q`, `|Q| >= 2`, `j <= n-1`.
pub fn clique_cut(g: &Graph, q: &VertexSet, j: usize) -> Result<CutRow> {
    check_set(g, q)?;
    check_color(j, g.n().saturating_sub(1))?;
    if q.len() < 2 {
        return Err(precondition!("clique must have at least two vertices, got {}", q.len()));
    }
    if !g.is_clique(q) {
        return Err(precondition!("{q:?} is not a clique"));
    }
    let vars = Vars::new(g.n());
    let terms = q.iter().map(|v| (vars.x(v, j), 1)).chain([(vars.w(j), -1)]);
    Ok(CutRow::new(terms, Sense::Le, 0, Family::Clique { q: q.clone(), j }))
}

/// Block inequality `Σ_{k=j}^{n} x[v][k] <= w[j]`, `j <= n-2`.
pub fn block_cut(v: Vertex, j: usize, n: usize) -> Result<CutRow> {
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    check_color(j, n.saturating_sub(2))?;
    let vars = Vars::new(n);
    let terms = (j..=n).map(|k| (vars.x(v, k), 1)).chain([(vars.w(j), -1)]);
    Ok(CutRow::new(terms, Sense::Le, 0, Family::Block { v, j }))
}

/// `Q = {q ∈ S : S ⊆ N[q]}`.
pub fn two_rank_core(g: &Graph, s: &VertexSet) -> VertexSet {
    s.iter().filter(|&q| s.is_subset(&g.closed_neighbors(q))).collect()
}

fn require_alpha_two(g: &Graph, s: &VertexSet) -> Result<()> {
    check_set(g, s)?;
    let alpha = g.stability_number(s);
    if alpha != 2 {
        return Err(precondition!("stability number of S is {alpha}, expected 2"));
    }
    Ok(())
}

/// `(S,Q)`-2-rank inequality
/// `Σ_{S∖Q} x[v][j] + 2 Σ_Q x[v][j] <= 2 w[j]`; `Q` is derived from `S`.
pub fn two_rank_cut(g: &Graph, s: &VertexSet, j: usize) -> Result<CutRow> {
    require_alpha_two(g, s)?;
    check_color(j, g.n().saturating_sub(1))?;
    let q = two_rank_core(g, s);
    let vars = Vars::new(g.n());
    let terms: Vec<_> = s
        .iter()
        .map(|v| (vars.x(v, j), if q.contains(v) { 2 } else { 1 }))
        .chain([(vars.w(j), -2)])
        .collect();
    Ok(CutRow::new(terms, Sense::Le, 0, Family::TwoRank { s: s.clone(), q, j }))
}

/// Dominating form when `Q = ∅`:
/// `Σ_S x[v][j] + Σ_V x[v][n-1] <= 2 w[j] + w[n-1] - w[n]`, `j <= n-2`.
pub fn two_rank_empty_variant(g: &Graph, s: &VertexSet, j: usize) -> Result<CutRow> {
    require_alpha_two(g, s)?;
    let n = g.n();
    check_color(j, n.saturating_sub(2))?;
    let q = two_rank_core(g, s);
    if !q.is_empty() {
        return Err(precondition!("Q = {q:?} is not empty"));
    }
    let vars = Vars::new(n);
    let terms = s
        .iter()
        .map(|v| (vars.x(v, j), 1))
        .chain(g.vertices().map(|v| (vars.x(v, n - 1), 1)))
        .chain([(vars.w(j), -2), (vars.w(n - 1), -1), (vars.w(n), 1)]);
    Ok(CutRow::new(terms, Sense::Le, 0, Family::TwoRankEmpty { s: s.clone(), j }))
}

/// Dominating form when `Q = {q}`:
/// `Σ_{S∖{q}} x[v][j] + 2 x[q][j] + x[q][n] <= 2 w[j]`, `j <= n-1`.
pub fn two_rank_singleton_variant(g: &Graph, s: &VertexSet, q: Vertex, j: usize) -> Result<CutRow> {
    require_alpha_two(g, s)?;
    let n = g.n();
    check_color(j, n.saturating_sub(1))?;
    let core = two_rank_core(g, s);
    if core != VertexSet::singleton(q) {
        return Err(precondition!("Q = {core:?}, expected {{{q}}}"));
    }
    let vars = Vars::new(n);
    let terms = s
        .iter()
        .map(|v| (vars.x(v, j), if v == q { 2 } else { 1 }))
        .chain([(vars.x(q, n), 1), (vars.w(j), -2)]);
    Ok(CutRow::new(terms, Sense::Le, 0, Family::TwoRankSingleton { s: s.clone(), q, j }))
}

/// `γ_{kS} = min(⌈n/k⌉, α(S))`.
pub fn gamma(n: usize, k: usize, alpha_s: usize) -> usize {
    n.div_ceil(k).min(alpha_s)
}

/// `(u,j,S)`-subneighborhood inequality
/// `γ_j x[u][j] + Σ_S x[v][j] + Σ_{k>j} (γ_j - γ_k) x[u][k] <= γ_j w[j]`.
pub fn subneighborhood_cut(g: &Graph, u: Vertex, j: usize, s: &VertexSet) -> Result<CutRow> {
    check_vertex(g, u)?;
    check_set(g, s)?;
    let n = g.n();
    check_color(j, n.saturating_sub(1))?;
    if !s.is_subset(g.neighbors(u)) {
        return Err(precondition!("S = {s:?} is not contained in N({u})"));
    }
    let alpha = g.stability_number(s);
    if alpha < 2 {
        return Err(precondition!("stability number of S is {alpha}, expected at least 2"));
    }
    let vars = Vars::new(n);
    let gj = gamma(n, j, alpha) as i64;
    let terms = [(vars.x(u, j), gj), (vars.w(j), -gj)]
        .into_iter()
        .chain(s.iter().map(|v| (vars.x(v, j), 1)))
        .chain((j + 1..=n).map(|k| (vars.x(u, k), gj - gamma(n, k, alpha) as i64)));
    Ok(CutRow::new(terms, Sense::Le, 0, Family::Subneighborhood { u, j, s: s.clone() }))
}

/// `b_{Sk} = d ⌊n/k⌋ + min(d, n - k⌊n/k⌋)` with `d = |S ∩ {1..k}|`: the most
/// vertices the colors of `S` can hold in a `k`-eqcol.
pub fn s_color_capacity(n: usize, colors: &[usize], k: usize) -> i64 {
    let d = colors.iter().filter(|&&c| c <= k).count();
    let floor = n / k;
    (d * floor + d.min(n - k * floor)) as i64
}

/// `S`-color inequality `Σ_{j∈S} Σ_v x[v][j] <= Σ_k b_{Sk} (w[k] - w[k+1])`.
pub fn s_color_cut(colors: &[usize], n: usize) -> Result<CutRow> {
    if colors.is_empty() {
        return Err(Error::Parameter("S-color inequality needs a nonempty color set".into()));
    }
    let mut set: Vec<usize> = colors.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&c| c == 0 || c > n) {
        return Err(Error::ColorOutOfRange { color: bad, max: n });
    }
    let vars = Vars::new(n);
    let lhs = set.iter().flat_map(|&j| (1..=n).map(move |v| (vars.x(v, j), 1)));
    let rhs = telescoped(vars, 1, |k| s_color_capacity(n, &set, k));
    let terms: Vec<_> = lhs.chain(rhs.into_iter().map(|(v, c)| (v, -c))).collect();
    Ok(CutRow::new(terms, Sense::Le, 0, Family::SColor { colors: set }))
}

/// `(u,j)`-outside-neighborhood inequality with `b_{jk} = ⌊n/j⌋ - ⌊n/k⌋`:
/// `(⌊n/j⌋-1) x[u][j] - Σ_{v∉N[u]} x[v][j] + Σ_{k>j} b_{jk} x[u][k]
///  <= Σ_{k>j} b_{jk} (w[k] - w[k+1])`.
pub fn outside_neighborhood_cut(g: &Graph, u: Vertex, j: usize) -> Result<CutRow> {
    check_vertex(g, u)?;
    let n = g.n();
    if g.is_universal(u) {
        return Err(precondition!("vertex {u} is universal"));
    }
    if j == 0 || j > n / 2 {
        return Err(precondition!("color {j} must lie in 1..={}", n / 2));
    }
    let alpha = g.stability_number(g.neighbors(u));
    if alpha < n / j {
        return Err(precondition!("α(N({u})) = {alpha} is below ⌊n/j⌋ = {}", n / j));
    }
    let vars = Vars::new(n);
    let b = |k: usize| (n / j - n / k) as i64;
    let outside = g.vertex_set().difference(&g.closed_neighbors(u));
    let lhs = [(vars.x(u, j), (n / j) as i64 - 1)]
        .into_iter()
        .chain(outside.iter().map(|v| (vars.x(v, j), -1)))
        .chain((j + 1..=n).map(|k| (vars.x(u, k), b(k))));
    // Σ_{k=j+1}^{n} b_jk (w_k - w_{k+1}) telescoped from j with b_jj = 0.
    let rhs = telescoped(vars, j, b);
    let terms = lhs.chain(rhs.into_iter().map(|(v, c)| (v, -c)));
    Ok(CutRow::new(terms, Sense::Le, 0, Family::OutsideNeighborhood { u, j }))
}

/// `(u,j,k,Q)`-clique-neighborhood inequality.
pub fn clique_neighborhood_cut(g: &Graph, u: Vertex, j: usize, k: usize, q: &VertexSet) -> Result<CutRow> {
    check_vertex(g, u)?;
    check_set(g, q)?;
    let n = g.n();
    if n < 3 {
        return Err(precondition!("needs at least 3 vertices"));
    }
    if !(1 <= j && j <= k && k <= n - 2) {
        return Err(precondition!("need 1 <= j <= k <= n-2, got j = {j}, k = {k}"));
    }
    if !g.is_clique(q) {
        return Err(precondition!("{q:?} is not a clique"));
    }
    if !q.is_disjoint(&g.closed_neighbors(u)) {
        return Err(precondition!("Q meets N[{u}]"));
    }
    let nb = g.neighbors(u);
    let alpha = g.stability_number(nb);
    let ck = n.div_ceil(k) as i64;
    if (alpha as i64) < ck - 1 {
        return Err(precondition!("α(N({u})) = {alpha} is below ⌈n/k⌉ - 1 = {}", ck - 1));
    }
    let vars = Vars::new(n);
    let span = nb.union(q);
    let lhs = [(vars.x(u, j), ck - 1)]
        .into_iter()
        .chain(span.iter().map(|v| (vars.x(v, j), 1)))
        .chain((k + 1..=n).map(|l| (vars.x(u, l), ck - n.div_ceil(l) as i64)))
        .chain(g.vertices().map(|v| (vars.x(v, n - 1), 1)))
        .chain(g.vertices().filter(|&v| v != u).map(|v| (vars.x(v, n), 1)));
    let segment = |l: usize| -> i64 {
        if l < k {
            n.div_ceil(l).min(alpha + 1) as i64
        } else if l <= n - 2 {
            ck
        } else {
            ck + 1
        }
    };
    let rhs = telescoped(vars, j, segment);
    let terms = lhs.chain(rhs.into_iter().map(|(v, c)| (v, -c)));
    Ok(CutRow::new(terms, Sense::Le, 0, Family::CliqueNeighborhood { u, j, k, q: q.clone() }))
}

/// Symmetry-breaking row `x[v][j] <= Σ_{u=j-1}^{v-1} x[u][j-1]`,
/// `2 <= j <= v <= n`. Valid for canonically labelled colorings only.
pub fn symmetry_cut(v: Vertex, j: usize, n: usize) -> Result<CutRow> {
    if !(2 <= j && j <= v && v <= n) {
        return Err(precondition!("need 2 <= j <= v <= n, got v = {v}, j = {j}, n = {n}"));
    }
    let vars = Vars::new(n);
    let terms = [(vars.x(v, j), 1)].into_iter().chain((j - 1..v).map(|u| (vars.x(u, j - 1), -1)));
    Ok(CutRow::new(terms, Sense::Le, 0, Family::Symmetry { v, j }))
}

/// Rebuilds a cut from its family tag.
pub fn regenerate(g: &Graph, family: &Family) -> Result<CutRow> {
    let n = g.n();
    match family {
        Family::Clique { q, j } => clique_cut(g, q, *j),
        Family::Block { v, j } => block_cut(*v, *j, n),
        Family::TwoRank { s, j, .. } => two_rank_cut(g, s, *j),
        Family::TwoRankEmpty { s, j } => two_rank_empty_variant(g, s, *j),
        Family::TwoRankSingleton { s, q, j } => two_rank_singleton_variant(g, s, *q, *j),
        Family::Subneighborhood { u, j, s } => subneighborhood_cut(g, *u, *j, s),
        Family::SColor { colors } => s_color_cut(colors, n),
        Family::OutsideNeighborhood { u, j } => outside_neighborhood_cut(g, *u, *j),
        Family::CliqueNeighborhood { u, j, k, q } => clique_neighborhood_cut(g, *u, *j, *k, q),
        Family::Symmetry { v, j } => symmetry_cut(*v, *j, n),
        other => Err(Error::Parameter(alloc::format!("{} rows are not generated cuts", other.kind()))),
    }
}

/// Family names accepted by [`instances`].
pub const CUT_KINDS: [&str; 10] = [
    "clique",
    "block",
    "two-rank",
    "two-rank-empty",
    "two-rank-singleton",
    "subneighborhood",
    "s-color",
    "outside-neighborhood",
    "clique-neighborhood",
    "symmetry",
];

/// Largest `n` for which [`instances`] walks all subsets.
pub const INSTANCE_CAP: usize = 12;

fn subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (0u32..1 << n).map(move |m| (1..=n).filter(|v| m >> (v - 1) & 1 == 1).collect())
}

/// Every row of family `kind` on `g` whose parameters meet the generator's
/// preconditions, in a fixed order. Set parameters range over all subsets.
pub fn instances(g: &Graph, kind: &str) -> Result<Vec<CutRow>> {
    let n = g.n();
    if n > INSTANCE_CAP {
        return Err(Error::EnumerationCap { n, cap: INSTANCE_CAP });
    }
    let colors = |hi: usize| 1..=hi;
    let mut out = Vec::new();
    let mut keep = |r: Result<CutRow>| {
        if let Ok(r) = r {
            out.push(r);
        }
    };
    match kind {
        "clique" => subsets(n).filter(|q| q.len() >= 2).for_each(|q| colors(n.saturating_sub(1)).for_each(|j| keep(clique_cut(g, &q, j)))),
        "block" => g.vertices().for_each(|v| colors(n.saturating_sub(2)).for_each(|j| keep(block_cut(v, j, n)))),
        "two-rank" => subsets(n).for_each(|s| colors(n.saturating_sub(1)).for_each(|j| keep(two_rank_cut(g, &s, j)))),
        "two-rank-empty" => subsets(n).for_each(|s| colors(n.saturating_sub(2)).for_each(|j| keep(two_rank_empty_variant(g, &s, j)))),
        "two-rank-singleton" => subsets(n).for_each(|s| {
            if let Some(q) = two_rank_core(g, &s).iter().next() {
                colors(n.saturating_sub(1)).for_each(|j| keep(two_rank_singleton_variant(g, &s, q, j)));
            }
        }),
        "subneighborhood" => g.vertices().for_each(|u| {
            subsets(n)
                .filter(|s| s.is_subset(g.neighbors(u)))
                .for_each(|s| colors(n.saturating_sub(1)).for_each(|j| keep(subneighborhood_cut(g, u, j, &s))))
        }),
        "s-color" => subsets(n).filter(|s| !s.is_empty()).for_each(|s| keep(s_color_cut(&s.to_vec(), n))),
        "outside-neighborhood" => g.vertices().for_each(|u| colors(n / 2).for_each(|j| keep(outside_neighborhood_cut(g, u, j)))),
        "clique-neighborhood" => g.vertices().for_each(|u| {
            let cliques: Vec<VertexSet> = subsets(n)
                .filter(|q| g.is_clique(q) && q.is_disjoint(&g.closed_neighbors(u)))
                .collect();
            for k in colors(n.saturating_sub(2)) {
                for j in 1..=k {
                    cliques.iter().for_each(|q| keep(clique_neighborhood_cut(g, u, j, k, q)));
                }
            }
        }),
        "symmetry" => g.vertices().for_each(|v| (2..=v).for_each(|j| keep(symmetry_cut(v, j, n)))),
        other => return Err(Error::Parameter(alloc::format!("unknown cut family {other:?}"))),
    }
    Ok(out)
}

/// True iff every eqcol of `g` satisfies `row`.
pub fn check_validity(g: &Graph, row: &CutRow, oracle: &Oracle) -> Result<bool> {
    check_row_vars(g.n(), row)?;
    Ok(EqcolCatalog::build(g, oracle)?.is_valid(row))
}

pub(crate) fn check_row_vars(n: usize, row: &CutRow) -> Result<()> {
    let len = Vars::new(n).len();
    match row.max_var() {
        Some(VarId(id)) if id >= len => Err(Error::Parameter(alloc::format!("variable {id} outside 0..{len}"))),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn set(vs: &[Vertex]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn wheel6() -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..=5).map(|v| (v, v % 5 + 1)).collect();
        edges.extend((1..=5).map(|v| (v, 6)));
        Graph::from_edges(6, edges).unwrap()
    }

    fn oracle() -> Oracle {
        Oracle::default()
    }

    #[test]
    fn instance_counts_on_c5() {
        let g = Graph::cycle(5);
        // Five edges, colors 1..=4.
        assert_eq!(instances(&g, "clique").unwrap().len(), 20);
        assert_eq!(instances(&g, "block").unwrap().len(), 15);
        assert_eq!(instances(&g, "symmetry").unwrap().len(), 10);
        assert_eq!(instances(&g, "s-color").unwrap().len(), 31);
        assert!(instances(&g, "nope").is_err());
        assert!(instances(&Graph::empty(INSTANCE_CAP + 1), "block").is_err());
        let catalog = EqcolCatalog::build(&g, &oracle()).unwrap();
        for kind in CUT_KINDS.iter().filter(|&&k| k != "symmetry") {
            assert!(instances(&g, kind).unwrap().iter().all(|r| catalog.is_valid(r)), "{kind}");
        }
    }

    #[test]
    fn clique_examples() {
        let g = Graph::cycle(5);
        let row = clique_cut(&g, &set(&[1, 2]), 1).unwrap();
        assert_eq!(row.display(Vars::new(5)).to_string(), "+1 x1_1 +1 x2_1 -1 w1 <= 0");
        assert!(clique_cut(&g, &set(&[1, 3]), 1).is_err());
        assert!(clique_cut(&g, &set(&[1, 2]), 5).is_err());
        let catalog = EqcolCatalog::build(&g, &oracle()).unwrap();
        for (u, v) in g.edges() {
            for j in 1..5 {
                assert!(catalog.is_valid(&clique_cut(&g, &set(&[u, v]), j).unwrap()));
            }
        }
    }

    #[test]
    fn block_examples() {
        let row = block_cut(1, 3, 5).unwrap();
        assert_eq!(row.display(Vars::new(5)).to_string(), "+1 x1_3 +1 x1_4 +1 x1_5 -1 w3 <= 0");
        assert!(block_cut(1, 4, 5).is_err());
        let g = Graph::cycle(5);
        let catalog = EqcolCatalog::build(&g, &oracle()).unwrap();
        for v in 1..=5 {
            for j in 1..=3 {
                assert!(catalog.is_valid(&block_cut(v, j, 5).unwrap()));
            }
        }
    }

    #[test]
    fn two_rank_examples() {
        let c5 = Graph::cycle(5);
        let row = two_rank_cut(&c5, &c5.vertex_set(), 1).unwrap();
        assert!(matches!(&row.family, Family::TwoRank { q, .. } if q.is_empty()));
        assert_eq!(row.display(Vars::new(5)).to_string(), "+1 x1_1 +1 x2_1 +1 x3_1 +1 x4_1 +1 x5_1 -2 w1 <= 0");

        let w6 = wheel6();
        let row = two_rank_cut(&w6, &w6.vertex_set(), 1).unwrap();
        assert!(matches!(&row.family, Family::TwoRank { q, .. } if *q == set(&[6])));
        assert_eq!(row.coefficient(Vars::new(6).x(6, 1)), 2);
        assert_eq!(row.coefficient(Vars::new(6).x(3, 1)), 1);

        assert!(two_rank_cut(&Graph::empty(5), &set(&[1, 2, 3]), 1).is_err());
        assert!(EqcolCatalog::build(&w6, &oracle()).unwrap().is_valid(&row));
    }

    #[test]
    fn two_rank_variants() {
        let c5 = Graph::cycle(5);
        let vars = Vars::new(5);
        let row = two_rank_empty_variant(&c5, &c5.vertex_set(), 1).unwrap();
        // At the all-singletons coloring the row is tight: 1 + 1 = 2 + 1 - 1.
        let singles = crate::oracle::EquitableColoring::new(&c5, vec![1, 2, 3, 4, 5]).unwrap();
        assert_eq!(row.lhs_at_coloring(vars, &singles), 0);
        assert!(row.tight_at(vars, &singles));
        assert!(EqcolCatalog::build(&c5, &oracle()).unwrap().is_valid(&row));

        let w6 = wheel6();
        let row = two_rank_singleton_variant(&w6, &w6.vertex_set(), 6, 1).unwrap();
        assert_eq!(
            row.display(Vars::new(6)).to_string(),
            "+1 x1_1 +1 x2_1 +1 x3_1 +1 x4_1 +1 x5_1 +2 x6_1 +1 x6_6 -2 w1 <= 0"
        );
        assert!(EqcolCatalog::build(&w6, &oracle()).unwrap().is_valid(&row));
        assert!(two_rank_singleton_variant(&w6, &w6.vertex_set(), 5, 1).is_err());
        assert!(two_rank_empty_variant(&w6, &w6.vertex_set(), 1).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(10, 3, 2), 2);
        assert_eq!(gamma(10, 2, 7), 5);
        assert_eq!(gamma(9, 9, 4), 1);
    }

    #[test]
    fn subneighborhood_star() {
        let star = Graph::complete_bipartite(1, 4);
        let leaves = set(&[2, 3, 4, 5]);
        let row = subneighborhood_cut(&star, 1, 1, &leaves).unwrap();
        let vars = Vars::new(5);
        assert_eq!(row.coefficient(vars.x(1, 1)), 4);
        assert_eq!(row.coefficient(vars.w(1)), -4);
        assert_eq!(row.coefficient(vars.x(1, 2)), 1);
        assert_eq!(row.coefficient(vars.x(1, 3)), 2);
        assert_eq!(row.coefficient(vars.x(1, 4)), 2);
        assert_eq!(row.coefficient(vars.x(1, 5)), 3);
        for v in 2..=5 {
            assert_eq!(row.coefficient(vars.x(v, 1)), 1);
        }
        assert!(subneighborhood_cut(&star, 2, 1, &leaves).is_err());
        assert!(EqcolCatalog::build(&star, &oracle()).unwrap().is_valid(&row));
    }

    #[test]
    fn s_color_capacities() {
        assert_eq!(s_color_capacity(7, &[1, 2], 3), 5);
        assert_eq!(s_color_capacity(7, &[1], 1), 7);
        assert!(s_color_cut(&[], 5).is_err());
        assert!(s_color_cut(&[6], 5).is_err());
    }

    #[test]
    fn outside_neighborhood_coefficients() {
        // b_jk = ⌊10/2⌋ - ⌊10/5⌋ = 3.
        let star = Graph::from_edges(10, (2..=8).map(|v| (1, v))).unwrap();
        let row = outside_neighborhood_cut(&star, 1, 2).unwrap();
        let vars = Vars::new(10);
        assert_eq!(row.coefficient(vars.x(1, 5)), 3);
        assert_eq!(row.coefficient(vars.x(1, 3)), 2);
        assert_eq!(row.coefficient(vars.x(1, 2)), 4);
        assert_eq!(row.coefficient(vars.x(9, 2)), -1);
        assert_eq!(row.coefficient(vars.w(2)), 0);
        assert!(outside_neighborhood_cut(&Graph::complete(6), 1, 1).is_err());
    }

    #[test]
    fn clique_neighborhood_segments() {
        // n = 10, u with α(N(u)) = 2, l = 3: b_ul = min(4, 3) = 3.
        let mut edges = vec![(1, 2), (1, 3), (1, 4), (2, 3)];
        edges.push((5, 6));
        let g = Graph::from_edges(10, edges).unwrap();
        assert_eq!(g.stability_number(g.neighbors(1)), 2);
        let row = clique_neighborhood_cut(&g, 1, 2, 4, &set(&[5, 6])).unwrap();
        let vars = Vars::new(10);
        // RHS coefficient on w3 is b_u3 - b_u2 = 3 - 3 = 0; on w4 is ⌈10/4⌉ - b_u3 = 0.
        assert_eq!(row.coefficient(vars.w(2)), -3);
        assert_eq!(row.coefficient(vars.w(3)), 0);
        assert_eq!(row.coefficient(vars.w(9)), -1);
        // j = k: no b_ul segment.
        let same = clique_neighborhood_cut(&g, 1, 4, 4, &set(&[5])).unwrap();
        assert_eq!(same.coefficient(vars.w(4)), -3);
        assert!(clique_neighborhood_cut(&g, 1, 2, 4, &set(&[2])).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let vars = Vars::new(4);
        assert_eq!(symmetry_cut(2, 2, 4).unwrap().display(vars).to_string(), "-1 x1_1 +1 x2_2 <= 0");
        assert_eq!(symmetry_cut(3, 2, 4).unwrap().display(vars).to_string(), "-1 x1_1 -1 x2_1 +1 x3_2 <= 0");
        assert!(symmetry_cut(1, 2, 4).is_err());
    }

    #[test]
    fn validity_rejects_bad_rows() {
        let g = Graph::cycle(5);
        let vars = Vars::new(5);
        let bad = CutRow::new((1..=5).map(|v| (vars.x(v, 1), 1)), Sense::Le, 0, Family::Custom { name: "bad".into() });
        assert!(!check_validity(&g, &bad, &oracle()).unwrap());
        let out_of_range = CutRow::new([(VarId(99), 1)], Sense::Le, 0, Family::Custom { name: "x".into() });
        assert!(check_validity(&g, &out_of_range, &oracle()).is_err());
    }

    #[test]
    fn family_tags_regenerate_rows() {
        let w6 = wheel6();
        let rows = [
            clique_cut(&w6, &set(&[1, 2, 6]), 2).unwrap(),
            block_cut(3, 2, 6).unwrap(),
            two_rank_cut(&w6, &w6.vertex_set(), 1).unwrap(),
            two_rank_singleton_variant(&w6, &w6.vertex_set(), 6, 3).unwrap(),
            s_color_cut(&[2, 5, 6], 6).unwrap(),
            symmetry_cut(4, 3, 6).unwrap(),
        ];
        for row in rows {
            assert_eq!(regenerate(&w6, &row.family).unwrap(), row);
        }
    }
}
