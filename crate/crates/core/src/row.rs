//! Sparse linear rows over the `(x, w)` variables.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Vertex, VertexSet};
use crate::oracle::EquitableColoring;

/// Index of a variable in the `(x, w)` vector: `x[v][j]` sits at
/// `(v - 1) * n + (j - 1)` and `w[j]` at `n² + j - 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(pub usize);

/// A decoded variable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X { v: Vertex, j: usize },
    W { j: usize },
}

/// Variable layout for an `n`-vertex instance.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Vars {
    pub n: usize,
}

impl Vars {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    #[inline]
    pub fn x(&self, v: Vertex, j: usize) -> VarId {
        debug_assert!((1..=self.n).contains(&v) && (1..=self.n).contains(&j));
        VarId((v - 1) * self.n + (j - 1))
    }

    #[inline]
    pub fn w(&self, j: usize) -> VarId {
        debug_assert!((1..=self.n).contains(&j));
        VarId(self.n * self.n + j - 1)
    }

    pub fn len(&self) -> usize {
        self.n * self.n + self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn decode(&self, id: VarId) -> Var {
        let nn = self.n * self.n;
        if id.0 < nn {
            Var::X { v: id.0 / self.n + 1, j: id.0 % self.n + 1 }
        } else {
            Var::W { j: id.0 - nn + 1 }
        }
    }

    /// LP-text name: `x<v>_<j>` or `w<j>`.
    pub fn name(&self, id: VarId) -> VarName {
        VarName(self.decode(id))
    }
}

pub struct VarName(Var);

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Var::X { v, j } => write!(f, "x{v}_{j}"),
            Var::W { j } => write!(f, "w{j}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
            Sense::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

/// Origin of a row together with the parameters that regenerate it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    Assignment { v: Vertex },
    Conflict { u: Vertex, v: Vertex, j: usize },
    ColorOrder { j: usize },
    Isolated { v: Vertex, j: usize },
    EquityLower { j: usize },
    EquityUpper { j: usize },
    Clique { q: VertexSet, j: usize },
    Block { v: Vertex, j: usize },
    TwoRank { s: VertexSet, q: VertexSet, j: usize },
    TwoRankEmpty { s: VertexSet, j: usize },
    TwoRankSingleton { s: VertexSet, q: Vertex, j: usize },
    Subneighborhood { u: Vertex, j: usize, s: VertexSet },
    SColor { colors: Vec<usize> },
    OutsideNeighborhood { u: Vertex, j: usize },
    CliqueNeighborhood { u: Vertex, j: usize, k: usize, q: VertexSet },
    Symmetry { v: Vertex, j: usize },
    Custom { name: String },
}

impl Family {
    /// Short identifier used in logs, statistics and the one-line text form.
    pub fn kind(&self) -> &'static str {
        match self {
            Family::Assignment { .. } => "assignment",
            Family::Conflict { .. } => "conflict",
            Family::ColorOrder { .. } => "color-order",
            Family::Isolated { .. } => "isolated",
            Family::EquityLower { .. } => "equity-lower",
            Family::EquityUpper { .. } => "equity-upper",
            Family::Clique { .. } => "clique",
            Family::Block { .. } => "block",
            Family::TwoRank { .. } => "two-rank",
            Family::TwoRankEmpty { .. } => "two-rank-empty",
            Family::TwoRankSingleton { .. } => "two-rank-singleton",
            Family::Subneighborhood { .. } => "subneighborhood",
            Family::SColor { .. } => "s-color",
            Family::OutsideNeighborhood { .. } => "outside-neighborhood",
            Family::CliqueNeighborhood { .. } => "clique-neighborhood",
            Family::Symmetry { .. } => "symmetry",
            Family::Custom { .. } => "custom",
        }
    }

    /// True for rows of the base formulation (as opposed to cuts).
    pub fn is_model_row(&self) -> bool {
        matches!(
            self,
            Family::Assignment { .. }
                | Family::Conflict { .. }
                | Family::ColorOrder { .. }
                | Family::Isolated { .. }
                | Family::EquityLower { .. }
                | Family::EquityUpper { .. }
        )
    }
}

/// One linear inequality (or equation) with exact integer coefficients.
///
/// Terms are kept sorted by variable with no zero coefficients; `rhs` is a
/// constant (the dummy `w[n+1]` never appears as a variable).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CutRow {
    pub terms: Vec<(VarId, i64)>,
    pub sense: Sense,
    pub rhs: i64,
    pub family: Family,
}

impl CutRow {
    /// Builds a row, merging repeated variables and dropping zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (VarId, i64)>, sense: Sense, rhs: i64, family: Family) -> Self {
        let mut acc = BTreeMap::new();
        for (var, c) in terms {
            *acc.entry(var).or_insert(0i64) += c;
        }
        let terms = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        Self { terms, sense, rhs, family }
    }

    pub fn coefficient(&self, var: VarId) -> i64 {
        self.terms.binary_search_by_key(&var, |&(v, _)| v).map_or(0, |i| self.terms[i].1)
    }

    pub fn max_var(&self) -> Option<VarId> {
        self.terms.last().map(|&(v, _)| v)
    }

    /// Left-hand side at a 0/1 or fractional point indexed by [`VarId`].
    pub fn lhs_at(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c as f64 * point[v.0]).sum()
    }

    /// Amount by which `point` violates the row (positive when violated).
    pub fn violation(&self, point: &[f64]) -> f64 {
        let lhs = self.lhs_at(point);
        let rhs = self.rhs as f64;
        match self.sense {
            Sense::Le => lhs - rhs,
            Sense::Ge => rhs - lhs,
            Sense::Eq => (lhs - rhs).abs(),
        }
    }

    /// Left-hand side at the vector of an equitable coloring.
    pub fn lhs_at_coloring(&self, vars: Vars, c: &EquitableColoring) -> i64 {
        self.terms
            .iter()
            .map(|&(var, coef)| match vars.decode(var) {
                Var::X { v, j } => coef * i64::from(c.color_of(v) == j),
                Var::W { j } => coef * i64::from(j <= c.k()),
            })
            .sum()
    }

    pub fn satisfied_by(&self, vars: Vars, c: &EquitableColoring) -> bool {
        self.sense.holds(self.lhs_at_coloring(vars, c), self.rhs)
    }

    /// Satisfied with equality at the coloring.
    pub fn tight_at(&self, vars: Vars, c: &EquitableColoring) -> bool {
        self.lhs_at_coloring(vars, c) == self.rhs
    }

    pub fn lhs_at_vector(&self, v: &[u8]) -> i64 {
        self.terms.iter().map(|&(var, c)| c * i64::from(v[var.0])).sum()
    }

    /// Human-readable `+2 x1_1 -1 w1 <= 0`.
    pub fn display(&self, vars: Vars) -> RowDisplay<'_> {
        RowDisplay { row: self, vars }
    }
}

pub struct RowDisplay<'a> {
    row: &'a CutRow,
    vars: Vars,
}

impl fmt::Display for RowDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(var, c)) in self.row.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c:+} {}", self.vars.name(var))?;
        }
        if self.row.terms.is_empty() {
            f.write_str("0")?;
        }
        write!(f, " {} {}", self.row.sense.symbol(), self.row.rhs)
    }
}
