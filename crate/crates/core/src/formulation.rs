//! The 0/1 model whose integer points are the equitable colorings.
//!
//! Rows, in order: one assignment equation per vertex, one conflict row per
//! (edge, color), the color-order chain `w[j+1] <= w[j]`, the isolated-vertex
//! rows `x[v][j] <= w[j]`, and two equity rows per color `j < n`. The dummy
//! `w[n+1]` is the constant zero. With strengthening enabled, `x[v][j]` is
//! fixed to zero whenever `v < j`.

use alloc::vec::Vec;

use crate::graph::Graph;
use crate::row::{CutRow, Family, Sense, VarId, Vars};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Model {
    n: usize,
    pub rows: Vec<CutRow>,
    /// Variables fixed to zero.
    pub fixings: Vec<VarId>,
    /// Minimization objective; `Σ_j w[j]`.
    pub objective: Vec<(VarId, i64)>,
    pub strengthened: bool,
}

impl Model {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> Vars {
        Vars::new(self.n)
    }

    pub fn num_vars(&self) -> usize {
        self.vars().len()
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.rows.iter().filter(|r| r.family.kind() == kind).count()
    }

    /// True iff `point` is 0/1, respects the fixings and satisfies every row.
    pub fn is_feasible_point(&self, point: &[u8]) -> Result<bool> {
        if point.len() != self.num_vars() {
            return Err(Error::LengthMismatch { expected: self.num_vars(), found: point.len() });
        }
        Ok(point.iter().all(|&b| b <= 1)
            && self.fixings.iter().all(|v| point[v.0] == 0)
            && self.rows.iter().all(|r| r.sense.holds(r.lhs_at_vector(point), r.rhs)))
    }

    pub fn objective_at(&self, point: &[u8]) -> i64 {
        self.objective.iter().map(|&(v, c)| c * i64::from(point[v.0])).sum()
    }
}

/// Coefficients of `Σ_{k=j}^{n} c_k (w[k] - w[k+1])` on `w[j..=n]`, with
/// `w[n+1] = 0`: `c_j` on `w[j]` and `c_k - c_{k-1}` on `w[k]` for `k > j`.
pub fn telescoped(vars: Vars, j: usize, c: impl Fn(usize) -> i64) -> Vec<(VarId, i64)> {
    (j..=vars.n)
        .map(|k| {
            let prev = if k == j { 0 } else { c(k - 1) };
            (vars.w(k), c(k) - prev)
        })
        .collect()
}

pub fn build_model(g: &Graph, strengthen: bool) -> Model {
    let n = g.n();
    let vars = Vars::new(n);
    let mut rows = Vec::new();

    for v in g.vertices() {
        rows.push(CutRow::new((1..=n).map(|j| (vars.x(v, j), 1)), Sense::Eq, 1, Family::Assignment { v }));
    }
    for (u, v) in g.edges() {
        for j in 1..=n {
            rows.push(CutRow::new(
                [(vars.x(u, j), 1), (vars.x(v, j), 1), (vars.w(j), -1)],
                Sense::Le,
                0,
                Family::Conflict { u, v, j },
            ));
        }
    }
    for j in 1..n {
        rows.push(CutRow::new([(vars.w(j + 1), 1), (vars.w(j), -1)], Sense::Le, 0, Family::ColorOrder { j }));
    }
    for v in g.vertices().filter(|&v| g.is_isolated(v)) {
        for j in 1..=n {
            rows.push(CutRow::new([(vars.x(v, j), 1), (vars.w(j), -1)], Sense::Le, 0, Family::Isolated { v, j }));
        }
    }
    for j in 1..n {
        let class = (1..=n).map(|v| (vars.x(v, j), 1));
        let floor = telescoped(vars, j, |k| (n / k) as i64);
        let ceil = telescoped(vars, j, |k| n.div_ceil(k) as i64);
        rows.push(CutRow::new(
            class.clone().chain(floor.into_iter().map(|(v, c)| (v, -c))),
            Sense::Ge,
            0,
            Family::EquityLower { j },
        ));
        rows.push(CutRow::new(
            class.chain(ceil.into_iter().map(|(v, c)| (v, -c))),
            Sense::Le,
            0,
            Family::EquityUpper { j },
        ));
    }

    let fixings = if strengthen {
        (1..=n).flat_map(|v| (v + 1..=n).map(move |j| vars.x(v, j))).collect()
    } else {
        Vec::new()
    };
    let objective = (1..=n).map(|j| (vars.w(j), 1)).collect();
    Model { n, rows, fixings, objective, strengthened: strengthen }
}
