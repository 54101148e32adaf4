//! Linear relaxations of the coloring model.
//!
//! [`solve`] and [`resolve_with_rows`] run the floating-point dual simplex
//! in [`dual`]; [`exact`] is an independent rational primal simplex used as
//! a reference.

pub mod dual;
pub mod exact;

use eqcol_core::formulation::Model;
use eqcol_core::{CutRow, Sense};

pub use dual::DualSimplex;

/// Position of a variable relative to the basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarStatus {
    Basic(usize),
    AtLower,
    AtUpper,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
    /// The dual bound passed the cutoff before optimality.
    Cutoff,
}

#[derive(Clone, Copy, Debug)]
pub struct LpOptions {
    pub max_pivots: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub feasibility_tol: f64,
    /// Stop with [`LpStatus::Cutoff`] once the objective exceeds this.
    pub cutoff: f64,
    /// Relative size of the cost perturbation; zero disables it.
    pub perturbation: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self { max_pivots: 50_000, bland_after: 1_000, feasibility_tol: 1e-7, cutoff: f64::INFINITY, perturbation: 0.0 }
    }
}

/// Minimize `objective · x` over `lower <= x <= upper` and the rows.
#[derive(Clone, Debug)]
pub struct LpInstance {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub objective: Vec<f64>,
    pub rows: Vec<CutRow>,
}

impl LpInstance {
    /// The relaxation of `model`: every variable in `[0,1]`, fixings in
    /// `[0,0]`.
    pub fn from_model(model: &Model) -> Self {
        let len = model.num_vars();
        let mut upper = vec![1.0; len];
        for v in &model.fixings {
            upper[v.0] = 0.0;
        }
        let mut objective = vec![0.0; len];
        for &(v, c) in &model.objective {
            objective[v.0] = c as f64;
        }
        Self { lower: vec![0.0; len], upper, objective, rows: model.rows.clone() }
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, row: CutRow) {
        self.rows.push(row);
    }

    fn check(&self) {
        let n = self.num_cols();
        assert!(self.lower.len() == n && self.upper.len() == n, "bound vectors must match the objective");
        for r in &self.rows {
            if let Some(v) = r.max_var() {
                assert!(v.0 < n, "row references column {} of {n}", v.0);
            }
        }
    }
}

/// Bounds `[lo, hi]` on the row activity.
pub fn row_range(row: &CutRow) -> (f64, f64) {
    let rhs = row.rhs as f64;
    match row.sense {
        Sense::Le => (f64::NEG_INFINITY, rhs),
        Sense::Ge => (rhs, f64::INFINITY),
        Sense::Eq => (rhs, rhs),
    }
}

pub fn float_terms(row: &CutRow) -> Vec<(usize, f64)> {
    row.terms.iter().map(|&(v, c)| (v.0, c as f64)).collect()
}

/// Optimal basis, one status per column and then per row.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    pub statuses: Vec<VarStatus>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// One per row; `y = c_B B^{-1}`, so `≤` rows carry nonpositive duals.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub pivots: usize,
    pub basis: Option<Basis>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

fn build(inst: &LpInstance, opts: LpOptions) -> DualSimplex {
    inst.check();
    let mut lp = DualSimplex::new(inst.objective.clone(), inst.lower.clone(), inst.upper.clone(), opts);
    for r in &inst.rows {
        let (lo, hi) = row_range(r);
        lp.add_row(&float_terms(r), lo, hi);
    }
    lp
}

fn extract(lp: &DualSimplex, status: LpStatus) -> LpSolution {
    let basis = (status == LpStatus::Optimal).then(|| Basis { statuses: lp.statuses().to_vec() });
    LpSolution {
        status,
        values: lp.values().to_vec(),
        objective_value: lp.objective(),
        duals: lp.duals(),
        reduced_costs: lp.reduced_costs(),
        pivots: lp.pivots(),
        basis,
    }
}

pub fn solve(inst: &LpInstance) -> LpSolution {
    solve_with(inst, LpOptions::default())
}

pub fn solve_with(inst: &LpInstance, opts: LpOptions) -> LpSolution {
    let mut lp = build(inst, opts);
    let status = lp.solve();
    extract(&lp, status)
}

/// Appends `new_rows` to `inst` and re-solves from the basis of `warm`
/// when it still fits; otherwise from scratch.
pub fn resolve_with_rows(inst: &mut LpInstance, new_rows: &[CutRow], warm: &LpSolution) -> LpSolution {
    let old_rows = inst.rows.len();
    inst.rows.extend(new_rows.iter().cloned());
    let mut lp = build(inst, LpOptions::default());
    if let Some(basis) = &warm.basis {
        let ncols = inst.num_cols();
        if basis.statuses.len() == ncols + old_rows {
            let mut statuses = basis.statuses.clone();
            statuses.extend((0..new_rows.len()).map(|k| VarStatus::Basic(old_rows + k)));
            lp.install_basis(&statuses);
        }
    }
    let status = lp.solve();
    extract(&lp, status)
}
