//! Bounded dual simplex over row activities.
//!
//! Rows are written as `A x - s = 0` with the activity `s` boxed in
//! `[lo, hi]`; variable `ncols + i` is the activity of row `i`. A basis
//! pairs `t` basic structurals with the `t` tight rows (activity nonbasic),
//! and every other activity is basic. With `M = A[tight, basic]` the basis
//! inverse is `[[M^{-1}, 0], [R M^{-1}, -I]]`, so only the dense `t × t`
//! matrix `M^{-1}` is stored. Loose rows cost nothing beyond their
//! activity, which keeps lazily added and idle rows cheap.
//!
//! Every structural column carries finite bounds, so the all-activity
//! basis with each column parked at the bound favoured by its cost is dual
//! feasible.

use super::{LpOptions, LpStatus, VarStatus};

const PIVOT_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 100;
const LOOSE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct DualSimplex {
    ncols: usize,
    cols: Vec<Vec<(usize, f64)>>,
    rows: Vec<Vec<(usize, f64)>>,
    /// Bounds of structurals, then of row activities. An infinite declared
    /// row bound is replaced by the activity's range over `outer`.
    lb: Vec<f64>,
    ub: Vec<f64>,
    /// Row bounds as declared.
    declared: Vec<(f64, f64)>,
    /// Widest column bounds seen so far.
    outer: Vec<(f64, f64)>,
    cost: Vec<f64>,
    /// Costs the simplex actually prices with: `cost` plus a small
    /// deterministic perturbation against dual degeneracy.
    priced: Vec<f64>,
    /// `cost` plus the perturbation.
    perturbed: Vec<f64>,
    /// Structurals: `Basic(c)` at column `c` of `M`. Activities: `Basic(_)`
    /// when loose.
    status: Vec<VarStatus>,
    basic_cols: Vec<usize>,
    tight_rows: Vec<usize>,
    /// Position of each row in `tight_rows`, or `LOOSE`.
    tight_pos: Vec<usize>,
    /// `minv[c][p]`: row `c` follows `basic_cols`, column `p` `tight_rows`.
    minv: Vec<Vec<f64>>,
    x: Vec<f64>,
    d: Vec<f64>,
    /// Dual steepest-edge weights `‖e_v B^{-1}‖²` of basic variables.
    weights: Vec<f64>,
    stale_primal: bool,
    since_refactor: usize,
    pivots: usize,
    opts: LpOptions,
}

impl DualSimplex {
    pub fn new(cost: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>, opts: LpOptions) -> Self {
        let ncols = cost.len();
        assert_eq!(lower.len(), ncols);
        assert_eq!(upper.len(), ncols);
        let perturbed: Vec<f64> = cost
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let spread = (j.wrapping_mul(2_654_435_761) % 1000) as f64 / 1000.0;
                c + opts.perturbation * (1.0 + c.abs()) * (1.0 + spread)
            })
            .collect();
        let mut lp = Self {
            priced: perturbed.clone(),
            perturbed,
            ncols,
            cols: vec![Vec::new(); ncols],
            rows: Vec::new(),
            outer: lower.iter().copied().zip(upper.iter().copied()).collect(),
            declared: Vec::new(),
            lb: lower,
            ub: upper,
            d: cost.clone(),
            cost,
            status: vec![VarStatus::AtLower; ncols],
            basic_cols: Vec::new(),
            tight_rows: Vec::new(),
            tight_pos: Vec::new(),
            minv: Vec::new(),
            x: vec![0.0; ncols],
            weights: vec![1.0; ncols],
            stale_primal: true,
            since_refactor: 0,
            pivots: 0,
            opts,
        };
        lp.slack_basis();
        lp
    }

    pub fn num_cols(&self) -> usize {
        self.ncols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Sets the objective cutoff; see [`LpOptions::cutoff`].
    pub fn set_cutoff(&mut self, cutoff: f64) {
        self.opts.cutoff = cutoff;
    }

    /// Total pivots performed over the lifetime of this solver.
    pub fn pivots(&self) -> usize {
        self.pivots
    }

    fn slack(&self, i: usize) -> usize {
        self.ncols + i
    }

    fn is_basic(&self, v: usize) -> bool {
        matches!(self.status[v], VarStatus::Basic(_))
    }

    /// Appends `lo <= Σ coeffs <= hi` as a loose row.
    pub fn add_row(&mut self, coeffs: &[(usize, f64)], lo: f64, hi: f64) -> usize {
        let i = self.rows.len();
        let mut row: Vec<(usize, f64)> = coeffs.iter().copied().filter(|&(_, a)| a != 0.0).collect();
        row.sort_unstable_by_key(|&(j, _)| j);
        for &(j, a) in &row {
            self.cols[j].push((i, a));
        }
        let activity = row.iter().map(|&(j, a)| a * self.x[j]).sum();
        self.rows.push(row);
        self.declared.push((lo, hi));
        self.lb.push(lo);
        self.ub.push(hi);
        self.close_row_bounds(i);
        self.d.push(0.0);
        self.x.push(activity);
        self.status.push(VarStatus::Basic(i));
        self.tight_pos.push(LOOSE);
        let w = self.exact_weight(self.ncols + i);
        self.weights.push(w);
        i
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Bounds of row `i` as declared.
    pub fn row_bounds(&self, i: usize) -> (f64, f64) {
        self.declared[i]
    }

    /// Replaces infinite declared bounds of row `i` by its implied range.
    fn close_row_bounds(&mut self, i: usize) {
        let (mut lo, mut hi) = (0.0, 0.0);
        for &(j, a) in &self.rows[i] {
            let (l, u) = self.outer[j];
            let (p, q) = if a > 0.0 { (a * l, a * u) } else { (a * u, a * l) };
            lo += p;
            hi += q;
        }
        let (dlo, dhi) = self.declared[i];
        let s = self.slack(i);
        self.lb[s] = if dlo.is_finite() || !lo.is_finite() { dlo } else { lo.min(dhi) };
        self.ub[s] = if dhi.is_finite() || !hi.is_finite() { dhi } else { hi.max(dlo) };
    }

    /// True when the activity of row `i` is basic (the row is loose).
    pub fn row_is_basic(&self, i: usize) -> bool {
        self.is_basic(self.slack(i))
    }

    /// Deletes the listed loose rows; tight rows are kept. Returns the rows
    /// actually removed, ascending, in the old numbering.
    pub fn remove_rows(&mut self, which: &[usize]) -> Vec<usize> {
        let mut gone: Vec<usize> = which.iter().copied().filter(|&i| self.row_is_basic(i)).collect();
        gone.sort_unstable();
        gone.dedup();
        if gone.is_empty() {
            return gone;
        }
        let m = self.rows.len();
        let mut drop_row = vec![false; m];
        for &i in &gone {
            drop_row[i] = true;
        }
        let mut renum = vec![usize::MAX; m];
        let mut next = 0;
        for i in 0..m {
            if !drop_row[i] {
                renum[i] = next;
                next += 1;
            }
        }
        let nc = self.ncols;
        let keep_var = |v: usize| v < nc || !drop_row[v - nc];
        macro_rules! retain_vars {
            ($vec:expr) => {{
                let old = std::mem::take(&mut $vec);
                $vec = old.into_iter().enumerate().filter(|&(v, _)| keep_var(v)).map(|(_, x)| x).collect();
            }};
        }
        retain_vars!(self.lb);
        retain_vars!(self.ub);
        retain_vars!(self.status);
        retain_vars!(self.x);
        retain_vars!(self.d);
        retain_vars!(self.weights);
        let old_declared = std::mem::take(&mut self.declared);
        self.declared = old_declared.into_iter().enumerate().filter(|&(i, _)| !drop_row[i]).map(|(_, b)| b).collect();
        let old_rows = std::mem::take(&mut self.rows);
        self.rows = old_rows.into_iter().enumerate().filter(|&(i, _)| !drop_row[i]).map(|(_, r)| r).collect();
        let old_pos = std::mem::take(&mut self.tight_pos);
        self.tight_pos = old_pos.into_iter().enumerate().filter(|&(i, _)| !drop_row[i]).map(|(_, p)| p).collect();
        for r in &mut self.tight_rows {
            *r = renum[*r];
        }
        for col in &mut self.cols {
            col.retain(|&(i, _)| !drop_row[i]);
            for e in col.iter_mut() {
                e.0 = renum[e.0];
            }
        }
        for i in 0..self.rows.len() {
            if self.row_is_basic(i) {
                self.status[nc + i] = VarStatus::Basic(i);
            }
        }
        gone
    }

    pub fn col_bounds(&self, j: usize) -> (f64, f64) {
        (self.lb[j], self.ub[j])
    }

    /// Changes the bounds of structural column `j`.
    pub fn set_col_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        assert!(j < self.ncols);
        if self.lb[j] == lo && self.ub[j] == hi {
            return;
        }
        self.lb[j] = lo;
        self.ub[j] = hi;
        let (ol, ou) = self.outer[j];
        if lo < ol || hi > ou {
            self.outer[j] = (ol.min(lo), ou.max(hi));
            let rows: Vec<usize> = self.cols[j].iter().map(|&(i, _)| i).collect();
            for i in rows {
                self.close_row_bounds(i);
            }
            self.stale_primal = true;
        }
        if !self.is_basic(j) {
            self.status[j] = if lo == hi || self.d[j] >= 0.0 { VarStatus::AtLower } else { VarStatus::AtUpper };
            self.stale_primal = true;
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.x[..self.ncols]
    }

    pub fn row_activity(&self, i: usize) -> f64 {
        self.x[self.slack(i)]
    }

    pub fn objective(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    /// Lagrangian bound `min_x (c - yA) x + min_s y s` over the boxes, with
    /// the current duals `y` clipped to the signs the row bounds allow.
    /// Valid for any basis, and within the perturbation of the optimum at
    /// an optimal one.
    pub fn dual_bound(&self) -> f64 {
        let nc = self.ncols;
        let mut y = vec![0.0; self.rows.len()];
        let mut bound = 0.0;
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.lb[nc + i], self.ub[nc + i]);
            let mut v = self.d[nc + i];
            if lo == f64::NEG_INFINITY {
                v = v.min(0.0);
            }
            if hi == f64::INFINITY {
                v = v.max(0.0);
            }
            *yi = v;
            if v > 0.0 {
                bound += v * lo;
            } else if v < 0.0 {
                bound += v * hi;
            }
        }
        for j in 0..nc {
            let dj = self.cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>();
            bound += (dj * self.lb[j]).min(dj * self.ub[j]);
        }
        bound
    }

    /// Row duals `y = c_B B^{-1}`; zero on loose rows. A row resting on a
    /// bound that only closure gave it reports zero; its multiplier moves
    /// into the reduced costs of its columns, which all sit at the bound
    /// attaining that activity.
    pub fn duals(&self) -> Vec<f64> {
        (0..self.rows.len())
            .map(|i| {
                let y = self.d[self.slack(i)];
                let (lo, hi) = self.declared[i];
                if (y > 0.0 && lo == f64::NEG_INFINITY) || (y < 0.0 && hi == f64::INFINITY) {
                    0.0
                } else {
                    y
                }
            })
            .collect()
    }

    /// Reduced costs consistent with [`duals`](Self::duals).
    pub fn reduced_costs(&self) -> Vec<f64> {
        let mut d = self.d[..self.ncols].to_vec();
        for (i, y) in self.duals().into_iter().enumerate() {
            let shift = self.d[self.slack(i)] - y;
            if shift != 0.0 {
                for &(j, a) in &self.rows[i] {
                    d[j] += shift * a;
                }
            }
        }
        d
    }

    /// One status per structural, then per row activity.
    pub fn statuses(&self) -> &[VarStatus] {
        &self.status
    }

    /// Installs a basis given as one status per variable (columns, then
    /// rows). Returns false and keeps a slack basis when the statuses do
    /// not describe a usable dual feasible basis.
    pub fn install_basis(&mut self, statuses: &[VarStatus]) -> bool {
        let m = self.rows.len();
        let total = self.ncols + m;
        if statuses.len() != total || statuses.iter().filter(|s| matches!(s, VarStatus::Basic(_))).count() != m {
            self.slack_basis();
            return false;
        }
        self.basic_cols.clear();
        self.tight_rows.clear();
        for (v, &s) in statuses.iter().enumerate() {
            match s {
                VarStatus::Basic(_) if v < self.ncols => {
                    self.status[v] = VarStatus::Basic(self.basic_cols.len());
                    self.basic_cols.push(v);
                }
                VarStatus::Basic(_) => {
                    self.status[v] = VarStatus::Basic(v - self.ncols);
                    self.tight_pos[v - self.ncols] = LOOSE;
                }
                _ => {
                    self.status[v] = s;
                    if v >= self.ncols {
                        let i = v - self.ncols;
                        self.tight_pos[i] = self.tight_rows.len();
                        self.tight_rows.push(i);
                    }
                }
            }
        }
        let bounds_ok = (0..total).all(|v| match self.status[v] {
            VarStatus::Basic(_) => true,
            VarStatus::AtLower => self.lb[v].is_finite(),
            VarStatus::AtUpper => self.ub[v].is_finite(),
        });
        if !bounds_ok || !self.refactor() {
            self.slack_basis();
            return false;
        }
        let dual_ok = (0..total).all(|v| match self.status[v] {
            VarStatus::Basic(_) => true,
            _ if self.lb[v] == self.ub[v] => true,
            VarStatus::AtLower => self.d[v] >= -1e-7,
            VarStatus::AtUpper => self.d[v] <= 1e-7,
        });
        if !dual_ok {
            self.slack_basis();
            return false;
        }
        true
    }

    /// Switches pricing between true and perturbed costs, flipping boxed
    /// nonbasics whose reduced cost changes sign. Keeps the old costs and
    /// returns false when some other nonbasic would become dual infeasible.
    fn set_costs(&mut self, perturbed: bool) -> bool {
        let target = if perturbed { &self.perturbed } else { &self.cost };
        if *target == self.priced {
            return true;
        }
        let old = core::mem::replace(&mut self.priced, target.clone());
        self.recompute_duals();
        let mut flips = Vec::new();
        for v in 0..self.x.len() {
            let wrong = match self.status[v] {
                VarStatus::Basic(_) => false,
                _ if self.lb[v] == self.ub[v] => false,
                VarStatus::AtLower => self.d[v] < -DUAL_TOL,
                VarStatus::AtUpper => self.d[v] > DUAL_TOL,
            };
            if wrong {
                if !(self.lb[v].is_finite() && self.ub[v].is_finite()) {
                    self.priced = old;
                    self.recompute_duals();
                    return false;
                }
                flips.push(v);
            }
        }
        for v in flips {
            self.status[v] = match self.status[v] {
                VarStatus::AtLower => VarStatus::AtUpper,
                _ => VarStatus::AtLower,
            };
        }
        self.recompute_primal();
        true
    }

    /// Resets to the all-activity basis.
    pub fn slack_basis(&mut self) {
        for j in 0..self.ncols {
            self.status[j] = if self.lb[j] == self.ub[j] || self.priced[j] >= 0.0 {
                VarStatus::AtLower
            } else {
                VarStatus::AtUpper
            };
        }
        for i in 0..self.rows.len() {
            self.status[self.ncols + i] = VarStatus::Basic(i);
            self.tight_pos[i] = LOOSE;
        }
        self.basic_cols.clear();
        self.tight_rows.clear();
        self.minv.clear();
        self.weights.fill(1.0);
        self.since_refactor = 0;
        self.recompute_duals();
        self.recompute_primal();
    }

    fn nonbasic_value(&self, v: usize) -> f64 {
        match self.status[v] {
            VarStatus::AtLower => self.lb[v],
            VarStatus::AtUpper => self.ub[v],
            VarStatus::Basic(_) => self.x[v],
        }
    }

    fn recompute_primal(&mut self) {
        let nc = self.ncols;
        for j in 0..nc {
            if !self.is_basic(j) {
                self.x[j] = self.nonbasic_value(j);
            }
        }
        let b: Vec<f64> = self
            .tight_rows
            .iter()
            .map(|&i| {
                let rest: f64 = self.rows[i].iter().filter(|&&(j, _)| !self.is_basic(j)).map(|&(j, a)| a * self.x[j]).sum();
                self.nonbasic_value(nc + i) - rest
            })
            .collect();
        for (c, &j) in self.basic_cols.iter().enumerate() {
            self.x[j] = self.minv[c].iter().zip(&b).map(|(p, b)| p * b).sum();
        }
        for i in 0..self.rows.len() {
            self.x[nc + i] = if self.tight_pos[i] == LOOSE {
                self.rows[i].iter().map(|&(j, a)| a * self.x[j]).sum()
            } else {
                self.nonbasic_value(nc + i)
            };
        }
        self.stale_primal = false;
    }

    fn recompute_duals(&mut self) {
        let t = self.tight_rows.len();
        let mut y = vec![0.0; t];
        for (c, &j) in self.basic_cols.iter().enumerate() {
            let cj = self.priced[j];
            if cj != 0.0 {
                for (yp, p) in y.iter_mut().zip(&self.minv[c]) {
                    *yp += cj * p;
                }
            }
        }
        for j in 0..self.ncols {
            self.d[j] = if self.is_basic(j) {
                0.0
            } else {
                let tp = &self.tight_pos;
                self.priced[j]
                    - self.cols[j].iter().filter(|&&(i, _)| tp[i] != LOOSE).map(|&(i, a)| y[tp[i]] * a).sum::<f64>()
            };
        }
        for i in 0..self.rows.len() {
            let p = self.tight_pos[i];
            self.d[self.ncols + i] = if p == LOOSE { 0.0 } else { y[p] };
        }
    }

    /// Rebuilds `M^{-1}` by Gauss-Jordan elimination with partial pivoting.
    fn refactor(&mut self) -> bool {
        let t = self.basic_cols.len();
        if self.tight_rows.len() != t {
            return false;
        }
        let mut col_index = vec![usize::MAX; self.ncols];
        for (c, &j) in self.basic_cols.iter().enumerate() {
            col_index[j] = c;
        }
        // Work on M^T so that the result comes out as minv[c][p].
        let mut a = vec![vec![0.0; 2 * t]; t];
        for (p, &i) in self.tight_rows.iter().enumerate() {
            for &(j, v) in &self.rows[i] {
                if col_index[j] != usize::MAX {
                    a[col_index[j]][p] = v;
                }
            }
        }
        for (r, row) in a.iter_mut().enumerate() {
            row[t + r] = 1.0;
        }
        for c in 0..t {
            let piv = (c..t).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
            if a[piv][c].abs() < 1e-11 {
                return false;
            }
            a.swap(c, piv);
            let inv = 1.0 / a[c][c];
            for v in &mut a[c][c..] {
                *v *= inv;
            }
            let (head, tail) = a.split_at_mut(c);
            let (pivot_row, tail) = tail.split_first_mut().unwrap();
            for row in head.iter_mut().chain(tail.iter_mut()) {
                let f = row[c];
                if f != 0.0 {
                    for (x, &pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                        *x -= f * pv;
                    }
                }
            }
        }
        // a now holds (M^T)^{-1} = (M^{-1})^T in its right half.
        let mut minv = vec![vec![0.0; t]; t];
        for (p, row) in a.iter().enumerate() {
            for c in 0..t {
                minv[c][p] = row[t + c];
            }
        }
        self.minv = minv;
        for v in 0..self.x.len() {
            if self.is_basic(v) {
                self.weights[v] = self.exact_weight(v);
            }
        }
        self.since_refactor = 0;
        self.recompute_duals();
        self.recompute_primal();
        true
    }

    fn infeasibility(&self, v: usize) -> f64 {
        let x = self.x[v];
        if x < self.lb[v] {
            self.lb[v] - x
        } else if x > self.ub[v] {
            x - self.ub[v]
        } else {
            0.0
        }
    }

    /// `ρ` restricted to tight rows for a loose leaving row `i`: `a_i[basic] M^{-1}`.
    fn loose_row_rho(&self, i: usize) -> Vec<f64> {
        let mut rho = vec![0.0; self.tight_rows.len()];
        for &(j, a) in &self.rows[i] {
            if let VarStatus::Basic(c) = self.status[j] {
                for (r, p) in rho.iter_mut().zip(&self.minv[c]) {
                    *r += a * p;
                }
            }
        }
        rho
    }

    /// `‖e_v B^{-1}‖²` for a basic `v`.
    fn exact_weight(&self, v: usize) -> f64 {
        match self.status[v] {
            VarStatus::Basic(c) if v < self.ncols => self.minv[c].iter().map(|p| p * p).sum(),
            _ => 1.0 + self.loose_row_rho(v - self.ncols).iter().map(|r| r * r).sum::<f64>(),
        }
    }

    /// `B^{-1}` applied to a row-space vector given by its tight part `z`
    /// already multiplied through `M^{-1}` and its loose part `loose(i)`:
    /// returns the loose-row entries `a_i[basic] · z - loose(i)`.
    fn loose_entries(&self, z: &[f64], loose: impl Fn(usize) -> f64) -> Vec<(usize, f64)> {
        (0..self.rows.len())
            .filter(|&i| self.tight_pos[i] == LOOSE)
            .map(|i| {
                let s: f64 = self.rows[i]
                    .iter()
                    .filter_map(|&(j, a)| match self.status[j] {
                        VarStatus::Basic(c) => Some(a * z[c]),
                        _ => None,
                    })
                    .sum();
                (self.ncols + i, s - loose(i))
            })
            .collect()
    }

    /// Dual steepest-edge weights after `lv` leaves and `q` enters, as
    /// `(variable, weight)` pairs to apply once the exchange succeeds.
    fn updated_weights(&self, lv: usize, q: usize, rho: &[f64], leaving_row: Option<usize>) -> Vec<(usize, f64)> {
        let nc = self.ncols;
        let wq: Vec<f64> = if q < nc {
            self.ftran(q)
        } else {
            let pk = self.tight_pos[q - nc];
            self.minv.iter().map(|row| -row[pk]).collect()
        };
        let z: Vec<f64> = self.minv.iter().map(|row| row.iter().zip(rho).map(|(m, r)| m * r).sum()).collect();
        let aq = |i: usize| {
            if q < nc {
                self.rows[i].binary_search_by_key(&q, |&(j, _)| j).map_or(0.0, |k| self.rows[i][k].1)
            } else {
                0.0
            }
        };
        let u_loose = self.loose_entries(&wq, aq);
        let tau_loose = self.loose_entries(&z, |i| if Some(i) == leaving_row { -1.0 } else { 0.0 });
        let ur = match self.status[lv] {
            VarStatus::Basic(c) if lv < nc => wq[c],
            _ => u_loose.iter().find(|&&(v, _)| v == lv).map_or(0.0, |&(_, u)| u),
        };
        if ur.abs() < PIVOT_TOL {
            return Vec::new();
        }
        let br = self.weights[lv];
        let update = |v: usize, u: f64, tau: f64| {
            let ratio = u / ur;
            let w = self.weights[v] - 2.0 * ratio * tau + ratio * ratio * br;
            (v, if w.is_finite() { w.max(1e-12) } else { 1.0 })
        };
        let mut out: Vec<(usize, f64)> = self
            .basic_cols
            .iter()
            .enumerate()
            .filter(|&(c, &v)| v != lv && wq[c] != 0.0)
            .map(|(c, &v)| update(v, wq[c], z[c]))
            .collect();
        out.extend(
            u_loose
                .iter()
                .zip(&tau_loose)
                .filter(|&(&(v, u), _)| v != lv && u != 0.0)
                .map(|(&(v, u), &(_, tau))| update(v, u, tau)),
        );
        out.push((q, (br / (ur * ur)).max(1e-12)));
        out
    }

    /// Chooses the leaving variable by squared infeasibility over its
    /// steepest-edge weight.
    fn choose_leaving(&self, bland: bool) -> Option<usize> {
        let tol = self.opts.feasibility_tol;
        let mut leave: Option<usize> = None;
        let mut best = -1.0;
        let candidates = self
            .basic_cols
            .iter()
            .copied()
            .chain((0..self.rows.len()).filter(|&i| self.tight_pos[i] == LOOSE).map(|i| self.ncols + i));
        for v in candidates {
            let inf = self.infeasibility(v);
            if inf <= tol {
                continue;
            }
            if bland {
                if leave.is_none_or(|u| v < u) {
                    leave = Some(v);
                }
                continue;
            }
            let w = self.weights[v];
            let score = inf * inf / if w.is_finite() && w > 1e-12 { w } else { 1.0 };
            if score > best {
                best = score;
                leave = Some(v);
            }
        }
        leave
    }

    /// Runs dual simplex pivots until primal feasible, dual unbounded, or
    /// the pivot cap.
    pub fn solve(&mut self) -> LpStatus {
        if self.stale_primal {
            self.recompute_primal();
        }
        let nc = self.ncols;
        let mut degenerate = 0usize;
        let mut budget = self.opts.max_pivots;
        let mut retried = false;
        let mut cleaned = false;
        if self.opts.perturbation > 0.0 {
            self.set_costs(true);
        }
        loop {
            if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
                self.slack_basis();
            }
            let bland = degenerate >= self.opts.bland_after;
            let Some(lv) = self.choose_leaving(bland) else {
                if !retried && self.since_refactor > 0 {
                    // Confirm optimality on a fresh factorization.
                    retried = true;
                    if !self.refactor() {
                        self.slack_basis();
                    }
                    continue;
                }
                if !cleaned && self.priced != self.cost {
                    // Finish on the true costs.
                    cleaned = true;
                    if self.set_costs(false) {
                        degenerate = 0;
                        continue;
                    }
                }
                return LpStatus::Optimal;
            };
            retried = false;
            if self.opts.cutoff < f64::INFINITY && self.dual_bound() > self.opts.cutoff {
                return LpStatus::Cutoff;
            }
            if budget == 0 {
                return LpStatus::IterationLimit;
            }
            budget -= 1;
            let increase = self.x[lv] < self.lb[lv];
            // ρ over tight rows, plus -1 on the leaving row when it is loose.
            let (rho, leaving_row) = match self.status[lv] {
                VarStatus::Basic(c) if lv < nc => (self.minv[c].clone(), None),
                _ => (self.loose_row_rho(lv - nc), Some(lv - nc)),
            };
            let mut alpha = vec![0.0; nc];
            for (p, &r) in rho.iter().enumerate() {
                if r != 0.0 {
                    for &(j, a) in &self.rows[self.tight_rows[p]] {
                        alpha[j] += r * a;
                    }
                }
            }
            if let Some(i) = leaving_row {
                for &(j, a) in &self.rows[i] {
                    alpha[j] -= a;
                }
            }
            let alphas: Vec<(usize, f64)> = (0..nc)
                .filter(|&j| !self.is_basic(j) && alpha[j] != 0.0)
                .map(|j| (j, alpha[j]))
                .chain(self.tight_rows.iter().enumerate().filter(|&(p, _)| rho[p] != 0.0).map(|(p, &i)| (nc + i, -rho[p])))
                .collect();
            let cand: Vec<(usize, f64)> = alphas
                .iter()
                .copied()
                .filter(|&(v, a)| {
                    if self.lb[v] == self.ub[v] || a.abs() < PIVOT_TOL {
                        return false;
                    }
                    let s = if increase { a } else { -a };
                    match self.status[v] {
                        VarStatus::AtLower => s < 0.0,
                        VarStatus::AtUpper => s > 0.0,
                        VarStatus::Basic(_) => false,
                    }
                })
                .collect();
            if cand.is_empty() {
                if self.since_refactor > 0 && self.refactor() {
                    continue;
                }
                return LpStatus::Infeasible;
            }
            let q = if bland {
                let min = cand.iter().map(|&(v, a)| self.d[v].abs() / a.abs()).fold(f64::INFINITY, f64::min);
                cand.iter()
                    .filter(|&&(v, a)| self.d[v].abs() / a.abs() <= min + 1e-12)
                    .map(|&(v, _)| v)
                    .min()
                    .unwrap()
            } else {
                // Harris two-pass ratio test.
                let bound = cand
                    .iter()
                    .map(|&(v, a)| (self.d[v].abs() + DUAL_TOL) / a.abs())
                    .fold(f64::INFINITY, f64::min);
                let mut pick = cand[0].0;
                let mut big = 0.0;
                for &(v, a) in &cand {
                    if self.d[v].abs() / a.abs() <= bound && a.abs() > big {
                        big = a.abs();
                        pick = v;
                    }
                }
                pick
            };
            let alpha_q = cand.iter().find(|&&(v, _)| v == q).unwrap().1;
            let weights = self.updated_weights(lv, q, &rho, leaving_row);
            if !self.exchange(lv, q, alpha_q, &rho) {
                if !self.refactor() {
                    self.slack_basis();
                }
                continue;
            }
            for (v, w) in weights {
                self.weights[v] = w;
            }
            // Dual step.
            let theta = self.d[q] / alpha_q;
            if theta.abs() <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            if theta != 0.0 {
                for &(v, a) in &alphas {
                    self.d[v] -= theta * a;
                }
            }
            self.d[q] = 0.0;
            self.d[lv] = -theta;
            self.status[lv] = if increase { VarStatus::AtLower } else { VarStatus::AtUpper };
            debug_assert!(self.consistent());
            self.recompute_primal();
            self.pivots += 1;
            self.since_refactor += 1;
        }
    }

    fn consistent(&self) -> bool {
        let t = self.basic_cols.len();
        t == self.tight_rows.len()
            && self.minv.len() == t
            && self.minv.iter().all(|r| r.len() == t)
            && self.basic_cols.iter().enumerate().all(|(c, &j)| self.status[j] == VarStatus::Basic(c))
            && (0..self.ncols).filter(|&j| self.is_basic(j)).count() == t
            && self.tight_rows.iter().enumerate().all(|(p, &i)| self.tight_pos[i] == p && !self.row_is_basic(i))
            && (0..self.rows.len()).all(|i| (self.tight_pos[i] == LOOSE) == self.row_is_basic(i))
    }

    /// `M^{-1} a_q[tight]` for a structural `q`.
    fn ftran(&self, q: usize) -> Vec<f64> {
        let mut col = vec![0.0; self.tight_rows.len()];
        for &(i, a) in &self.cols[q] {
            let p = self.tight_pos[i];
            if p != LOOSE {
                col[p] = a;
            }
        }
        self.minv.iter().map(|row| row.iter().zip(&col).map(|(m, c)| m * c).sum()).collect()
    }

    /// Swaps `lv` out of and `q` into the basis, updating `M^{-1}`. Returns
    /// false when the column-side pivot disagrees with `alpha_q`.
    fn exchange(&mut self, lv: usize, q: usize, alpha_q: f64, rho: &[f64]) -> bool {
        let nc = self.ncols;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-7 * (1.0 + b.abs());
        match (self.status[lv], q < nc) {
            (VarStatus::Basic(r), true) if lv < nc => {
                // Column r of M becomes a_q.
                let w = self.ftran(q);
                if !close(w[r], alpha_q) {
                    return false;
                }
                let mut pr = std::mem::take(&mut self.minv[r]);
                let inv = 1.0 / w[r];
                for v in &mut pr {
                    *v *= inv;
                }
                for (c, row) in self.minv.iter_mut().enumerate() {
                    if c != r && w[c] != 0.0 {
                        for (x, &pv) in row.iter_mut().zip(&pr) {
                            *x -= w[c] * pv;
                        }
                    }
                }
                self.minv[r] = pr;
                self.basic_cols[r] = q;
                self.status[q] = VarStatus::Basic(r);
            }
            (VarStatus::Basic(r), false) if lv < nc => {
                // Row k turns loose: drop column r and tight row k from M.
                let k = q - nc;
                let pk = self.tight_pos[k];
                let piv = self.minv[r][pk];
                if !close(-piv, alpha_q) {
                    return false;
                }
                let pr = std::mem::take(&mut self.minv[r]);
                for (c, row) in self.minv.iter_mut().enumerate() {
                    if c != r && row[pk] != 0.0 {
                        let f = row[pk] / piv;
                        for (x, &pv) in row.iter_mut().zip(&pr) {
                            *x -= f * pv;
                        }
                    }
                }
                self.minv.swap_remove(r);
                self.basic_cols.swap_remove(r);
                if r < self.basic_cols.len() {
                    self.status[self.basic_cols[r]] = VarStatus::Basic(r);
                }
                for row in &mut self.minv {
                    row.swap_remove(pk);
                }
                self.tight_rows.swap_remove(pk);
                if pk < self.tight_rows.len() {
                    self.tight_pos[self.tight_rows[pk]] = pk;
                }
                self.tight_pos[k] = LOOSE;
                self.status[q] = VarStatus::Basic(k);
            }
            (_, true) => {
                // Loose row i turns tight and q joins: border M.
                let i = lv - nc;
                let w = self.ftran(q);
                let b_dot: f64 = self.cols[q]
                    .iter()
                    .filter(|&&(r, _)| self.tight_pos[r] != LOOSE)
                    .map(|&(r, a)| rho[self.tight_pos[r]] * a)
                    .sum();
                let delta = self.rows[i].binary_search_by_key(&q, |&(j, _)| j).map_or(0.0, |k| self.rows[i][k].1);
                let s = delta - b_dot;
                if !close(-s, alpha_q) || s.abs() < PIVOT_TOL {
                    return false;
                }
                for (c, row) in self.minv.iter_mut().enumerate() {
                    if w[c] != 0.0 {
                        let f = w[c] / s;
                        for (x, &r) in row.iter_mut().zip(rho) {
                            *x += f * r;
                        }
                    }
                    row.push(-w[c] / s);
                }
                let mut last: Vec<f64> = rho.iter().map(|r| -r / s).collect();
                last.push(1.0 / s);
                self.minv.push(last);
                self.status[q] = VarStatus::Basic(self.basic_cols.len());
                self.basic_cols.push(q);
                self.tight_pos[i] = self.tight_rows.len();
                self.tight_rows.push(i);
            }
            (_, false) => {
                // Loose row i replaces tight row k in M.
                let i = lv - nc;
                let k = q - nc;
                let pk = self.tight_pos[k];
                let piv = rho[pk];
                if !close(-piv, alpha_q) {
                    return false;
                }
                for row in &mut self.minv {
                    let f = row[pk] / piv;
                    if f != 0.0 {
                        for (p, x) in row.iter_mut().enumerate() {
                            if p != pk {
                                *x -= f * rho[p];
                            }
                        }
                        row[pk] = f;
                    }
                }
                self.tight_rows[pk] = i;
                self.tight_pos[i] = pk;
                self.tight_pos[k] = LOOSE;
                self.status[q] = VarStatus::Basic(k);
            }
        }
        true
    }
}
