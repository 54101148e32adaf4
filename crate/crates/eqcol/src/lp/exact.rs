//! Exact rational LP: dense two-phase bounded primal simplex with Bland's rule.
//!
//! Slow and independent of the floating dual simplex; meant for small
//! instances and as a reference in tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LpInstance, LpSolution, LpStatus};
use eqcol_core::Sense;

type Q = BigRational;

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub status: LpStatus,
    pub values: Vec<Q>,
    pub objective: Q,
    pub duals: Vec<Q>,
    pub pivots: usize,
}

impl ExactSolution {
    pub fn to_float(&self) -> LpSolution {
        let f = |q: &Q| q.to_f64().unwrap_or(f64::NAN);
        LpSolution {
            status: self.status,
            values: self.values.iter().map(f).collect(),
            objective_value: f(&self.objective),
            duals: self.duals.iter().map(f).collect(),
            reduced_costs: Vec::new(),
            pivots: self.pivots,
            basis: None,
        }
    }
}

fn q_from_f64(v: f64) -> Option<Q> {
    if v.is_finite() {
        Q::from_float(v)
    } else {
        None
    }
}

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum At {
    Basic,
    Lower,
    Upper,
}

struct Tableau {
    t: Vec<Vec<Q>>,
    head: Vec<usize>,
    at: Vec<At>,
    lb: Vec<Option<Q>>,
    ub: Vec<Option<Q>>,
    x: Vec<Q>,
    d: Vec<Q>,
    pivots: usize,
    max_pivots: usize,
}

enum Phase {
    Optimal,
    Unbounded,
    Limit,
}

impl Tableau {
    fn price(&mut self, cost: &[Q]) {
        let n = self.x.len();
        let mut d: Vec<Q> = cost.to_vec();
        for (p, &b) in self.head.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate().take(n) {
                if !self.t[p][j].is_zero() {
                    *dj -= cb * &self.t[p][j];
                }
            }
        }
        for &b in &self.head {
            d[b] = Q::zero();
        }
        self.d = d;
    }

    fn run(&mut self) -> Phase {
        loop {
            let entering = (0..self.x.len()).find(|&j| match self.at[j] {
                At::Basic => false,
                _ if self.lb[j].is_some() && self.lb[j] == self.ub[j] => false,
                At::Lower => self.d[j].is_negative(),
                At::Upper => self.d[j].is_positive(),
            });
            let Some(qv) = entering else { return Phase::Optimal };
            if self.pivots >= self.max_pivots {
                return Phase::Limit;
            }
            let up = self.at[qv] == At::Lower;
            // Limit from the entering variable's own range.
            let mut best: Option<(Q, usize, Option<usize>)> = match (&self.lb[qv], &self.ub[qv]) {
                (Some(l), Some(u)) => Some((u - l, qv, None)),
                _ => None,
            };
            for (p, &b) in self.head.iter().enumerate() {
                let tq = &self.t[p][qv];
                if tq.is_zero() {
                    continue;
                }
                // Change of x_b per unit step.
                let rate = if up { -tq.clone() } else { tq.clone() };
                let limit = if rate.is_positive() {
                    self.ub[b].as_ref().map(|u| (u - &self.x[b]) / &rate)
                } else {
                    self.lb[b].as_ref().map(|l| (l - &self.x[b]) / &rate)
                };
                if let Some(lim) = limit {
                    let lim = if lim.is_negative() { Q::zero() } else { lim };
                    let better = match &best {
                        None => true,
                        Some((s, idx, _)) => lim < *s || (lim == *s && b < *idx),
                    };
                    if better {
                        best = Some((lim, b, Some(p)));
                    }
                }
            }
            let Some((step, _, leave)) = best else { return Phase::Unbounded };
            self.pivots += 1;
            if !step.is_zero() {
                let signed = if up { step.clone() } else { -step.clone() };
                self.x[qv] += &signed;
                for (p, &b) in self.head.iter().enumerate() {
                    if !self.t[p][qv].is_zero() {
                        let delta = &self.t[p][qv] * &signed;
                        self.x[b] -= delta;
                    }
                }
            }
            match leave {
                None => {
                    self.at[qv] = if up { At::Upper } else { At::Lower };
                    self.x[qv] = if up { self.ub[qv].clone().unwrap() } else { self.lb[qv].clone().unwrap() };
                }
                Some(r) => {
                    let b = self.head[r];
                    let rate = if up { -self.t[r][qv].clone() } else { self.t[r][qv].clone() };
                    if rate.is_positive() {
                        self.at[b] = At::Upper;
                        self.x[b] = self.ub[b].clone().unwrap();
                    } else {
                        self.at[b] = At::Lower;
                        self.x[b] = self.lb[b].clone().unwrap();
                    }
                    self.pivot(r, qv);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, qv: usize) {
        let inv = self.t[r][qv].recip();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pr = self.t[r].clone();
        for (p, row) in self.t.iter_mut().enumerate() {
            if p == r || row[qv].is_zero() {
                continue;
            }
            let f = row[qv].clone();
            for (v, pv) in row.iter_mut().zip(&pr) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.d[qv].is_zero() {
            let f = self.d[qv].clone();
            for (v, pv) in self.d.iter_mut().zip(&pr) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.head[r] = qv;
        self.at[qv] = At::Basic;
    }
}

pub fn solve(inst: &LpInstance) -> ExactSolution {
    solve_capped(inst, 200_000)
}

pub fn solve_capped(inst: &LpInstance, max_pivots: usize) -> ExactSolution {
    let nc = inst.num_cols();
    let m = inst.rows.len();
    let mut lb: Vec<Option<Q>> = inst.lower.iter().map(|&v| q_from_f64(v)).collect();
    let mut ub: Vec<Option<Q>> = inst.upper.iter().map(|&v| q_from_f64(v)).collect();
    assert!(lb.iter().all(Option::is_some), "exact mode needs finite lower bounds");
    let x0: Vec<Q> = lb.iter().map(|l| l.clone().unwrap()).collect();
    for r in &inst.rows {
        let rhs = q(r.rhs);
        let (lo, hi) = match r.sense {
            Sense::Le => (None, Some(rhs)),
            Sense::Ge => (Some(rhs), None),
            Sense::Eq => (Some(rhs.clone()), Some(rhs)),
        };
        lb.push(lo);
        ub.push(hi);
    }
    // Decide per row whether the activity starts basic or needs an artificial.
    let mut activity = Vec::with_capacity(m);
    let mut artificial: Vec<Option<(usize, Q)>> = Vec::with_capacity(m);
    let mut na = 0;
    for (i, r) in inst.rows.iter().enumerate() {
        let v: Q = r.terms.iter().map(|&(c, a)| &x0[c.0] * q(a)).fold(Q::zero(), |s, t| s + t);
        let s = nc + i;
        let below = lb[s].as_ref().is_some_and(|l| v < *l);
        let above = ub[s].as_ref().is_some_and(|u| v > *u);
        if below || above {
            let bound = if below { lb[s].clone().unwrap() } else { ub[s].clone().unwrap() };
            let sign = if bound > v { Q::one() } else { -Q::one() };
            artificial.push(Some((na, sign)));
            na += 1;
            activity.push(bound);
        } else {
            artificial.push(None);
            activity.push(v);
        }
    }
    let total = nc + m + na;
    for _ in 0..na {
        lb.push(Some(Q::zero()));
        ub.push(None);
    }
    let mut t = vec![vec![Q::zero(); total]; m];
    let mut head = Vec::with_capacity(m);
    let mut at = vec![At::Lower; total];
    let mut x: Vec<Q> = x0;
    x.extend(activity.iter().cloned());
    x.extend((0..na).map(|_| Q::zero()));
    for (i, r) in inst.rows.iter().enumerate() {
        // Row: Σ a x - s + sign·art = 0, scaled by the inverse of the basic coefficient.
        let (basic, scale) = match &artificial[i] {
            None => (nc + i, -Q::one()),
            Some((k, sign)) => (nc + m + k, sign.clone()),
        };
        let inv = scale.recip();
        for &(c, a) in &r.terms {
            t[i][c.0] = q(a) * &inv;
        }
        t[i][nc + i] = -inv.clone();
        if let Some((k, sign)) = &artificial[i] {
            t[i][nc + m + k] = sign * &inv;
            let s = nc + i;
            let v = &activity[i];
            at[s] = if ub[s].as_ref() == Some(v) { At::Upper } else { At::Lower };
            let lhs: Q = r.terms.iter().map(|&(c, a)| &x[c.0] * q(a)).fold(Q::zero(), |s, t| s + t);
            x[nc + m + k] = ((v - lhs) * sign).abs();
        }
        head.push(basic);
        at[basic] = At::Basic;
    }
    for (j, a) in at.iter_mut().enumerate().take(nc) {
        if ub[j].as_ref() == lb[j].as_ref() {
            *a = At::Lower;
        }
    }
    let mut tab = Tableau { t, head, at, lb, ub, x, d: Vec::new(), pivots: 0, max_pivots };
    let finish = |tab: &Tableau, status: LpStatus| -> ExactSolution {
        let values = tab.x[..nc].to_vec();
        let objective = inst
            .objective
            .iter()
            .zip(&values)
            .map(|(&c, v)| q_from_f64(c).unwrap() * v)
            .fold(Q::zero(), |s, t| s + t);
        let duals = if status == LpStatus::Optimal { (0..m).map(|i| tab.d[nc + i].clone()).collect() } else { Vec::new() };
        ExactSolution { status, values, objective, duals, pivots: tab.pivots }
    };
    if na > 0 {
        let mut cost = vec![Q::zero(); total];
        for c in cost.iter_mut().skip(nc + m) {
            *c = Q::one();
        }
        tab.price(&cost);
        match tab.run() {
            Phase::Optimal => {}
            Phase::Limit => return finish(&tab, LpStatus::IterationLimit),
            Phase::Unbounded => unreachable!("phase one is bounded below by zero"),
        }
        if tab.x[nc + m..].iter().any(|v| !v.is_zero()) {
            return finish(&tab, LpStatus::Infeasible);
        }
        for k in 0..na {
            tab.ub[nc + m + k] = Some(Q::zero());
        }
    }
    let mut cost: Vec<Q> = inst.objective.iter().map(|&c| q_from_f64(c).expect("finite objective")).collect();
    cost.resize(total, Q::zero());
    tab.price(&cost);
    match tab.run() {
        Phase::Optimal => finish(&tab, LpStatus::Optimal),
        Phase::Limit => finish(&tab, LpStatus::IterationLimit),
        Phase::Unbounded => panic!("objective unbounded: some column lacks a finite bound"),
    }
}
