//! Branch-and-cut driver.
//!
//! One dual simplex instance is shared by the whole search. Nodes differ only
//! in column bounds, conflict rows are added lazily when violated, and cuts
//! stay in the LP until they have been slack for [`IDLE_LIMIT`] node LPs.

pub mod heuristic;
pub mod separate;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::time::Instant;

use eqcol_core::formulation::build_model;
use eqcol_core::oracle::{EqcolCatalog, Oracle};
use eqcol_core::row::Var;
use eqcol_core::{CutRow, EquitableColoring, Family, Graph, VarId, Vars};
use serde::{Deserialize, Serialize};

use crate::lp::{exact, float_terms, row_range, DualSimplex, LpInstance, LpOptions, LpStatus};
use separate::{RoundPolicy, Separator};

const INTEGRALITY_TOL: f64 = 1e-6;
const BOUND_SLACK: f64 = 1e-6;
const IDLE_SLACK: f64 = 1e-3;
pub const IDLE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Wall-clock limit in seconds; `None` runs to completion.
    pub time_limit: Option<f64>,
    /// BC⁺ when true, BC (clique, block and symmetry cuts only) when false.
    pub enable_new_families: bool,
    /// Defaults to `n`.
    pub cut_round_target: Option<usize>,
    pub max_rounds_per_node: usize,
    /// Vertex cap for enumeration-based cut audits.
    pub oracle_cap: usize,
    pub seed: u64,
    /// Re-solve every node LP in exact rational arithmetic for the bound.
    pub exact_lp: bool,
    /// Check every emitted cut against the enumeration oracle when
    /// `n <= oracle_cap`.
    pub audit_cuts: bool,
    pub node_limit: Option<usize>,
    pub log_nodes: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            time_limit: None,
            enable_new_families: true,
            cut_round_target: None,
            max_rounds_per_node: 10,
            oracle_cap: 8,
            seed: 0,
            exact_lp: false,
            audit_cuts: false,
            node_limit: None,
            log_nodes: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), String> {
        if let Some(t) = self.time_limit {
            if !(t > 0.0) {
                return Err(format!("time limit must be positive, got {t}"));
            }
        }
        if self.cut_round_target == Some(0) {
            return Err("cut round target must be positive".into());
        }
        if self.max_rounds_per_node == 0 {
            return Err("max rounds per node must be positive".into());
        }
        if self.node_limit == Some(0) {
            return Err("node limit must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub depth: usize,
    pub bound: Option<f64>,
    pub cuts: BTreeMap<String, usize>,
    pub incumbent: usize,
    pub outcome: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: usize,
    /// Wall seconds.
    pub time: f64,
    pub cuts_by_family: BTreeMap<String, usize>,
    pub best_k: usize,
    /// Largest proven lower bound on `χ_eq`.
    pub lower_bound: usize,
    pub proven_optimal: bool,
    pub initial_k: usize,
    /// Root LP value before and after cutting.
    pub root_lp: Option<f64>,
    pub root_bound: Option<f64>,
    pub lp_pivots: usize,
    /// Seconds spent in LP solves, separation and the primal heuristic.
    pub lp_seconds: f64,
    pub separation_seconds: f64,
    pub heuristic_seconds: f64,
    pub lazy_conflict_rows: usize,
    pub cuts_removed: usize,
    /// Smallest violation of an emitted cut at its emission point.
    pub min_cut_violation: Option<f64>,
    /// Cut rounds in which the LP value went down.
    pub bound_decreases: usize,
    pub audited_cuts: usize,
    pub invalid_cuts: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub node_log: Vec<NodeRecord>,
}

/// A subproblem: the root bounds plus variables fixed by branching.
#[derive(Clone, Debug, PartialEq)]
pub struct BnbNode {
    pub id: usize,
    pub fixings: Vec<(VarId, bool)>,
    pub depth: usize,
    pub parent_bound: f64,
}

impl BnbNode {
    pub fn root() -> Self {
        Self { id: 0, fixings: Vec::new(), depth: 0, parent_bound: f64::NEG_INFINITY }
    }

    /// False when a variable is fixed both ways.
    pub fn is_consistent(&self) -> bool {
        let mut seen = HashMap::new();
        self.fixings.iter().all(|&(v, b)| *seen.entry(v).or_insert(b) == b)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("no fractional variable to branch on")]
pub struct IntegralPoint;

/// Splits `node` on the `x[v][j]` maximizing `min(x, 1-x)`, ties to the
/// smallest `(j, v)`; on a fractional `w[j]` when every `x` is integral.
/// Children come back as `[fixed to 1, fixed to 0]`.
pub fn branch(node: &BnbNode, x: &[f64], n: usize, next_id: usize) -> Result<[BnbNode; 2], IntegralPoint> {
    let vars = Vars::new(n);
    let frac = |v: f64| v.min(1.0 - v);
    let mut pick: Option<(VarId, f64)> = None;
    for j in 1..=n {
        for v in 1..=n {
            let id = vars.x(v, j);
            let f = frac(x[id.0]);
            if f > INTEGRALITY_TOL && pick.is_none_or(|(_, b)| f > b) {
                pick = Some((id, f));
            }
        }
    }
    if pick.is_none() {
        pick = (1..=n).map(|j| vars.w(j)).find(|id| frac(x[id.0]) > INTEGRALITY_TOL).map(|id| (id, 0.0));
    }
    let (var, _) = pick.ok_or(IntegralPoint)?;
    let child = |id: usize, value: bool| {
        let mut fixings = node.fixings.clone();
        fixings.push((var, value));
        BnbNode { id, fixings, depth: node.depth + 1, parent_bound: node.parent_bound }
    };
    Ok([child(next_id, true), child(next_id + 1, false)])
}

struct Queued(BnbNode);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    // Max-heap order: lowest bound, then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .parent_bound
            .total_cmp(&self.0.parent_bound)
            .then(self.0.depth.cmp(&other.0.depth))
            .then(other.0.id.cmp(&self.0.id))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RowKind {
    Core,
    Conflict,
    Cut,
}

struct RowMeta {
    row: CutRow,
    kind: RowKind,
    idle: usize,
}

enum Outcome {
    Pruned(&'static str),
    Branch(f64, Vec<f64>),
}

struct Search<'g> {
    g: &'g Graph,
    n: usize,
    vars: Vars,
    config: SolverConfig,
    target: usize,
    sep: Separator<'g>,
    lp: DualSimplex,
    rows: Vec<RowMeta>,
    active: HashSet<Family>,
    conflicts: Vec<CutRow>,
    conflict_in: Vec<bool>,
    base_upper: Vec<f64>,
    incumbent: EquitableColoring,
    catalog: Option<EqcolCatalog>,
    stats: SolveStats,
    start: Instant,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, config: &SolverConfig, incumbent: EquitableColoring) -> Self {
        let n = g.n();
        let model = build_model(g, true);
        let inst = LpInstance::from_model(&model);
        let opts = LpOptions { perturbation: if config.exact_lp { 0.0 } else { 1e-3 }, ..LpOptions::default() };
        let mut lp = DualSimplex::new(inst.objective.clone(), inst.lower.clone(), inst.upper.clone(), opts);
        let mut rows = Vec::new();
        let mut conflicts = Vec::new();
        for r in model.rows {
            if matches!(r.family, Family::Conflict { .. }) {
                conflicts.push(r);
            } else {
                let (lo, hi) = row_range(&r);
                lp.add_row(&float_terms(&r), lo, hi);
                rows.push(RowMeta { row: r, kind: RowKind::Core, idle: 0 });
            }
        }
        let catalog = (config.audit_cuts && n <= config.oracle_cap)
            .then(|| EqcolCatalog::build(g, &Oracle::with_cap(config.oracle_cap)).ok())
            .flatten();
        let conflict_in = vec![false; conflicts.len()];
        let stats = SolveStats { best_k: incumbent.k(), initial_k: incumbent.k(), ..SolveStats::default() };
        let mut search = Self {
            g,
            n,
            vars: Vars::new(n),
            config: config.clone(),
            target: config.cut_round_target.unwrap_or(n).max(1),
            sep: Separator::new(g),
            lp,
            rows,
            active: HashSet::new(),
            conflicts,
            conflict_in,
            base_upper: inst.upper,
            incumbent,
            catalog,
            stats,
            start: Instant::now(),
        };
        search.restrict_colors();
        search
    }

    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn out_of_time(&self) -> bool {
        self.config.time_limit.is_some_and(|t| self.elapsed() >= t)
    }

    fn best(&self) -> usize {
        self.incumbent.k()
    }

    /// Only colorings with fewer colors than the incumbent matter: colors
    /// `>= best` are switched off at the root.
    fn restrict_colors(&mut self) {
        let best = self.best();
        for j in best..=self.n {
            self.base_upper[self.vars.w(j).0] = 0.0;
            for v in 1..=self.n {
                self.base_upper[self.vars.x(v, j).0] = 0.0;
            }
        }
    }

    fn offer(&mut self, c: EquitableColoring) -> bool {
        if c.k() < self.best() {
            self.incumbent = c;
            self.stats.best_k = self.best();
            self.restrict_colors();
            true
        } else {
            false
        }
    }

    fn prunable(&self, bound: f64) -> bool {
        (bound - BOUND_SLACK).ceil() >= self.best() as f64
    }

    fn apply_bounds(&mut self, node: &BnbNode) -> bool {
        let mut lower = vec![0.0; self.base_upper.len()];
        let mut upper = self.base_upper.clone();
        for &(v, one) in &node.fixings {
            if one {
                if upper[v.0] < 1.0 {
                    return false;
                }
                lower[v.0] = 1.0;
            } else {
                upper[v.0] = 0.0;
            }
        }
        for j in 0..upper.len() {
            self.lp.set_col_bounds(j, lower[j], upper[j]);
        }
        true
    }

    fn add_row(&mut self, row: CutRow, kind: RowKind) {
        let (lo, hi) = row_range(&row);
        self.lp.add_row(&float_terms(&row), lo, hi);
        self.rows.push(RowMeta { row, kind, idle: 0 });
    }

    /// Solves the node LP, adding violated conflict rows until none is
    /// left. The root LP runs to optimality so its value is reported exactly.
    fn solve_lp(&mut self, root: bool) -> LpStatus {
        let cutoff = if root || self.config.exact_lp { f64::INFINITY } else { self.best() as f64 - 1.0 + 2.0 * BOUND_SLACK };
        self.lp.set_cutoff(cutoff);
        loop {
            let before = self.lp.pivots();
            let clock = Instant::now();
            let mut status = self.lp.solve();
            if status == LpStatus::IterationLimit {
                self.lp.slack_basis();
                status = self.lp.solve();
            }
            self.stats.lp_seconds += clock.elapsed().as_secs_f64();
            self.stats.lp_pivots += self.lp.pivots() - before;
            if status != LpStatus::Optimal {
                return status;
            }
            let x = self.lp.values();
            let missing: Vec<usize> = (0..self.conflicts.len())
                .filter(|&i| !self.conflict_in[i] && self.conflicts[i].violation(x) > 1e-7)
                .collect();
            if missing.is_empty() {
                return status;
            }
            for i in missing {
                self.conflict_in[i] = true;
                self.stats.lazy_conflict_rows += 1;
                self.add_row(self.conflicts[i].clone(), RowKind::Conflict);
            }
        }
    }

    fn lp_bound(&self) -> Option<f64> {
        if !self.config.exact_lp {
            return Some(self.lp.dual_bound());
        }
        let ncols = self.lp.num_cols();
        let (lower, upper) = (0..ncols).map(|j| self.lp.col_bounds(j)).unzip();
        let mut objective = vec![0.0; ncols];
        for j in 1..=self.n {
            objective[self.vars.w(j).0] = 1.0;
        }
        let inst = LpInstance { lower, upper, objective, rows: self.rows.iter().map(|m| m.row.clone()).collect() };
        let sol = exact::solve(&inst);
        (sol.status == LpStatus::Optimal).then(|| sol.to_float().objective_value)
    }

    fn decode(&self, x: &[f64]) -> Option<EquitableColoring> {
        if x.iter().any(|&v| (v - v.round()).abs() > INTEGRALITY_TOL) {
            return None;
        }
        let colors = (1..=self.n)
            .map(|v| (1..=self.n).find(|&j| x[self.vars.x(v, j).0] > 0.5).unwrap_or(0))
            .collect();
        EquitableColoring::new(self.g, colors).ok()
    }

    fn record_cut(&mut self, row: &CutRow, x: &[f64], counts: &mut BTreeMap<String, usize>) {
        let kind = row.family.kind().to_string();
        *counts.entry(kind.clone()).or_default() += 1;
        *self.stats.cuts_by_family.entry(kind).or_default() += 1;
        let v = row.violation(x);
        self.stats.min_cut_violation = Some(self.stats.min_cut_violation.map_or(v, |m: f64| m.min(v)));
        if let Some(cat) = &self.catalog {
            self.stats.audited_cuts += 1;
            let ok = if matches!(row.family, Family::Symmetry { .. }) {
                cat.is_valid_for_canonical(row)
            } else {
                cat.is_valid(row)
            };
            if !ok {
                self.stats.invalid_cuts += 1;
            }
        }
    }

    fn process(&mut self, node: &BnbNode, counts: &mut BTreeMap<String, usize>) -> Outcome {
        if !self.apply_bounds(node) {
            return Outcome::Pruned("infeasible");
        }
        let policy = RoundPolicy { new_families: self.config.enable_new_families, target: self.target };
        let mut previous: Option<f64> = None;
        let mut rounds = 0;
        let (bound, x) = loop {
            match self.solve_lp(node.id == 0) {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return Outcome::Pruned("infeasible"),
                LpStatus::Cutoff => {
                    if node.id == 0 {
                        let bound = self.lp.dual_bound();
                        self.stats.root_lp.get_or_insert(bound);
                        self.stats.root_bound = Some(bound);
                    }
                    return Outcome::Pruned("bound");
                }
                LpStatus::IterationLimit => {
                    let x = self.lp.values().to_vec();
                    break (node.parent_bound, x);
                }
            }
            let Some(bound) = self.lp_bound() else { return Outcome::Pruned("infeasible") };
            if node.id == 0 {
                self.stats.root_lp.get_or_insert(bound);
                self.stats.root_bound = Some(bound);
            }
            if previous.is_some_and(|p| bound < p - 1e-7) {
                self.stats.bound_decreases += 1;
            }
            previous = Some(bound);
            if self.prunable(bound) {
                return Outcome::Pruned("bound");
            }
            let x = self.lp.values().to_vec();
            if let Some(c) = self.decode(&x) {
                self.offer(c);
                return Outcome::Pruned("integral");
            }
            if rounds >= self.config.max_rounds_per_node || self.out_of_time() {
                break (bound, x);
            }
            let clock = Instant::now();
            let cuts: Vec<CutRow> = self
                .sep
                .round(&x, policy)
                .into_iter()
                .filter(|r| !self.active.contains(&r.family))
                .collect();
            self.stats.separation_seconds += clock.elapsed().as_secs_f64();
            if cuts.is_empty() {
                break (bound, x);
            }
            for row in cuts {
                self.record_cut(&row, &x, counts);
                self.active.insert(row.family.clone());
                self.add_row(row, RowKind::Cut);
            }
            rounds += 1;
        };
        self.retire_idle_cuts();
        let lower = (bound - BOUND_SLACK).ceil().max(1.0) as usize;
        let iters = 20 * self.n;
        let clock = Instant::now();
        let found = heuristic::primal_heuristic(self.g, &x, lower, self.best(), iters, self.config.seed ^ node.id as u64);
        self.stats.heuristic_seconds += clock.elapsed().as_secs_f64();
        if let Some(c) = found {
            self.offer(c);
            if self.prunable(bound) {
                return Outcome::Pruned("bound");
            }
        }
        Outcome::Branch(bound, x)
    }

    fn retire_idle_cuts(&mut self) {
        let mut retire = Vec::new();
        for (i, meta) in self.rows.iter_mut().enumerate() {
            if meta.kind != RowKind::Cut {
                continue;
            }
            let (lo, hi) = self.lp.row_bounds(i);
            let act = self.lp.row_activity(i);
            let slack = (hi - act).min(act - lo);
            if slack > IDLE_SLACK {
                meta.idle += 1;
                if meta.idle >= IDLE_LIMIT {
                    retire.push(i);
                }
            } else {
                meta.idle = 0;
            }
        }
        if retire.is_empty() {
            return;
        }
        let gone = self.lp.remove_rows(&retire);
        let mut drop = vec![false; self.rows.len()];
        for &i in &gone {
            drop[i] = true;
            self.active.remove(&self.rows[i].row.family);
        }
        self.stats.cuts_removed += gone.len();
        let mut i = 0;
        self.rows.retain(|_| {
            i += 1;
            !drop[i - 1]
        });
    }

    fn run(mut self, initial_time: f64) -> (EquitableColoring, SolveStats) {
        let mut heap = BinaryHeap::new();
        heap.push(Queued(BnbNode::root()));
        let mut next_id = 1;
        let mut stopped = false;
        while let Some(Queued(node)) = heap.pop() {
            if self.prunable(node.parent_bound) {
                continue;
            }
            if self.out_of_time() || self.config.node_limit.is_some_and(|l| self.stats.nodes >= l) {
                heap.push(Queued(node));
                stopped = true;
                break;
            }
            self.stats.nodes += 1;
            let mut counts = BTreeMap::new();
            let outcome = self.process(&node, &mut counts);
            let (bound, label) = match &outcome {
                Outcome::Pruned(why) => (None, (*why).to_string()),
                Outcome::Branch(b, _) => (Some(*b), "branch".to_string()),
            };
            if self.config.log_nodes {
                self.stats.node_log.push(NodeRecord {
                    id: node.id,
                    depth: node.depth,
                    bound,
                    cuts: counts,
                    incumbent: self.best(),
                    outcome: label,
                });
            }
            match outcome {
                Outcome::Pruned(_) => {}
                Outcome::Branch(bound, x) => {
                    if self.prunable(bound) {
                        continue;
                    }
                    let parent = BnbNode { parent_bound: bound, ..node };
                    if let Ok(children) = branch(&parent, &x, self.n, next_id) {
                        next_id += 2;
                        for c in children {
                            heap.push(Queued(c));
                        }
                    }
                }
            }
        }
        let open_min = heap
            .iter()
            .map(|q| q.0.parent_bound)
            .filter(|b| !self.prunable(*b))
            .fold(f64::INFINITY, f64::min);
        self.stats.proven_optimal = !stopped || open_min == f64::INFINITY;
        self.stats.lower_bound = if self.stats.proven_optimal {
            self.best()
        } else {
            let lb = (open_min - BOUND_SLACK).ceil();
            if lb.is_finite() && lb >= 1.0 {
                (lb as usize).min(self.best())
            } else {
                1
            }
        };
        self.stats.best_k = self.best();
        self.stats.time = initial_time + self.elapsed();
        (self.incumbent, self.stats)
    }
}

/// Computes `χ_eq(g)` by branch and cut. With a time or node limit the
/// incumbent comes back with `proven_optimal = false`.
pub fn solve(g: &Graph, config: &SolverConfig) -> (EquitableColoring, SolveStats) {
    let start = Instant::now();
    let incumbent = heuristic::initial_heuristic(g, config.seed);
    let initial_time = start.elapsed().as_secs_f64();
    if g.n() <= 1 || incumbent.k() == 1 {
        let k = incumbent.k();
        let stats = SolveStats {
            best_k: k,
            initial_k: k,
            lower_bound: k,
            proven_optimal: true,
            time: initial_time,
            ..SolveStats::default()
        };
        return (incumbent, stats);
    }
    Search::new(g, config, incumbent).run(initial_time)
}

/// Values of the `x` and `w` variables as `(name, value)` for logging.
pub fn named_values(n: usize, x: &[f64]) -> Vec<(String, f64)> {
    let vars = Vars::new(n);
    (0..vars.len())
        .filter(|&i| x[i].abs() > INTEGRALITY_TOL)
        .map(|i| {
            let name = match vars.decode(VarId(i)) {
                Var::X { v, j } => format!("x{v}_{j}"),
                Var::W { j } => format!("w{j}"),
            };
            (name, x[i])
        })
        .collect()
}
