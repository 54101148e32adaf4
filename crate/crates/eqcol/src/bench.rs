//! Benchmark harness: BC against BC⁺ on seeded random graphs.
//!
//! A spec is a small TOML file:
//!
//! ```toml
//! n = 30
//! densities = [10, 30, 50, 70, 90]
//! seeds = 10
//! time_limit = 300
//! ```
//!
//! Instances run on a pool of worker threads, each with its own solver
//! state. Results are sorted by `(density, seed, variant)` before
//! aggregation, so the output does not depend on scheduling.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use eqcol_core::{EquitableColoring, Graph};
use serde::{Deserialize, Serialize};

use crate::engine::{solve, SolverConfig};

/// Value of the `schema` field of a [`BenchReport`].
pub const BENCH_SCHEMA: &str = "eqcol-benchmark/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    pub n: usize,
    /// Edge densities in percent.
    pub densities: Vec<f64>,
    /// Seeds per density, counted from `first_seed`.
    pub seeds: u64,
    #[serde(default)]
    pub first_seed: u64,
    /// Seconds per solve.
    pub time_limit: f64,
    /// Worker threads; defaults to one.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Audit every cut by enumeration when `n` is at most this.
    #[serde(default)]
    pub oracle_cap: Option<usize>,
    #[serde(default)]
    pub exact_lp: bool,
}

impl BenchSpec {
    pub fn parse(text: &str) -> Result<Self, String> {
        let spec: Self = toml::from_str(text).map_err(|e| e.to_string())?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("n must be positive".into());
        }
        if self.densities.is_empty() {
            return Err("densities must not be empty".into());
        }
        if let Some(d) = self.densities.iter().find(|d| !(**d > 0.0 && **d < 100.0)) {
            return Err(format!("density {d} outside (0, 100)"));
        }
        if self.seeds == 0 {
            return Err("seeds must be positive".into());
        }
        if !(self.time_limit > 0.0) {
            return Err(format!("time limit must be positive, got {}", self.time_limit));
        }
        if self.workers == Some(0) {
            return Err("workers must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "BC")]
    Bc,
    #[serde(rename = "BC+")]
    BcPlus,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::Bc => "BC",
            Variant::BcPlus => "BC+",
        }
    }
}

/// Outcome of one solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub density: f64,
    pub seed: u64,
    pub variant: Variant,
    pub edges: usize,
    pub best_k: Option<usize>,
    pub lower_bound: Option<usize>,
    pub proven_optimal: bool,
    pub nodes: usize,
    pub time: f64,
    pub cuts_by_family: BTreeMap<String, usize>,
    pub min_cut_violation: Option<f64>,
    pub bound_decreases: usize,
    pub audited_cuts: usize,
    pub invalid_cuts: usize,
    pub coloring_valid: bool,
    /// Set when the run failed; the other fields are then defaults.
    pub error: Option<String>,
}

/// One CSV row: the three column groups for BC and BC⁺ at one density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub density: f64,
    pub bc_solved_pct: f64,
    pub bcplus_solved_pct: f64,
    /// Empty when every run failed.
    pub bc_nodes_avg: Option<f64>,
    pub bcplus_nodes_avg: Option<f64>,
    pub bc_time_avg: Option<f64>,
    pub bcplus_time_avg: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: String,
    pub spec: BenchSpec,
    pub instances: Vec<InstanceResult>,
    pub aggregates: Vec<Aggregate>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let round = |v: f64, places: i32| (v * 10f64.powi(places)).round() / 10f64.powi(places);
        let mut w = csv::Writer::from_writer(Vec::new());
        for a in &self.aggregates {
            let a = Aggregate {
                density: a.density,
                bc_solved_pct: round(a.bc_solved_pct, 1),
                bcplus_solved_pct: round(a.bcplus_solved_pct, 1),
                bc_nodes_avg: a.bc_nodes_avg.map(|v| round(v, 2)),
                bcplus_nodes_avg: a.bcplus_nodes_avg.map(|v| round(v, 2)),
                bc_time_avg: a.bc_time_avg.map(|v| round(v, 3)),
                bcplus_time_avg: a.bcplus_time_avg.map(|v| round(v, 3)),
            };
            w.serialize(&a).expect("aggregates serialize");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }

    /// Median node count of one variant at one density over its runs.
    pub fn median_nodes(&self, density: f64, variant: Variant) -> Option<f64> {
        let mut nodes: Vec<usize> = self
            .instances
            .iter()
            .filter(|r| r.density == density && r.variant == variant && r.error.is_none())
            .map(|r| r.nodes)
            .collect();
        if nodes.is_empty() {
            return None;
        }
        nodes.sort_unstable();
        let m = nodes.len();
        Some(if m % 2 == 1 { nodes[m / 2] as f64 } else { (nodes[m / 2 - 1] + nodes[m / 2]) as f64 / 2.0 })
    }
}

fn run_one(spec: &BenchSpec, density: f64, seed: u64, variant: Variant) -> InstanceResult {
    let mut result = InstanceResult {
        density,
        seed,
        variant,
        edges: 0,
        best_k: None,
        lower_bound: None,
        proven_optimal: false,
        nodes: 0,
        time: 0.0,
        cuts_by_family: BTreeMap::new(),
        min_cut_violation: None,
        bound_decreases: 0,
        audited_cuts: 0,
        invalid_cuts: 0,
        coloring_valid: false,
        error: None,
    };
    let g = match Graph::random(spec.n, density, seed) {
        Ok(g) => g,
        Err(e) => {
            result.error = Some(e.to_string());
            return result;
        }
    };
    result.edges = g.num_edges();
    let config = SolverConfig {
        time_limit: Some(spec.time_limit),
        enable_new_families: variant == Variant::BcPlus,
        seed,
        exact_lp: spec.exact_lp,
        audit_cuts: spec.oracle_cap.is_some_and(|cap| spec.n <= cap),
        oracle_cap: spec.oracle_cap.unwrap_or(SolverConfig::default().oracle_cap),
        ..SolverConfig::default()
    };
    match catch_unwind(AssertUnwindSafe(|| solve(&g, &config))) {
        Ok((coloring, stats)) => {
            result.best_k = Some(stats.best_k);
            result.lower_bound = Some(stats.lower_bound);
            result.proven_optimal = stats.proven_optimal;
            result.nodes = stats.nodes;
            result.time = stats.time;
            result.cuts_by_family = stats.cuts_by_family;
            result.min_cut_violation = stats.min_cut_violation;
            result.bound_decreases = stats.bound_decreases;
            result.audited_cuts = stats.audited_cuts;
            result.invalid_cuts = stats.invalid_cuts;
            result.coloring_valid = EquitableColoring::new(&g, coloring.colors().collect()).is_ok();
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "solver panicked".into());
            result.error = Some(msg);
        }
    }
    result
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Per-density averages. Failed runs count as unsolved and are left out
/// of the node and time averages.
pub fn aggregate(spec: &BenchSpec, instances: &[InstanceResult]) -> Vec<Aggregate> {
    spec.densities
        .iter()
        .map(|&density| {
            let runs = |v: Variant| instances.iter().filter(move |r| r.density == density && r.variant == v);
            let solved = |v: Variant| {
                let total = runs(v).count().max(1);
                let ok = runs(v).filter(|r| r.error.is_none() && r.proven_optimal).count();
                100.0 * ok as f64 / total as f64
            };
            let nodes = |v: Variant| mean(runs(v).filter(|r| r.error.is_none()).map(|r| r.nodes as f64));
            let time = |v: Variant| mean(runs(v).filter(|r| r.error.is_none()).map(|r| r.time));
            Aggregate {
                density,
                bc_solved_pct: solved(Variant::Bc),
                bcplus_solved_pct: solved(Variant::BcPlus),
                bc_nodes_avg: nodes(Variant::Bc),
                bcplus_nodes_avg: nodes(Variant::BcPlus),
                bc_time_avg: time(Variant::Bc),
                bcplus_time_avg: time(Variant::BcPlus),
            }
        })
        .collect()
}

/// Runs every `(density, seed, variant)` of `spec`. `progress` is called
/// from worker threads as runs finish.
pub fn run(spec: &BenchSpec, progress: impl Fn(&InstanceResult) + Sync) -> BenchReport {
    let jobs: Vec<(f64, u64, Variant)> = spec
        .densities
        .iter()
        .flat_map(|&d| {
            (spec.first_seed..spec.first_seed + spec.seeds).flat_map(move |s| [(d, s, Variant::Bc), (d, s, Variant::BcPlus)])
        })
        .collect();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(jobs.len()));
    let workers = spec.workers.unwrap_or(1).min(jobs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(d, s, v)) = jobs.get(i) else { break };
                let r = run_one(spec, d, s, v);
                progress(&r);
                results.lock().expect("no worker panics while holding the lock").push(r);
            });
        }
    });
    let mut instances = results.into_inner().expect("workers joined");
    instances.sort_by(|a, b| a.density.total_cmp(&b.density).then(a.seed.cmp(&b.seed)).then(a.variant.cmp(&b.variant)));
    let aggregates = aggregate(spec, &instances);
    BenchReport { schema: BENCH_SCHEMA.into(), spec: spec.clone(), instances, aggregates }
}
