use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eqcol::bench::{self, BenchSpec};
use eqcol::engine::{solve, SolveStats, SolverConfig};
use eqcol::record::{verify, RunRecord, SolveChecks, VerifyReport};
use eqcol_core::cuts::{instances, CUT_KINDS};
use eqcol_core::text::parse_rows;
use eqcol_core::Graph;

/// Exact equitable graph coloring by branch and cut.
#[derive(Parser)]
#[command(name = "eqcol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the equitable chromatic number of a graph.
    Solve(SolveArgs),
    /// Audit inequalities on a small graph by full enumeration.
    Verify(VerifyArgs),
    /// Run BC and BC+ over seeded random graphs.
    Benchmark(BenchArgs),
    /// Write a seeded random graph in DIMACS format.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug)]
struct RandomSpec {
    n: usize,
    density: f64,
    seed: u64,
}

fn parse_random(text: &str) -> Result<RandomSpec, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [n, d, s] = parts[..] else {
        return Err(format!("expected n,density,seed, got {text:?}"));
    };
    Ok(RandomSpec {
        n: n.parse().map_err(|_| format!("bad vertex count {n:?}"))?,
        density: d.parse().map_err(|_| format!("bad density {d:?}"))?,
        seed: s.parse().map_err(|_| format!("bad seed {s:?}"))?,
    })
}

#[derive(Args)]
struct Instance {
    /// DIMACS graph file.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    path: Option<PathBuf>,
    /// Generate G(n, density%) with the given seed instead of reading a file.
    #[arg(long, value_name = "N,DENSITY,SEED", value_parser = parse_random)]
    random: Option<RandomSpec>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: Instance,
    /// Wall-clock limit in seconds.
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Seed for the heuristics.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use only clique, block and symmetry cuts (BC).
    #[arg(long)]
    no_new_cuts: bool,
    /// Take every node bound from an exact rational LP solve.
    #[arg(long)]
    exact_lp: bool,
    /// Largest n for the enumeration cross-checks and cut audits.
    #[arg(long, default_value_t = 8)]
    oracle_cap: usize,
    /// Stop after this many nodes.
    #[arg(long)]
    node_limit: Option<usize>,
    /// Record one entry per node in the JSON output.
    #[arg(long)]
    log_nodes: bool,
    /// Write the JSON run record here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: Instance,
    /// Audit every instance of this cut family; repeatable. Without this
    /// and `--rows`, every family is audited.
    #[arg(long, value_name = "KIND")]
    family: Vec<String>,
    /// Audit the rows in this file, one per line in text form.
    #[arg(long)]
    rows: Option<PathBuf>,
    /// Refuse graphs with more vertices than this.
    #[arg(long, default_value_t = 8)]
    oracle_cap: usize,
    /// Write the JSON run record here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML benchmark spec.
    spec: PathBuf,
    /// Override the spec's time limit.
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Override the spec's first seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the spec's worker count.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    exact_lp: bool,
    /// Audit every cut by enumeration when n is at most this.
    #[arg(long)]
    oracle_cap: Option<usize>,
    /// Write the aggregate CSV here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_name = "N,DENSITY,SEED", value_parser = parse_random)]
    random: RandomSpec,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with the exit code to report.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load(instance: &Instance) -> Result<(Graph, RunRecord), Failure> {
    if let Some(r) = instance.random {
        let g = Graph::random(r.n, r.density, r.seed)?;
        let mut record = RunRecord::new("", &format!("random-{}-{}-{}", r.n, r.density, r.seed), &g);
        record.density = Some(r.density);
        record.seed = Some(r.seed);
        return Ok((g, record));
    }
    let path = instance.path.as_deref().expect("clap requires a path or --random");
    let g = Graph::parse_dimacs(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let name = path.file_name().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    let record = RunRecord::new("", &name, &g);
    Ok((g, record))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn cut_summary(stats: &SolveStats) -> String {
    if stats.cuts_by_family.is_empty() {
        return "none".into();
    }
    let parts: Vec<String> = stats.cuts_by_family.iter().map(|(k, v)| format!("{k} {v}")).collect();
    parts.join(", ")
}

fn solve_table(record: &RunRecord, stats: &SolveStats, checks: &SolveChecks) -> String {
    let mut out = String::new();
    let config = record.config.as_ref().expect("solve records carry the config");
    let variant = if config.enable_new_families { "BC+" } else { "BC" };
    let _ = writeln!(out, "instance  {} (n={}, m={})", record.instance, record.n, record.edges);
    let _ = writeln!(out, "solver    {variant}, seed {}", config.seed);
    if stats.proven_optimal {
        let _ = writeln!(out, "chi_eq = {}", stats.best_k);
    } else {
        let _ = writeln!(out, "best k = {} (lower bound {}, limit reached)", stats.best_k, stats.lower_bound);
    }
    let _ = writeln!(out, "nodes     {}", stats.nodes);
    let _ = writeln!(out, "time      {:.3} s", stats.time);
    if let (Some(a), Some(b)) = (stats.root_lp, stats.root_bound) {
        let _ = writeln!(out, "root lp   {a:.4} -> {b:.4}");
    }
    let _ = writeln!(out, "cuts      {}", cut_summary(stats));
    if let Some(colors) = &record.coloring {
        let colors: Vec<String> = colors.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "coloring  {}", colors.join(" "));
    }
    let oracle = checks.oracle_chi_eq.map_or_else(|| "oracle skipped".to_string(), |k| format!("oracle chi_eq {k}"));
    let valid = if checks.coloring_valid { "coloring valid" } else { "COLORING INVALID" };
    let _ = writeln!(out, "check     {valid}, {oracle}");
    out
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode, Failure> {
    let (g, mut record) = load(&args.instance)?;
    record.command = "solve".into();
    let config = SolverConfig {
        time_limit: args.time_limit,
        enable_new_families: !args.no_new_cuts,
        seed: args.seed,
        exact_lp: args.exact_lp,
        oracle_cap: args.oracle_cap,
        audit_cuts: g.n() <= args.oracle_cap,
        node_limit: args.node_limit,
        log_nodes: args.log_nodes,
        ..SolverConfig::default()
    };
    config.validate().map_err(Failure)?;
    let (coloring, stats) = solve(&g, &config);
    let checks = SolveChecks::run(&g, &coloring, args.oracle_cap);
    record.config = Some(config);
    record.optimum = stats.proven_optimal.then_some(stats.best_k);
    record.coloring = Some(coloring.colors().collect());
    print!("{}", solve_table(&record, &stats, &checks));
    let agree = checks.agree(&stats) && stats.invalid_cuts == 0;
    let proven = stats.proven_optimal;
    record.stats = Some(stats);
    record.checks = Some(checks);
    if let Some(out) = &args.out {
        write(out, &to_json(&record))?;
    }
    if !agree {
        return Err(Failure("result failed its independent checks".into()));
    }
    Ok(if proven { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn verify_table(record: &RunRecord, report: &VerifyReport) -> String {
    let mut out = String::new();
    let a: Vec<String> = report.infeasible_k.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "instance   {} (n={}, m={})", record.instance, record.n, record.edges);
    let _ = writeln!(out, "eqcols     {}", report.eqcols);
    let _ = writeln!(out, "chi_eq     {}", report.chi_eq);
    let _ = writeln!(out, "A(G)       {{{}}}", a.join(","));
    let _ = writeln!(
        out,
        "dimension  {} (n^2 - |A(G)| - 2 = {}, {})",
        report.dimension,
        report.predicted_dimension,
        if report.dimension == report.predicted_dimension { "match" } else { "MISMATCH" }
    );
    let _ = writeln!(out, "assumption {}", if report.standing_assumption { "holds" } else { "fails" });
    for r in &report.rows {
        let face = r.face_dimension.map_or_else(|| "-".to_string(), |d| d.to_string());
        let facet = match r.facet {
            Some(true) => "facet",
            Some(false) => "not facet",
            None => "-",
        };
        let claim = match r.conditions_hold {
            Some(true) => "conditions hold",
            Some(false) => "conditions fail",
            None => "no conditions",
        };
        let valid = if r.valid { "valid" } else { "INVALID" };
        let _ = writeln!(out, "{valid:7} face {face:>3} {facet:9} {claim:15} | {}", r.row);
        for b in r.bullets.iter().filter(|b| !b.holds) {
            let kind = if b.required { "fails" } else { "alternative fails" };
            let _ = writeln!(out, "        {kind}: {}", b.label);
        }
        if r.conditions_hold == Some(true) && r.facet == Some(false) {
            let _ = writeln!(out, "        COUNTEREXAMPLE: conditions hold but the face is not a facet");
        }
    }
    out
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let (g, mut record) = load(&args.instance)?;
    record.command = "verify".into();
    if g.n() > args.oracle_cap {
        return Err(Failure(format!("graph has {} vertices, above the oracle cap of {}", g.n(), args.oracle_cap)));
    }
    let mut rows = Vec::new();
    let every: Vec<String> = CUT_KINDS.iter().map(|k| k.to_string()).collect();
    let families = if args.family.is_empty() && args.rows.is_none() { &every } else { &args.family };
    for kind in families {
        if !CUT_KINDS.contains(&kind.as_str()) {
            return Err(Failure(format!("unknown family {kind:?}; expected one of {}", CUT_KINDS.join(", "))));
        }
        rows.extend(instances(&g, kind)?);
    }
    if let Some(path) = &args.rows {
        rows.extend(parse_rows(&read(path)?, g.n()).map_err(|e| Failure(format!("{}: {e}", path.display())))?);
    }
    let report = verify(&g, &rows, args.oracle_cap)?;
    print!("{}", verify_table(&record, &report));
    record.verification = Some(report);
    if let Some(out) = &args.out {
        write(out, &to_json(&record))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_benchmark(args: &BenchArgs) -> Result<ExitCode, Failure> {
    let mut spec = BenchSpec::parse(&read(&args.spec)?).map_err(|e| Failure(format!("{}: {e}", args.spec.display())))?;
    if let Some(t) = args.time_limit {
        spec.time_limit = t;
    }
    if let Some(s) = args.seed {
        spec.first_seed = s;
    }
    if args.workers.is_some() {
        spec.workers = args.workers;
    }
    if args.oracle_cap.is_some() {
        spec.oracle_cap = args.oracle_cap;
    }
    spec.exact_lp |= args.exact_lp;
    spec.validate().map_err(Failure)?;
    let report = bench::run(&spec, |r| {
        let status = match (&r.error, r.proven_optimal) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => format!("chi_eq {}", r.best_k.unwrap_or(0)),
            (None, false) => format!("best {} (limit)", r.best_k.unwrap_or(0)),
        };
        eprintln!("d={} seed={} {:3} {status} nodes {} time {:.2}s", r.density, r.seed, r.variant.label(), r.nodes, r.time);
    });
    let csv = report.to_csv();
    match &args.csv {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(out) = &args.out {
        write(out, &to_json(&report))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode, Failure> {
    let r = args.random;
    let g = Graph::random(r.n, r.density, r.seed)?;
    let comment = format!("random graph n={} density={} seed={}", r.n, r.density, r.seed);
    let text = g.to_dimacs(Some(&comment));
    match &args.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
