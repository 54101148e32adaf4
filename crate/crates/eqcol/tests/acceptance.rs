//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Criterion numbers can be passed as arguments to run
//! a subset: `cargo test --test acceptance -- 1 4`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use eqcol::bench::{self, BenchSpec, InstanceResult, Variant};
use eqcol::engine::{solve, SolveStats, SolverConfig};
use eqcol::lp::{self, exact, LpInstance, LpStatus};
use eqcol_core::cuts::{instances, CUT_KINDS};
use eqcol_core::formulation::build_model;
use eqcol_core::oracle::Oracle;
use eqcol_core::text::row_to_text;
use eqcol_core::verify::Audit;
use eqcol_core::{CutRow, Family, Graph, Vars};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_GRAPHS: usize = 72;
const SAMPLES_PER_FAMILY: usize = 500;

struct Line {
    id: u8,
    pass: bool,
    text: String,
}

fn line(id: u8, pass: bool, text: impl Into<String>) -> Line {
    let line = Line { id, pass, text: text.into() };
    println!("criterion {} {}: {}", line.id, if line.pass { "PASS" } else { "FAIL" }, line.text);
    line
}

fn progress(msg: &str) {
    eprintln!("  .. {msg}");
}

/// Random graphs on 5 to 7 vertices meeting the standing assumption,
/// starting at `first`, with their audits.
fn corpus(first: u64, count: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(first);
    let mut out = Vec::new();
    while out.len() < count {
        let n = 5 + out.len() % 3;
        let density = rng.random_range(20.0..85.0);
        let g = Graph::random(n, density, rng.random()).unwrap();
        if Audit::new(&g, &Oracle::default()).unwrap().meets_standing_assumption() {
            out.push(g);
        }
    }
    out
}

/// Affine dimension of a point set by floating Gaussian elimination.
fn float_affine_dim(points: &[Vec<f64>]) -> isize {
    let Some(origin) = points.first() else { return -1 };
    let mut rows: Vec<Vec<f64>> = points[1..].iter().map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect()).collect();
    let cols = origin.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).max_by(|&a, &b| rows[a][c].abs().total_cmp(&rows[b][c].abs())) else { break };
        if rows[pivot][c].abs() < 1e-9 {
            continue;
        }
        rows.swap(rank, pivot);
        let head = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            let f = r[c] / head[c];
            if f != 0.0 {
                r.iter_mut().zip(&head).for_each(|(x, h)| *x -= f * h);
            }
        }
        rank += 1;
    }
    rank as isize
}

fn tight(row: &CutRow, point: &[f64]) -> bool {
    let lhs: f64 = row.terms.iter().map(|&(v, a)| a as f64 * point[v.0]).sum();
    (lhs - row.rhs as f64).abs() < 1e-9
}

/// Independent recomputation of a facet verdict from raw 0/1 vectors.
fn float_is_facet(audit: &Audit, row: &CutRow) -> bool {
    let points: Vec<Vec<f64>> =
        audit.catalog().iter().map(|c| c.to_vector().as_slice().iter().map(|&b| f64::from(b)).collect()).collect();
    let face: Vec<Vec<f64>> = points.iter().filter(|p| tight(row, p)).cloned().collect();
    float_affine_dim(&face) == float_affine_dim(&points) - 1
}

fn criterion_1(graphs: &[Graph]) -> Line {
    let mut mismatches = Vec::new();
    for g in graphs {
        let a = Audit::new(g, &Oracle::default()).unwrap();
        if a.ecp_dimension().affine_dim != a.predicted_dimension() {
            mismatches.push(format!("{:?}", g.edges().collect::<Vec<_>>()));
        }
    }
    let c5 = Audit::new(&Graph::cycle(5), &Oracle::default()).unwrap().ecp_dimension().affine_dim;
    let k33 = Audit::new(&Graph::complete_bipartite(3, 3), &Oracle::default()).unwrap().ecp_dimension().affine_dim;
    let pass = mismatches.is_empty() && graphs.len() >= 60 && c5 == 21 && k33 == 32;
    line(
        1,
        pass,
        format!(
            "dim = n^2 - (|A(G)|+2) on {}/{} graphs with n in 5..=7; C5 {c5} (want 21), K33 {k33} (want 32){}",
            graphs.len() - mismatches.len(),
            graphs.len(),
            if mismatches.is_empty() { String::new() } else { format!("; mismatches {mismatches:?}") }
        ),
    )
}

struct Sample {
    graph: usize,
    row: CutRow,
}

/// Every generator row of every family over the corpus, extending the corpus
/// until each family has enough samples.
fn sample_rows(graphs: &mut Vec<Graph>) -> BTreeMap<&'static str, Vec<Sample>> {
    let mut by_family: BTreeMap<&'static str, Vec<Sample>> = CUT_KINDS.iter().map(|&k| (k, Vec::new())).collect();
    let mut next = 0;
    let mut extra_seed = 1000;
    loop {
        while next < graphs.len() {
            for &kind in &CUT_KINDS {
                for row in instances(&graphs[next], kind).unwrap() {
                    by_family.get_mut(kind).unwrap().push(Sample { graph: next, row });
                }
            }
            next += 1;
        }
        if by_family.values().all(|s| s.len() >= SAMPLES_PER_FAMILY) || graphs.len() >= 2000 {
            return by_family;
        }
        graphs.extend(corpus(extra_seed, 6));
        extra_seed += 1;
    }
}

fn criterion_2(audits: &[Audit], samples: &BTreeMap<&'static str, Vec<Sample>>) -> Line {
    let mut parts = Vec::new();
    let mut pass = true;
    for (kind, rows) in samples {
        let invalid = rows
            .iter()
            .filter(|s| {
                let catalog = audits[s.graph].catalog();
                !if *kind == "symmetry" { catalog.is_valid_for_canonical(&s.row) } else { catalog.is_valid(&s.row) }
            })
            .count();
        pass &= invalid == 0 && rows.len() >= SAMPLES_PER_FAMILY;
        parts.push(format!("{kind} {}/{}", rows.len() - invalid, rows.len()));
    }
    line(2, pass, format!("valid samples per family (need >= {SAMPLES_PER_FAMILY}, all valid): {}", parts.join(", ")))
}

fn criterion_3(audits: &[Audit], samples: &BTreeMap<&'static str, Vec<Sample>>) -> Line {
    let mut claims: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut report = String::new();
    let mut unreproduced = 0;
    for (kind, rows) in samples {
        for s in rows {
            let audit = &audits[s.graph];
            let Ok(cond) = audit.check_sufficient_conditions(&s.row) else { continue };
            if !cond.all_hold() {
                continue;
            }
            let entry = claims.entry(kind).or_default();
            entry.0 += 1;
            if audit.is_facet(&s.row).unwrap() {
                continue;
            }
            entry.1 += 1;
            if float_is_facet(audit, &s.row) {
                unreproduced += 1;
            }
            let g = audit.graph();
            let face = audit.face_dimension(&s.row).unwrap().affine_dim;
            let _ = writeln!(
                report,
                "n={} edges={:?} dim={} face={} | {}",
                g.n(),
                g.edges().collect::<Vec<_>>(),
                audit.ecp_dimension().affine_dim,
                face,
                row_to_text(&s.row, Vars::new(g.n()))
            );
        }
    }
    let refuted: usize = claims.values().map(|c| c.1).sum();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("facet-counterexamples.txt");
    std::fs::write(&path, &report).unwrap();
    let summary: Vec<String> = claims.iter().map(|(k, (c, r))| format!("{k} {}/{c}", c - r)).collect();
    let pass = unreproduced == 0;
    let verdict = if refuted == 0 {
        "every claimed facet confirmed".to_string()
    } else {
        format!(
            "{refuted} claimed facets refuted, {} reproduced by an independent float rank, report at {}",
            refuted - unreproduced,
            path.display()
        )
    };
    line(3, pass, format!("{verdict}; confirmed/claimed: {}", summary.join(", ")))
}

fn criterion_4(audits: &[Audit], samples: &BTreeMap<&'static str, Vec<Sample>>) -> Line {
    let mut checked = 0;
    let mut below = Vec::new();
    let mut empty_q = (0, 0, 0);
    for s in &samples["clique-neighborhood"] {
        let Family::CliqueNeighborhood { u, k, q, .. } = &s.row.family else { unreachable!() };
        let audit = &audits[s.graph];
        let n = audit.graph().n();
        if *k > n.div_ceil(2) - 1 {
            continue;
        }
        let face = audit.face_dimension(&s.row).unwrap().affine_dim;
        let bound = audit.clique_neighborhood_face_bound(*u, q);
        if q.is_empty() {
            empty_q.0 += 1;
            if face < bound {
                empty_q.1 += 1;
                empty_q.2 = empty_q.2.max(bound - face);
            }
            continue;
        }
        checked += 1;
        if face < bound {
            below.push(format!("{} (face {face} < {bound})", row_to_text(&s.row, Vars::new(n))));
        }
    }
    let pass = checked > 0 && below.is_empty();
    line(
        4,
        pass,
        format!(
            "face dimension meets the bound on {}/{checked} clique-neighborhood rows with Q nonempty and k <= ceil(n/2)-1{}; \
             with Q empty (outside the bound's setting) {} of {} rows fall short by up to {}",
            checked - below.len(),
            if below.is_empty() { String::new() } else { format!("; below: {}", below.join("; ")) },
            empty_q.1,
            empty_q.0,
            empty_q.2
        ),
    )
}

struct Run {
    n: usize,
    stats: SolveStats,
}

fn criterion_5(runs: &mut Vec<Run>) -> Line {
    let mut wrong = Vec::new();
    let mut slowest = 0.0f64;
    for i in 0..50u64 {
        let n = 5 + (i as usize % 10);
        let density = [20.0, 35.0, 50.0, 65.0, 80.0][i as usize % 5];
        let g = Graph::random(n, density, i).unwrap();
        let truth = Oracle::default().chi_eq_exact(&g).unwrap();
        for plus in [false, true] {
            let config = SolverConfig {
                enable_new_families: plus,
                time_limit: Some(60.0),
                audit_cuts: n <= 8,
                seed: i,
                ..SolverConfig::default()
            };
            let (_, stats) = solve(&g, &config);
            slowest = slowest.max(stats.time);
            if !stats.proven_optimal || stats.best_k != truth || stats.time > 60.0 {
                wrong.push(format!("n={n} d={density} seed={i} plus={plus}: {} vs {truth}", stats.best_k));
            }
            runs.push(Run { n, stats });
        }
    }
    progress("criterion 5: 50 oracle instances done");
    let mut disagree = Vec::new();
    let mut slowest_mid = 0.0f64;
    for i in 0..20u64 {
        let n = 15 + (i as usize % 6);
        let density = [30.0, 50.0, 70.0][i as usize % 3];
        let g = Graph::random(n, density, 100 + i).unwrap();
        let mut results = Vec::new();
        for plus in [false, true] {
            let config = SolverConfig { enable_new_families: plus, time_limit: Some(600.0), ..SolverConfig::default() };
            let (_, stats) = solve(&g, &config);
            slowest_mid = slowest_mid.max(stats.time);
            results.push((stats.proven_optimal, stats.best_k));
            runs.push(Run { n, stats });
        }
        if !(results[0].0 && results[1].0 && results[0].1 == results[1].1) {
            disagree.push(format!("n={n} d={density} seed={}: {results:?}", 100 + i));
        }
    }
    let pass = wrong.is_empty() && disagree.is_empty();
    line(
        5,
        pass,
        format!(
            "50 instances n<=14 match the oracle with BC and BC+ ({} wrong, slowest {slowest:.2}s of 60s); \
             20 instances 15<=n<=20 agree and finish ({} failing, slowest {slowest_mid:.2}s of 600s){}{}",
            wrong.len(),
            disagree.len(),
            if wrong.is_empty() { String::new() } else { format!("; {wrong:?}") },
            if disagree.is_empty() { String::new() } else { format!("; {disagree:?}") }
        ),
    )
}

fn criterion_6(runs: &[Run], bench: &[InstanceResult]) -> Line {
    let mut emitted = 0;
    let mut weak = 0;
    let mut decreases = 0;
    let mut audited = 0;
    let mut invalid = 0;
    let mut min_violation = f64::INFINITY;
    let all = runs
        .iter()
        .map(|r| (r.stats.cuts_by_family.values().sum::<usize>(), r.stats.min_cut_violation, r.stats.bound_decreases, r.stats.audited_cuts, r.stats.invalid_cuts, r.n))
        .chain(bench.iter().map(|r| (r.cuts_by_family.values().sum(), r.min_cut_violation, r.bound_decreases, r.audited_cuts, r.invalid_cuts, 30)));
    let mut checkable = 0;
    let mut fully_audited = 0;
    for (cuts, violation, dec, aud, inv, n) in all {
        emitted += cuts;
        if let Some(v) = violation {
            min_violation = min_violation.min(v);
            weak += usize::from(v <= 1e-5);
        }
        decreases += dec;
        audited += aud;
        invalid += inv;
        if n <= 8 {
            checkable += 1;
            fully_audited += usize::from(aud == cuts);
        }
    }
    let pass = weak == 0 && decreases == 0 && invalid == 0 && fully_audited == checkable;
    line(
        6,
        pass,
        format!(
            "{emitted} cuts over {} runs, smallest violation at emission {min_violation:.3e} (need > 1e-5); \
             {audited} cuts oracle-checked on {fully_audited}/{checkable} runs with n<=8, {invalid} invalid; \
             {decreases} LP bound decreases across cut rounds",
            runs.len() + bench.len()
        ),
    )
}

fn criterion_7() -> (Line, Vec<InstanceResult>) {
    let spec = BenchSpec {
        n: 30,
        densities: vec![30.0, 50.0, 70.0],
        seeds: 10,
        first_seed: 0,
        time_limit: 300.0,
        workers: Some(1),
        oracle_cap: None,
        exact_lp: false,
    };
    let report = bench::run(&spec, |r| {
        progress(&format!("n=30 d={} seed={} {:?}: {} nodes, {:.1}s", r.density, r.seed, r.variant, r.nodes, r.time))
    });
    let mut pass = true;
    let mut parts = Vec::new();
    for &d in &spec.densities {
        let bc = report.median_nodes(d, Variant::Bc).unwrap_or(f64::NAN);
        let plus = report.median_nodes(d, Variant::BcPlus).unwrap_or(f64::NAN);
        pass &= plus <= bc;
        parts.push(format!("d={d}: BC+ {plus} vs BC {bc}"));
    }
    let errors = report.instances.iter().filter(|r| r.error.is_some()).count();
    pass &= errors == 0;
    let unsolved = report.instances.iter().filter(|r| !r.proven_optimal).count();
    let l = line(
        7,
        pass,
        format!(
            "median nodes at n=30, 10 seeds, 300s limit: {}; {unsolved}/{} runs hit the limit, {errors} errors",
            parts.join(", "),
            report.instances.len()
        ),
    );
    (l, report.instances)
}

/// The formulation LP of every corpus graph, alone and with each family's
/// sample rows appended.
fn criterion_8(graphs: &[Graph], samples: &BTreeMap<&'static str, Vec<Sample>>) -> Line {
    let mut compared = 0;
    let mut worst = 0.0f64;
    let mut mismatched = Vec::new();
    let mut check = |inst: &LpInstance, label: String| {
        let f = lp::solve(inst);
        let e = exact::solve(inst);
        compared += 1;
        if f.status != e.status {
            mismatched.push(format!("{label}: {:?} vs {:?}", f.status, e.status));
        } else if f.status == LpStatus::Optimal {
            let gap = (f.objective_value - e.to_float().objective_value).abs();
            worst = worst.max(gap);
            if gap > 1e-6 {
                mismatched.push(format!("{label}: gap {gap:e}"));
            }
        }
    };
    for (gi, g) in graphs.iter().enumerate() {
        for strengthen in [false, true] {
            let base = LpInstance::from_model(&build_model(g, strengthen));
            check(&base, format!("graph {gi} base"));
            if !strengthen {
                continue;
            }
            for (kind, rows) in samples {
                let mut inst = base.clone();
                rows.iter().filter(|s| s.graph == gi).for_each(|s| inst.push_row(s.row.clone()));
                if inst.num_rows() > base.num_rows() {
                    check(&inst, format!("graph {gi} + {kind}"));
                }
            }
        }
    }
    let pass = mismatched.is_empty();
    line(
        8,
        pass,
        format!(
            "float vs exact simplex on {compared} relaxations with n<=7: largest objective gap {worst:.1e} (need <= 1e-6){}",
            if mismatched.is_empty() { String::new() } else { format!("; {mismatched:?}") }
        ),
    )
}

fn main() -> ExitCode {
    let wanted: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let on = |id: u8| wanted.is_empty() || wanted.contains(&id);
    let start = Instant::now();
    let mut lines = Vec::new();

    let mut graphs = corpus(0, CORPUS_GRAPHS);
    if on(1) {
        lines.push(criterion_1(&graphs));
    }
    if on(2) || on(3) || on(4) || on(8) {
        let samples = sample_rows(&mut graphs);
        let audits: Vec<Audit> = graphs.iter().map(|g| Audit::new(g, &Oracle::default()).unwrap()).collect();
        progress(&format!("{} graphs sampled", graphs.len()));
        if on(2) {
            lines.push(criterion_2(&audits, &samples));
        }
        if on(3) {
            lines.push(criterion_3(&audits, &samples));
        }
        if on(4) {
            lines.push(criterion_4(&audits, &samples));
        }
        if on(8) {
            lines.push(criterion_8(&graphs, &samples));
        }
    }
    let mut runs = Vec::new();
    if on(5) || on(6) {
        lines.push(criterion_5(&mut runs));
    }
    let mut bench_runs = Vec::new();
    if on(7) || on(6) {
        let (l, instances) = criterion_7();
        lines.push(l);
        bench_runs = instances;
    }
    if on(6) {
        lines.push(criterion_6(&runs, &bench_runs));
    }

    lines.sort_by_key(|l| l.id);
    lines.retain(|l| on(l.id));
    println!("\nacceptance summary ({:.0}s)", start.elapsed().as_secs_f64());
    for l in &lines {
        println!("  {} criterion {}", if l.pass { "PASS" } else { "FAIL" }, l.id);
    }
    if lines.iter().all(|l| l.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
