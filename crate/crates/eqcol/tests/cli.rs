use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eqcol_core::Graph;
use serde_json::Value;

fn eqcol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqcol")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn load_valid(path: &Path, schema_name: &str) -> Value {
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = schema(schema_name);
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
    value
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, g.to_dimacs(None)).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_c5() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "c5.col", &Graph::cycle(5));
    let out = dir.path().join("c5.json");
    let o = eqcol(&["solve", s(&graph), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("chi_eq = 3\n"), "{}", stdout(&o));
    let record = load_valid(&out, "run-record.schema.json");
    assert_eq!(record["optimum"], 3);
    assert_eq!(record["command"], "solve");
    assert_eq!(record["checks"]["oracle_chi_eq"], 3);
    assert_eq!(record["config"]["enable_new_families"], true);
}

#[test]
fn no_new_cuts_selects_bc() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = eqcol(&["solve", "--random", "16,50,4", "--no-new-cuts", "--log-nodes", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("solver    BC, seed 0"));
    let record = load_valid(&out, "run-record.schema.json");
    assert_eq!(record["config"]["enable_new_families"], false);
    assert_eq!(record["density"], 50.0);
    for family in record["stats"]["cuts_by_family"].as_object().unwrap().keys() {
        assert!(["clique", "block", "symmetry"].contains(&family.as_str()), "{family}");
    }
    assert!(!record["stats"]["node_log"].as_array().unwrap().is_empty());
}

#[test]
fn time_limit_returns_the_incumbent_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = eqcol(&["solve", "--random", "30,50,2", "--time-limit", "1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("limit reached"));
    let record = load_valid(&out, "run-record.schema.json");
    assert_eq!(record["optimum"], Value::Null);
    assert_eq!(record["checks"]["coloring_valid"], true);
    assert_eq!(record["stats"]["proven_optimal"], false);
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.col");
    std::fs::write(&bad, "p edge 3 1\ne 1 4\n").unwrap();
    let o = eqcol(&["solve", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert_eq!(eqcol(&["solve", s(&dir.path().join("missing.col"))]).status.code(), Some(1));
    assert_eq!(eqcol(&["solve", "--random", "5,50"]).status.code(), Some(1));
    assert_eq!(eqcol(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(eqcol(&["solve", "--random", "5,50,1", "--time-limit", "0"]).status.code(), Some(1));
    assert_eq!(eqcol(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_c5_and_k33() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write_graph(dir.path(), "c5.col", &Graph::cycle(5));
    let out = dir.path().join("v.json");
    let o = eqcol(&["verify", s(&c5), "--family", "clique", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("dimension  21 "), "{}", stdout(&o));
    let record = load_valid(&out, "run-record.schema.json");
    assert_eq!(record["verification"]["dimension"], 21);
    assert!(record["verification"]["rows"].as_array().unwrap().iter().all(|r| r["valid"] == true));

    let k33 = write_graph(dir.path(), "k33.col", &Graph::complete_bipartite(3, 3));
    let o = eqcol(&["verify", s(&k33)]);
    assert!(stdout(&o).contains("A(G)       {1,3}\n"), "{}", stdout(&o));
    assert!(stdout(&o).contains("dimension  32 "));
}

#[test]
fn verify_surfaces_invalid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write_graph(dir.path(), "c5.col", &Graph::cycle(5));
    let rows = dir.path().join("rows.txt");
    // The second row claims two adjacent vertices never share color 1 with
    // a third one, which is fine; the third forbids color 3 outright.
    std::fs::write(
        &rows,
        "# audited rows\nclique q={1,2} j=1 : +1 x1_1 +1 x2_1 -1 w1 <= 0\n\ncustom name=corrupt : +1 w3 <= 0\n",
    )
    .unwrap();
    let out = dir.path().join("v.json");
    let o = eqcol(&["verify", s(&c5), "--rows", s(&rows), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("INVALID"));
    let record = load_valid(&out, "run-record.schema.json");
    let verdicts = record["verification"]["rows"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert_eq!(verdicts[0]["valid"], true);
    assert_eq!(verdicts[1]["valid"], false);

    std::fs::write(&rows, "clique q={1,2} j=1 : +1 x9_1 <= 0\n").unwrap();
    let o = eqcol(&["verify", s(&c5), "--rows", s(&rows)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
}

#[test]
fn verify_refuses_graphs_above_the_cap() {
    let o = eqcol(&["verify", "--random", "9,50,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("oracle cap"));
    let o = eqcol(&["verify", "--random", "6,50,1", "--family", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.col");
    let b = dir.path().join("b.col");
    assert_eq!(eqcol(&["generate", "--random", "40,30,5", "--out", s(&a)]).status.code(), Some(0));
    assert_eq!(eqcol(&["generate", "--random", "40,30,5", "--out", s(&b)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let parsed = Graph::parse_dimacs(&text).unwrap();
    assert_eq!(parsed, Graph::random(40, 30.0, 5).unwrap());
    let piped = eqcol(&["generate", "--random", "40,30,5"]);
    assert_eq!(stdout(&piped), text);
}

#[test]
fn generated_edge_count_is_plausible() {
    // G(70, 1/2): 2415 pairs, standard deviation about 24.6; allow 5 of them.
    let o = eqcol(&["generate", "--random", "70,50,11"]);
    let g = Graph::parse_dimacs(&stdout(&o)).unwrap();
    assert!((1084..=1331).contains(&g.num_edges()), "{}", g.num_edges());
}

#[test]
fn benchmark_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("b.toml");
    std::fs::write(&spec, "n = 8\ndensities = [10, 30, 50, 70, 90]\nseeds = 2\ntime_limit = 60\n").unwrap();
    let csv = dir.path().join("b.csv");
    let json = dir.path().join("b.json");
    let o = eqcol(&["benchmark", s(&spec), "--csv", s(&csv), "--out", s(&json), "--workers", "2", "--oracle-cap", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.split(',').count() == 7));
    let report = load_valid(&json, "benchmark.schema.json");
    let instances = report["instances"].as_array().unwrap();
    assert_eq!(instances.len(), 20);
    assert!(instances.iter().all(|r| r["invalid_cuts"] == 0 && r["coloring_valid"] == true));

    let again = dir.path().join("c.json");
    let o = eqcol(&["benchmark", s(&spec), "--csv", s(&dir.path().join("c.csv")), "--out", s(&again)]);
    assert_eq!(o.status.code(), Some(0));
    let second = load_valid(&again, "benchmark.schema.json");
    let strip = |v: &Value| -> Vec<Value> {
        v["instances"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.as_object_mut().unwrap().remove("time");
                r.as_object_mut().unwrap().remove("audited_cuts");
                r
            })
            .collect()
    };
    assert_eq!(strip(&report), strip(&second));

    std::fs::write(&spec, "n = 10\ndensities = [10]\nseeds = 0\ntime_limit = 60\n").unwrap();
    assert_eq!(eqcol(&["benchmark", s(&spec)]).status.code(), Some(1));
}
