mod common;

use common::{fixture, run_cli, schema, validate};
use serde_json::{json, Value};

fn spec(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn stdout_json(out: &std::process::Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn csv_rows(out: &std::process::Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn col(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn build_power_poly_spec() {
    let out = run_cli(&["build", "--spec", &spec("worked_example.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    validate(&schema("build"), &doc).unwrap();
    let nodes: Vec<f64> = doc["operator"]["nodes"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let expected = [0.0, 0.25, 3.0 / 7.0, 2.0 / 3.0, 1.0];
    for (a, b) in nodes.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn build_rational_backend_is_exact() {
    let out = run_cli(&["build", "--spec", &spec("worked_example.json"), "--backend", "rational"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    validate(&schema("build"), &doc).unwrap();
    assert_eq!(doc["operator"]["nodes"], json!(["0", "1/4", "3/7", "2/3", "1"]));
    assert_eq!(doc["operator"]["delta_n"], json!("1/3"));
    assert_eq!(doc["operator"]["alpha"], json!(["1", "4", "7", "6", "2"]));
}

#[test]
fn build_from_nodes_reports_gamma() {
    let out = run_cli(&["build", "--spec", &spec("nodes.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["operator"]["gamma"], json!([1.0, 3.0, 1.0]));
}

#[test]
fn build_csv_table() {
    let out = run_cli(&["build", "--spec", &spec("worked_example.json"), "--backend", "rational", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "k,node,alpha,gamma\n0,0,1,1\n1,1/4,4,3\n2,3/7,7,4\n3,2/3,6,2\n4,1,2,\n");
}

#[test]
fn w_violation_exit_code_and_report() {
    for args in [
        vec!["build"],
        vec!["converge", "--f", "e2"],
        vec!["voronovskaja", "--f", "e2", "--x", "0.5"],
        vec!["certify"],
    ] {
        let mut full = args.clone();
        let path = spec("phi_abs_violation.json");
        full.extend(["--spec", &path]);
        let out = run_cli(&full);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let doc = stdout_json(&out);
        validate(&schema("violation"), &doc).unwrap();
        assert_eq!(doc["violation"]["index"], json!(1));
    }
}

#[test]
fn input_errors_exit_one() {
    let cases: Vec<Vec<String>> = vec![
        vec!["build".into(), "--spec".into(), spec("malformed.json")],
        vec!["build".into(), "--spec".into(), "/nonexistent/spec.json".into()],
        vec!["build".into()],
        vec!["converge".into(), "--spec".into(), spec("classical.json"), "--f".into(), "tan".into()],
        vec!["converge".into(), "--spec".into(), spec("nodes.json"), "--f".into(), "e2".into(), "--n-list".into(), "4,5".into()],
        vec!["voronovskaja".into(), "--spec".into(), spec("classical.json"), "--f".into(), "e2".into(), "--x".into(), "0".into()],
        vec!["voronovskaja".into(), "--spec".into(), spec("classical.json"), "--f".into(), "abs_half".into(), "--x".into(), "0.5".into()],
        vec!["build".into(), "--spec".into(), spec("sqrt_nodes.json"), "--backend".into(), "rational".into(), "--n-list".into(), "1".into()],
        vec!["certify".into(), "--spec".into(), spec("classical.json"), "--suite".into(), "everything".into()],
        vec!["certify".into(), "--spec".into(), spec("classical.json"), "--grid".into(), "1".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run_cli(&refs);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn rational_backend_degree_limit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(&path, r#"{"mode":"family","n":65,"payload":{"kind":"classical"},"backend":"rational"}"#).unwrap();
    let out = run_cli(&["build", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = run_cli(&["build", "--spec", path.to_str().unwrap(), "--backend", "float"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn help_and_version() {
    assert_eq!(run_cli(&["--help"]).status.code(), Some(0));
    let out = run_cli(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn converge_sqrt_nodes_decreases() {
    let out = run_cli(&["converge", "--spec", &spec("sqrt_nodes.json"), "--f", "sin_pi", "--n-list", "16,64,256"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    let err = col(&rows, 2);
    assert!(err[0] > err[1] && err[1] > err[2]);
    let bound = col(&rows, 3);
    assert!(err.iter().zip(&bound).all(|(e, b)| e <= b));
    assert_eq!(col(&rows, 1), vec![0.25, 0.125, 0.0625]);
}

#[test]
fn converge_classical_examples() {
    let out = run_cli(&["converge", "--spec", &spec("classical.json"), "--f", "e2"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[0][0], "10");
    assert!((col(&rows, 2)[0] - 0.025).abs() < 1e-15);
    let out = run_cli(&["converge", "--spec", &spec("classical.json"), "--f", "e1", "--n-list", "3,17,40"]);
    assert!(col(&csv_rows(&out), 2).iter().all(|e| *e <= 1e-12));
    let out = run_cli(&["converge", "--spec", &spec("classical.json"), "--f", "e1", "--format", "json"]);
    validate(&schema("converge"), &stdout_json(&out)).unwrap();
}

#[test]
fn voronovskaja_examples() {
    let out = run_cli(&["voronovskaja", "--spec", &spec("sqrt_nodes.json"), "--f", "e2", "--x", "0.5", "--n-list", "4,16,64"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(col(&csv_rows(&out), 1).iter().all(|r| (r - 1.0).abs() < 1e-12));

    let out = run_cli(&["voronovskaja", "--spec", &spec("classical.json"), "--f", "exp", "--x", "0.5", "--n-list", "256"]);
    let rows = csv_rows(&out);
    assert!((col(&rows, 1)[0] - 0.5f64.exp() / 2.0).abs() <= 0.02);
    assert!(col(&rows, 3)[0] <= col(&rows, 4)[0]);

    let out = run_cli(&["voronovskaja", "--spec", &spec("sqrt_nodes.json"), "--f", "e3", "--x", "0.5", "--n-list", "64", "--format", "json"]);
    let doc = stdout_json(&out);
    validate(&schema("voronovskaja"), &doc).unwrap();
    let ratio = doc["rows"][0]["ratio"].as_f64().unwrap();
    assert!((0.0..=3.0).contains(&ratio));
}

#[test]
fn certify_examples() {
    let out = run_cli(&["certify", "--spec", &spec("worked_example.json"), "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    validate(&schema("certify"), &doc).unwrap();
    assert_eq!(doc["certified"], json!(true));
    assert_eq!(doc["certificates"].as_array().unwrap().len(), 5 + 12);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b32.json");
    std::fs::write(&path, r#"{"mode":"family","n":32,"payload":{"kind":"classical"}}"#).unwrap();
    let out = run_cli(&["certify", "--spec", path.to_str().unwrap(), "--suite", "moments"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run_cli(&["certify", "--spec", &spec("classical.json"), "--suite", "bounds", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("inequality,worst_slack,x,tolerance,holds\n"));
    assert!(text.contains("phi_node_gap_bound"));

    let out = run_cli(&["certify", "--spec", &spec("worked_example.json"), "--suite", "moments", "--backend", "rational", "--grid", "101"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reruns_are_byte_identical() {
    let runs: Vec<Vec<String>> = vec![
        vec!["build".into(), "--spec".into(), spec("worked_example.json"), "--backend".into(), "rational".into()],
        vec!["converge".into(), "--spec".into(), spec("sqrt_nodes.json"), "--f".into(), "exp".into(), "--n-list".into(), "9,25".into()],
        vec!["voronovskaja".into(), "--spec".into(), spec("classical.json"), "--f".into(), "sin_pi".into(), "--x".into(), "0.3".into()],
        vec!["certify".into(), "--spec".into(), spec("worked_example.json")],
        vec!["build".into(), "--spec".into(), spec("phi_abs_violation.json")],
    ];
    for args in runs {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run_cli(&refs);
        let b = run_cli(&refs);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run_cli(&["build", "--spec", &spec("nodes.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    validate(&schema("build"), &doc).unwrap();
}

#[test]
fn validator_rejects_bad_documents() {
    let s = schema("build");
    assert!(validate(&s, &json!({})).is_err());
    let good = stdout_json(&run_cli(&["build", "--spec", &spec("nodes.json")]));
    let mut bad = good.clone();
    bad["header"]["tool"] = json!("other");
    assert!(validate(&s, &bad).is_err());
    let mut bad = good.clone();
    bad["extra"] = json!(1);
    assert!(validate(&s, &bad).is_err());
    let mut bad = good;
    bad["operator"]["n"] = json!(1.5);
    assert!(validate(&s, &bad).is_err());
}
