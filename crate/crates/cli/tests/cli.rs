use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn liptree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liptree"))
        .args(args)
        .env_remove("LIPTREE_VERTEX_CAP")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn weights_prints_hierarchy() {
    let out = liptree(&["weights", "--k", "2", "--x", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let ones: Vec<f64> = report["lambda"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(ones, vec![1.0, 1.0, 1.0]);
}

#[test]
fn weights_rejects_domain() {
    let out = liptree(&["weights", "--k", "2", "--x", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn embedding_suite_exits_zero() {
    let out = liptree(&[
        "verify", "--suite", "embedding", "--trials", "100", "--seed", "1", "--branching", "2", "--depth", "8",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["passed"], Value::Bool(true));
    assert_eq!(report["seed"], 1);
}

#[test]
fn constant_symbol_nu_tail_grows() {
    let out = liptree(&["analyze", "--symbol-expr", "1", "--m", "0", "--n", "1", "--depth", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["tail"]["nu"], "growing");
    assert_eq!(report["tail"]["method"], "heuristic");
    // ν(v) = |v|
    let nu: Vec<f64> = report["profile"]["nu_by_depth"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(nu, (1..=12).map(f64::from).collect::<Vec<_>>());
}

#[test]
fn malformed_symbol_json_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"kind": "radial", "expr": }"#).unwrap();
    let out = liptree(&["analyze", "--symbol", path.to_str().unwrap(), "--m", "1", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1 column"), "{stderr}");
}

#[test]
fn bad_expression_and_flags_exit_two() {
    let out = liptree(&["analyze", "--symbol-expr", "log(", "--m", "1", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = liptree(&["analyze", "--symbol-expr", "1", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = liptree(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = liptree(&["testfn", "--kind", "f_v", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn vertex_cap_flag_and_env() {
    let out = liptree(&["verify", "--suite", "testfns", "--depth", "8", "--vertex-cap", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_liptree"))
        .args(["verify", "--suite", "testfns", "--depth", "8"])
        .env("LIPTREE_VERTEX_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_liptree"))
        .args(["verify", "--suite", "testfns", "--depth", "8", "--vertex-cap", "1000"])
        .env("LIPTREE_VERTEX_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["weights", "embedding", "pointbound", "testfns", "sandwich", "isometry", "tails"] {
        let mut reports = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{suite}-{run}.json"));
            let out = liptree(&[
                "verify", "--suite", suite, "--trials", "20", "--seed", "42", "--depth", "6",
                "--out", path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0), "{suite}");
            reports.push(fs::read(&path).unwrap());
        }
        assert_eq!(reports[0], reports[1], "{suite}");
    }
}

#[test]
fn analyze_writes_profile_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let out = liptree(&[
        "analyze", "--symbol-expr", "1/ell(1,x)", "--m", "1", "--n", "0", "--depth", "6", "--exact", "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["depth", "mu_max", "nu_max"]);
    assert_eq!(reader.records().count(), 6);
    let report = json(&out);
    let exact = num(&report["exact"]["value"]);
    assert!(num(&report["bounds"]["lower"]) <= exact + 1e-9);
    assert!(exact <= num(&report["bounds"]["upper"]) + 1e-9);
}

#[test]
fn exact_norm_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chi.json");
    fs::write(&path, r#"{"kind": "tabulated", "values": [[1, 0], 0, 0, 0, 0, 0, 0]}"#).unwrap();
    let out = liptree(&[
        "exact-norm", "--symbol", path.to_str().unwrap(), "--m", "1", "--n", "0", "--depth", "6", "--trials", "500",
        "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(num(&report["solution"]["value"]), 2.0);
    assert!(num(&report["oracle"]["value"]) <= 2.0 + 1e-9);
    assert_eq!(report["passed"], Value::Bool(true));
}

#[test]
fn testfn_emits_normalized_function() {
    let out = liptree(&["testfn", "--kind", "f_v", "--vertex", "0/1/0", "--m", "2", "--depth", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!((num(&report["norm"]["seminorm"]) - 1.0).abs() < 1e-12);
    assert_eq!(report["function"]["values"].as_array().unwrap().len(), 63);
}
