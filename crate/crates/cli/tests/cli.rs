use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn omq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omq")).args(args).env_remove("OMQ_BUDGET").output().expect("runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = omq(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn lattice_check_files() {
    let out = omq(&["lattice-check", &data("mo2.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS lattice-check: 6 elements"));

    let out = omq(&["lattice-check", &data("o6.json")]);
    assert_ne!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("orthomodular law fails: a <= b"), "{}", stdout(&out));

    let (code, v) = json(&["lattice-check", "--lattice", &data("malformed.json")]);
    assert_ne!(code, 0);
    assert_eq!(v["valid"], false);
    assert!(v["error"].as_str().unwrap().starts_with("lattice file"));
}

#[test]
fn impl_tables() {
    let (code, v) = json(&["impl-table", "--gen", "mo:2", "--impl", "poly:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"][1], serde_json::json!(["a'", "1", "a'", "a'", "a'", "1"]));

    for j in 0..6 {
        let (_, v) = json(&["impl-table", "--gen", "boolean:1", "--impl", &j.to_string()]);
        assert_eq!(v["rows"], serde_json::json!([["1", "1"], ["0", "1"]]), "poly:{j}");
    }

    let (_, v) = json(&["impl-table", "--lattice", &data("mo2.json"), "--impl", "poly:5"]);
    let col0: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r[0].as_str().unwrap()).collect();
    assert_eq!(col0, ["1", "a'", "a", "b'", "b", "0"]);

    let out = omq(&["impl-table", "--gen", "mo:2", "--impl", "twisted:1,1.0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_values() {
    let cases = [
        (vec!["--let", "u={{}: a}"], "u = u", "1"),
        (vec!["--let", "u={{}: a}", "--let", "v={{}: b}"], "com(u, v)", "0"),
        (vec!["--let", "u={{}: a}"], "not (u = u)", "0"),
        (vec![], "exists x (x = x)", "1"),
        (vec!["--let", "u={{}: a}"], "{} in u", "a"),
    ];
    for (lets, f, want) in cases {
        let mut args = vec!["eval", "--gen", "mo:2"];
        args.extend(lets.iter().copied());
        args.push(f);
        let (code, v) = json(&args);
        assert_eq!(code, 0);
        assert_eq!(v["value"], want, "{f}");
        assert_eq!(v["config"]["formula"], f);
    }
    let out = omq(&["eval", "--gen", "mo:2", "x in y"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unbound"));
}

#[test]
fn verify_examples() {
    let (code, v) = json(&["verify", "--suite", "commutator"]);
    assert_eq!(code, 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 7);

    let (code, v) = json(&["verify", "--gen", "mo:2", "--suite", "transfer", "--rank", "2"]);
    assert_eq!(code, 0);
    assert!(v["reports"][0]["params"]["scope"].as_str().unwrap().contains("not asserted"));

    let (code, v) = json(&["verify", "--gen", "mo:2", "--suite", "demorgan-bounded", "--impl", "poly:3"]);
    assert_eq!(code, 0);
    let r = &v["reports"][0];
    assert_eq!(r["params"]["poly:3 bounded law"], "counterexample found");
    assert!(r["witnesses"].as_array().unwrap().iter().any(|w| w["failure"] == false));
}

#[test]
fn verify_is_deterministic() {
    let args = ["--format", "json", "verify", "--gen", "mo:2", "--suite", "restriction", "--suite", "demonstrator", "--seed", "7"];
    let a = omq(&args);
    let b = omq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["suites"], serde_json::json!(["restriction", "demonstrator"]));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_omq"))
        .args(["verify", "--gen", "mo:2", "--suite", "equality"])
        .env("OMQ_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget of 5"));
    let out = omq(&["verify", "--gen", "mo:2", "--suite", "equality", "--budget", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_witness() {
    let (code, v) = json(&["matrix", "--theta", &std::f64::consts::FRAC_PI_2.to_string()]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let re = v["witness"]["overlap_one_phi"][0].as_f64().unwrap();
    assert!((re - 3f64.sqrt() / 2.0).abs() < 1e-12);

    assert_ne!(omq(&["matrix", "--theta", "0"]).status.code(), Some(0));

    let (code, v) = json(&["matrix", "--relations", "--dims", "3", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);

    let (_, v) = json(&["matrix", "--j", "3", "--i", "1"]);
    assert!(v["requested"]["nearest_polynomial_distance"].as_f64().unwrap() > 1e-6);
}
