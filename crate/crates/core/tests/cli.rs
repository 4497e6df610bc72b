use std::process::{Command, Output};

use serde_json::Value;

fn kkv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kkv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let o = kkv(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn table_matches_known_values() {
    let v = json(&["table", "--hmax", "4", "--format", "json"]);
    let rows: Vec<Vec<String>> = v["rows"].as_array().unwrap().iter().map(strings).collect();
    assert_eq!(rows[0], ["1", "24", "324", "3200", "25650"]);
    assert_eq!(rows[1], ["0", "-2", "-54", "-800", "-8550"]);
    assert_eq!(rows[4], ["0", "0", "0", "0", "5"]);
}

#[test]
fn table_single_entry_csv() {
    let o = kkv(&["table", "--hmax", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "g,h=0\n0,1\n");
}

#[test]
fn invalid_config_exits_2() {
    assert_eq!(kkv(&["table", "--hmax", "-1"]).status.code(), Some(2));
    assert_eq!(kkv(&["check", "--umax", "0"]).status.code(), Some(2));
    assert_eq!(kkv(&["mnop-check", "--umax", "3"]).status.code(), Some(2));
    assert_eq!(kkv(&["pairs", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(kkv(&["pairs", "--d", "0"]).status.code(), Some(2));
    assert_eq!(kkv(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn gw_single_state_cubes() {
    let v = json(&["gw", "--h", "0", "--dmax", "3", "--single-state", "--format", "json"]);
    let genus0: Vec<&str> = v["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["g"] == 0)
        .map(|e| e["value"].as_str().unwrap())
        .collect();
    assert_eq!(genus0, ["1", "1/8", "1/27"]);
}

#[test]
fn gw_from_kkv_data() {
    let v = json(&["gw", "--h", "0", "--dmax", "1", "--format", "json"]);
    assert_eq!(v["invariants"][0]["value"], "1");
    let v = json(&["gw", "--h", "-4", "--dmax", "2", "--format", "json"]);
    assert!(v["invariants"].as_array().unwrap().iter().all(|e| e["value"] == "0"));
}

#[test]
fn pairs_primitive_functions() {
    let v = json(&["pairs", "--h", "0", "--d", "1", "--qmax", "4", "--format", "json", "--check-symmetry"]);
    assert_eq!(strings(&v["function"]["numerator"]), ["0", "1"]);
    assert_eq!(strings(&v["function"]["denominator"]), ["1", "2", "1"]);
    assert_eq!(v["expansion"]["min_degree"], 1);
    assert_eq!(strings(&v["expansion"]["coefficients"]), ["1", "-2", "3", "-4"]);
    assert_eq!(v["symmetric"], true);

    // 24q/(1+q)^2 - 2 over the denominator (1+q)^2
    let v = json(&["pairs", "--h", "1", "--d", "1", "--format", "json"]);
    assert_eq!(strings(&v["function"]["numerator"]), ["-2", "20", "-2"]);
    assert_eq!(strings(&v["function"]["denominator"]), ["1", "2", "1"]);
}

#[test]
fn pairs_pretty_symmetry_line() {
    let o = kkv(&["pairs", "--h", "0", "--d", "1", "--check-symmetry"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("q - 2*q^2 + 3*q^3"), "{out}");
    assert!(out.contains("symmetric: true"), "{out}");
}

#[test]
fn mnop_check_passes() {
    let v = json(&["mnop-check", "--d", "2", "--h", "1", "--umax", "8", "--format", "json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["gw"], v["pairs"]);
}

#[test]
fn yau_zaslow_agrees() {
    let v = json(&["yau-zaslow", "--hmax", "6", "--format", "json"]);
    assert_eq!(v["agree"], true);
    assert_eq!(strings(&v["eta_product"]["coefficients"])[..5], ["1", "24", "324", "3200", "25650"]);
}

#[test]
fn nl_demo_is_deterministic() {
    let a = json(&["nl-demo", "--seed", "11", "--format", "json"]);
    let b = json(&["nl-demo", "--seed", "11", "--format", "json"]);
    assert_eq!(a, b);
    assert_eq!(a["passed"], true);
}

#[test]
fn check_default_passes() {
    let o = kkv(&["check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn check_reports_injected_fault() {
    let o = kkv(&["check", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("mnop-grid") && err.contains("(d=2, h=1)") && err.contains("u^"), "{err}");
}

#[test]
fn out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = kkv(&["table", "--hmax", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().nth(1), Some("0,1,24,324"));
}
