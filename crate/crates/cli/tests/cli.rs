use std::process::{Command, Output};

use serde_json::Value;

fn dmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmf")).args(args).output().expect("dmf runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = dmf(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn delta_starts_at_u_to_the_q_minus_one_with_coefficient_minus_one() {
    for (q, minus_one) in [("3", "2"), ("5", "4")] {
        let v = json(&["--q", q, "--prec", "20", "expand", "--form", "delta"]);
        assert_eq!(v["weight"], Value::from(q.parse::<u64>().unwrap().pow(2) - 1));
        let coeffs = v["coeffs"].as_array().unwrap();
        assert_eq!(coeffs.len(), 20);
        let first = coeffs.iter().position(|c| c != "0").unwrap();
        assert_eq!(first, q.parse::<usize>().unwrap() - 1);
        assert_eq!(coeffs[first], minus_one);
    }
}

#[test]
fn filtration_of_delta_is_its_weight() {
    let v = json(&["--prec", "40", "filtration", "--form", "delta"]);
    assert_eq!(v["filtration"], 8);
    assert_eq!(v["type"], 0);
    assert_eq!(v["isobaric"], serde_json::json!([[0, 2, "2"]]));
}

#[test]
fn filtration_reads_expand_output_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g1p.json");
    let out = dmf(&[
        "--format", "json", "--prec", "40", "--out", path.to_str().unwrap(),
        "expand", "--form", "g1^4",
    ]);
    assert!(out.status.success());
    let v = json(&["--prec", "40", "filtration", "--form", path.to_str().unwrap()]);
    // g1^{q+1} ≡ 1 has filtration 0 while its weight is 8.
    assert_eq!(v["weight"], 8);
    assert_eq!(v["filtration"], 0);
}

#[test]
fn zero_class_filtration_is_minus_infinity() {
    let v = json(&["--prec", "40", "filtration", "--form", "T*delta"]);
    assert_eq!(v["filtration"], "-inf");
}

#[test]
fn operators_report_weights() {
    let v = json(&["--prec", "20", "op", "theta", "--in", "delta"]);
    assert_eq!(v["weight"], 10);
    let v = json(&["--prec", "20", "op", "w", "--in", "plus(delta)"]);
    assert_eq!(v["eigenvalue"], 1);
    let v = json(&["--prec", "20", "op", "trace", "--in", "estar"]);
    assert!(v["coeffs"].as_array().unwrap().iter().all(|c| c == "0"));
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = dmf(&["--prec", "60", "verify", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&["--prec", "60", "verify", "--suite", "operators"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn proof_trace_replays_the_counterexample() {
    let v = json(&["--prec", "40", "proof-trace"]);
    assert_eq!(v["outcome"], "filtration_drop");
    assert_eq!(v["filtration_f"], 8);
    assert_eq!(v["hypothesis_holds"], false);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(dmf(&["--pi", "T^3", "expand", "--form", "delta"]).status.code(), Some(2));
    assert_eq!(dmf(&["--q", "4", "expand", "--form", "delta"]).status.code(), Some(2));
    assert_eq!(dmf(&["--q", "9", "--r", "3", "expand", "--form", "delta"]).status.code(), Some(2));
    assert_eq!(dmf(&["--q", "3", "--r", "2", "--prec", "12", "expand", "--form", "h"]).status.code(), Some(0));
    assert_eq!(dmf(&["expand", "--form", "delta+"]).status.code(), Some(2));
    assert_eq!(dmf(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(dmf(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn violated_premise_exits_one() {
    let out = dmf(&["--prec", "30", "proof-trace", "--f", "plus(delta)", "--g", "g1^5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = dmf(&["--format", "json", "--prec", "60", "--jobs", "1", "verify"]);
    let b = dmf(&["--format", "json", "--prec", "60", "--jobs", "4", "verify"]);
    assert_eq!(a.stdout, b.stdout);
    let c = dmf(&["--format", "json", "--prec", "50", "--jobs", "3", "expand", "--form", "plus(g1^3*delta)"]);
    let d = dmf(&["--format", "json", "--prec", "50", "expand", "--form", "plus(g1^3*delta)"]);
    assert_eq!(c.stdout, d.stdout);
}
