use std::process::{Command, Output};

use serde_json::Value;

fn symdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn params_projective() {
    let out = symdet(&[
        "params",
        "--q",
        "3",
        "--m",
        "3",
        "--t",
        "1",
        "--variant",
        "projective",
        "--no-timing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["n"], 13);
    assert_eq!(v["results"]["k"], 6);
    assert!(v["runtime_ms"].is_null());
}

#[test]
fn weight_anchor() {
    let out = symdet(&[
        "weight",
        "--q",
        "3",
        "--m",
        "3",
        "--t",
        "2",
        "--k",
        "3",
        "--delta-class",
        "square",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"][0]["weight"], 180);
    assert_eq!(v["results"][0]["agree"], true);
}

#[test]
fn weight_csv_rows() {
    let out = symdet(&[
        "weight", "--q", "3", "--m", "2", "--t", "1", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,m,t,k,delta_class,weight,method"));
    assert!(lines.count() >= 4);
}

#[test]
fn verify_passes() {
    let out = symdet(&["verify", "--q", "3", "--m", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn mindist_even_rank() {
    let out = symdet(&["mindist", "--q", "3", "--m", "3", "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["affine"], 162);
}

#[test]
fn budget_exceeded_exits_3() {
    let out = symdet(&[
        "spectrum", "--q", "3", "--m", "4", "--t", "2", "--budget", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(symdet(&["params", "--q", "4"]).status.code(), Some(2));
    assert_eq!(symdet(&["params", "--q", "2"]).status.code(), Some(2));
    assert_eq!(
        symdet(&["params", "--format", "xml"]).status.code(),
        Some(2)
    );
}

#[test]
fn misprinted_table_exits_1() {
    let out = symdet(&["tables", "--q", "3", "--m", "4", "--format", "md"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checks failed"));
}

#[test]
fn table_m3_exits_0() {
    let out = symdet(&["tables", "--q", "3", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = symdet(&[
        "conjecture",
        "--q",
        "3",
        "--m",
        "3",
        "--t",
        "1",
        "--no-timing",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "conjecture");
}

#[test]
fn no_timing_output_is_stable() {
    let args = [
        "spectrum",
        "--q",
        "3",
        "--m",
        "3",
        "--t",
        "2",
        "--no-timing",
    ];
    assert_eq!(symdet(&args).stdout, symdet(&args).stdout);
}
