use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_bautin-arcs");

fn dir(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn file(d: &PathBuf, name: &str, text: &str) -> String {
    let p = d.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("BAUTIN_ARCS_THREADS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn error_kind(o: &Output) -> String {
    stdout_json(o)["error"]["kind"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn order_of_i13_families_through_files() {
    let d = dir("i13");
    let a = file(
        &d,
        "a.json",
        r#"{"family": "I13_A", "symbols": {"l1_3": 1, "l5_2": 1, "l4_1": 1, "l3_1": 2, "l6_1": 1, "l2_1": 0}}"#,
    );
    let o = run(&["order", "--family", &a]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["command"], "order");
    assert_eq!(r["outputs"]["order"], 3);
    assert_eq!(
        r["outputs"]["point"],
        serde_json::json!(["1", "1", "1", "1"])
    );
    assert_eq!(r["seed"], Value::Null);

    let b = file(
        &d,
        "b.json",
        r#"{"family": "I13_B", "symbols": {"l1_4": 1, "l5_3": 1, "l4_2": 1, "l3_1": 2, "l6_1": 1, "l2_1": 0}}"#,
    );
    let r = stdout_json(&run(&["order", "--family", &b]));
    assert_eq!(r["outputs"]["order"], 4);
    assert_eq!(
        r["outputs"]["point"],
        serde_json::json!(["1", "1", "0", "1"])
    );
}

#[test]
fn order_with_ideal_file() {
    let d = dir("ak");
    let ideal = file(
        &d,
        "ideal.json",
        r#"{"vars": ["x", "y"], "generators": ["x", "y^3"]}"#,
    );
    let arc = file(
        &d,
        "arc.json",
        r#"{"truncation": 6, "vars": {"x": ["0", "0", "1"], "y": [0, 1]}}"#,
    );
    let o = run(&["order", "--ideal", &ideal, "--arc", &arc]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["outputs"]["order"], 2);
    assert_eq!(r["outputs"]["point"], serde_json::json!(["1", "0"]));

    let zero = file(
        &d,
        "zero.json",
        r#"{"truncation": 4, "vars": {"x": [], "y": []}}"#,
    );
    let o = run(&["order", "--ideal", &ideal, "--arc", &zero]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["outputs"]["order"], Value::Null);
}

#[test]
fn input_errors_exit_one_with_json() {
    let d = dir("errors");
    let arc = file(&d, "arc.json", r#"{"truncation": 2, "vars": {"x": [1]}}"#);
    let empty = file(&d, "empty.json", r#"{"vars": ["x"], "generators": []}"#);
    let o = run(&["order", "--ideal", &empty, "--arc", &arc]);
    assert_eq!(code(&o), 1);
    assert_eq!(error_kind(&o), "parse");

    let bad = file(
        &d,
        "bad.json",
        "{\"truncation\": 2,\n \"vars\": {\"x\": [\"1/0\"]}}",
    );
    let o = run(&["order", "--ideal", &empty, "--arc", &bad]);
    assert_eq!(code(&o), 1);
    let msg = stdout_json(&o)["error"]["message"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(msg.contains("line 2"), "{msg}");

    let o = run(&["order", "--arc", "/nonexistent/arc.json", "--ideal", &empty]);
    assert_eq!(code(&o), 1);
    assert_eq!(error_kind(&o), "input");

    let o = run(&["order", "--arc", &arc]);
    assert_eq!(code(&o), 1);

    let o = run(&["tables"]);
    assert_eq!(code(&o), 1);
    assert_eq!(error_kind(&o), "usage");

    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 1);
    assert_eq!(error_kind(&o), "usage");

    let o = run(&["melnikov", "--arc", &arc, "--h-list", "0.1,-2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn thread_variable_is_validated() {
    let o = Command::new(BIN)
        .args(["dulac"])
        .env("BAUTIN_ARCS_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert_eq!(error_kind(&o), "input");
    let o = Command::new(BIN)
        .args(["dulac"])
        .env("BAUTIN_ARCS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn seeded_commands_are_byte_identical() {
    let a = run(&["tables", "--seed", "7", "--trials", "16"]);
    let b = run(&["tables", "--seed", "7", "--trials", "16"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r = stdout_json(&a);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["outputs"]["rows"].as_array().unwrap().len(), 10);

    let c = run(&["closures", "--seed", "3"]);
    assert_eq!(code(&c), 0);
    assert_eq!(c.stdout, run(&["closures", "--seed", "3"]).stdout);
}

#[test]
fn ak_commands() {
    let d = dir("ak_cmd");
    let arc = file(
        &d,
        "arc.json",
        r#"{"truncation": 8, "vars": {"x": [0, 0, 0, 2], "y": [0, 3]}}"#,
    );
    let o = run(&["ak", "--k", "2", "--arc", &arc]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["outputs"]["component"], 3);
    assert_eq!(r["outputs"]["point"], serde_json::json!(["2", "27"]));

    let o = run(&["ak", "--k", "3", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout_json(&o)["outputs"]["components"],
        serde_json::json!([4])
    );

    // One sample cannot span P¹.
    let o = run(&["ak", "--k", "1", "--seed", "5", "--trials", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(error_kind(&o), "undetermined");
}

#[test]
fn status_codes() {
    use bautin_cli::Status;
    assert_eq!(Status::Ok.exit_code(), 0);
    assert_eq!(Status::Undetermined.exit_code(), 2);
    assert_eq!(Status::CheckFailed.exit_code(), 3);
}

#[test]
fn melnikov_json_and_csv() {
    let d = dir("melnikov");
    let arc = file(
        &d,
        "trace.json",
        r#"{"truncation": 4, "vars": {"l1": [0, 1]}}"#,
    );
    let out = d.join("report.json");
    let csv = d.join("samples.csv");
    let o = run(&[
        "melnikov",
        "--arc",
        &arc,
        "--json",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = stdout_json(&o);
    assert_eq!(r["outputs"]["measured_order"], 1);
    assert_eq!(r["outputs"]["algebraic_order"], 1);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved, r);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("h,epsilon,displacement,integrator_error_estimate")
    );
    assert_eq!(
        lines.count(),
        r["outputs"]["samples"].as_array().unwrap().len()
    );

    let inside = file(
        &d,
        "inside.json",
        r#"{"truncation": 4, "vars": {"l2": [0, 1], "l4": [0, 1]}}"#,
    );
    let o = run(&["melnikov", "--arc", &inside]);
    assert_eq!(code(&o), 2);
}

#[test]
fn zoladek_and_dulac() {
    let d = dir("zoladek");
    let arc = file(
        &d,
        "trace.json",
        r#"{"truncation": 4, "vars": {"l1": [0, 1]}}"#,
    );
    let o = run(&["zoladek", "--arc", &arc]);
    assert_eq!(code(&o), 0);
    let c1 = stdout_json(&o)["outputs"]["fit"]["coefficients"][0]
        .as_f64()
        .unwrap();
    assert!((c1 - 4.0 * std::f64::consts::PI).abs() < 1e-5);

    let off = file(
        &d,
        "off.json",
        r#"{"truncation": 4, "vars": {"l3": [1], "l6": [1], "l1": [0, 1]}}"#,
    );
    assert_eq!(code(&run(&["zoladek", "--arc", &off])), 1);

    let o = run(&["dulac"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["outputs"]["all_pass"], true);
}
