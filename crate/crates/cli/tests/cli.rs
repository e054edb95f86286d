use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_precondflow"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const ONE_EDGE: &str = "p min 2 1\nn 1 -1\nn 2 1\na 1 2 1\n";

const SQUARE: &str = "c unit square with a diagonal\n\
p min 4 5\n\
n 1 -2\n\
n 3 2\n\
a 1 2 1\n\
a 2 3 1\n\
a 3 4 1\n\
a 4 1 1\n\
a 1 3 1.5\n";

#[test]
fn solve_prints_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", ONE_EDGE);
    let out = run(&["solve", "--graph", &g, "--epsilon", "0.1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["cost"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["dual_value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["flow"][0]["edge"], 1);
    assert!((v["flow"][0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["potential"].as_array().unwrap().len(), 2);
    assert!(v["stages"].is_object());
}

#[test]
fn emits_report_chain_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", SQUARE);
    let json = dir.path().join("r.json");
    let chain = dir.path().join("c.json");
    let out = run(&[
        "solve",
        "--graph",
        &g,
        "--epsilon",
        "0.1",
        "--seed",
        "4",
        "--emit-json",
        json.to_str().unwrap(),
        "--emit-chain",
        chain.to_str().unwrap(),
        "--oracle-check",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["stages"]["oracle"]["opt"], 3.0);
    assert!(r["cost"].as_f64().unwrap() <= 3.3 + 1e-9);
    let c: Value = serde_json::from_str(&fs::read_to_string(&chain).unwrap()).unwrap();
    let levels = c["levels"].as_array().unwrap();
    assert_eq!(levels.len() as u64, c["T"].as_u64().unwrap() + 1);
    for key in ["t", "support_size", "l1_mass", "weight"] {
        assert!(levels[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn demands_file_overrides_node_lines() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", SQUARE);
    let d = write(dir.path(), "d.json", r#"{"2": 1, "4": -1}"#);
    let out = run(&["oracle", "--graph", &g, "--demands", &d]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["opt"], 2.0);
    assert_eq!(v["method"], "successive_shortest_paths");
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", SQUARE);
    let mut texts = Vec::new();
    for name in ["a.json", "b.json"] {
        let p = dir.path().join(name);
        let out = run(&["solve", "--graph", &g, "--epsilon", "0.2", "--seed", "11", "--emit-json", p.to_str().unwrap()]);
        assert!(out.status.success());
        texts.push(fs::read(&p).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn infeasible_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let unbalanced = write(dir.path(), "u.txt", "p min 2 1\nn 1 -1\nn 2 2\na 1 2 1\n");
    let disconnected = write(dir.path(), "d.txt", "p min 3 1\nn 1 -1\nn 2 1\na 1 2 1\n");
    let garbled = write(dir.path(), "x.txt", "p min 2 1\na 1 2 one\n");
    for g in [&unbalanced, &disconnected, &garbled] {
        let out = run(&["solve", "--graph", g, "--epsilon", "0.1"]);
        assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let missing = dir.path().join("nope.txt");
    let out = run(&["oracle", "--graph", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", ONE_EDGE);
    for eps in ["0", "2"] {
        let out = run(&["solve", "--graph", &g, "--epsilon", eps]);
        assert_eq!(out.status.code(), Some(2));
    }
    let out = run(&["solve", "--graph", &g, "--epsilon", "0.1", "--kappa", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}
