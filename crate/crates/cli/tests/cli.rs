use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn diffeq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffeq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

/// Runs a command that prints JSON and stores it under `name`.
fn save(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let o = diffeq(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    let p = dir.path().join(name);
    fs::write(&p, &o.stdout).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fibonacci_files(dir: &TempDir) -> (PathBuf, PathBuf) {
    let sys = write(dir, "fib.json", &json!({
        "kind": "Nat", "vars": ["X"], "equations": ["s^2(X) - s(X) - X"]
    }));
    let mut f = vec![0i64, 1];
    while f.len() < 21 {
        f.push(f[f.len() - 1] + f[f.len() - 2]);
    }
    let values: Vec<Value> = f.iter().enumerate().map(|(i, v)| json!([0, i, v.to_string()])).collect();
    let wit = write(dir, "fib_w.json", &json!({
        "field": "q", "arity": 1,
        "window": {"kind": "Nat", "lo": 0, "hi": 20},
        "values": values
    }));
    (sys, wit)
}

#[test]
fn compile_diophantine_has_eight_equations() {
    let o = diffeq(&["compile", "diophantine", "--poly", "t1-2", "--monoid", "nat"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equations"].as_array().unwrap().len(), 8);
    assert_eq!(v["source"]["reduction"], "diophantine");
}

#[test]
fn malformed_polynomial_is_an_input_error() {
    let o = diffeq(&["compile", "diophantine", "--poly", "t1-*2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("t1-*2"));
}

#[test]
fn compile_domino_gives_three_polynomials() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", &json!({"N": 2, "dominoes": [{"l": 1, "r": 2, "t": 1, "b": 1}, {"l": 2, "r": 1, "t": 1, "b": 1}]}));
    let o = diffeq(&["compile", "domino", s(&d)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "Int2");
    assert_eq!(v["equations"].as_array().unwrap().len(), 3);
}

#[test]
fn explain_prints_the_legend() {
    let o = diffeq(&["compile", "dynamics", "--map", "tn1", "--explain"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let legend = stderr(&o);
    assert!(legend.starts_with("reduction: dynamics"));
    assert!(legend.contains("U'"));
    serde_json::from_str::<Value>(&stdout(&o)).unwrap();
}

#[test]
fn iterate_t2_prefix() {
    let o = diffeq(&["iterate", "--map", "tn2", "--start", "0,0", "--steps", "6"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let points: Vec<(String, String)> = r
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[2].to_string(), rec[3].to_string())
        })
        .collect();
    let want = [("0", "0"), ("0", "1"), ("1", "1"), ("0", "2"), ("1", "2"), ("2", "2"), ("0", "3")];
    assert_eq!(points, want.map(|(a, b)| (a.to_string(), b.to_string())));
}

#[test]
fn iterate_detector_summaries() {
    let o = diffeq(&["iterate", "--map", "detector", "--start", "1/2,0,0,0,1", "--steps", "400"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("first zero of x5 at step 187"), "{}", stderr(&o));

    let o = diffeq(&["iterate", "--map", "detector", "--field", "qt", "--start", "t,0,0,0,1", "--steps", "400"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("no zero"), "{}", stderr(&o));
}

#[test]
fn overlapping_pieces_exit_three() {
    let dir = TempDir::new().unwrap();
    let map = write(&dir, "map.json", &json!({
        "n": 1,
        "pieces": [{"W": [], "Wprime": [], "q": ["x1+1"]}, {"W": ["x1"], "Wprime": [], "q": ["x1"]}]
    }));
    let o = diffeq(&["iterate", "--map", s(&map), "--start", "0", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn fibonacci_verifies() {
    let dir = TempDir::new().unwrap();
    let (sys, wit) = fibonacci_files(&dir);
    let o = diffeq(&["verify", s(&sys), s(&wit)]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("equation 1: 19 checked, 0 failed"));
    assert!(stdout(&o).contains("window-verified"));
}

#[test]
fn tampered_witness_names_the_index() {
    let dir = TempDir::new().unwrap();
    let (sys, wit) = fibonacci_files(&dir);
    let mut w: Value = serde_json::from_str(&fs::read_to_string(&wit).unwrap()).unwrap();
    w["values"][10][2] = json!("56");
    let bad = write(&dir, "bad.json", &w);
    let o = diffeq(&["verify", s(&sys), s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fails at index 8"), "{}", stdout(&o));
}

#[test]
fn witness_without_window_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (sys, wit) = fibonacci_files(&dir);
    let mut w: Value = serde_json::from_str(&fs::read_to_string(&wit).unwrap()).unwrap();
    w.as_object_mut().unwrap().remove("window");
    let bad = write(&dir, "bad.json", &w);
    let o = diffeq(&["verify", s(&sys), s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn detector_pipeline_over_qt() {
    let dir = TempDir::new().unwrap();
    let sys = save(&dir, "sys.json", &["compile", "dynamics", "--map", "detector"]);
    let wit = save(&dir, "w.json", &[
        "witness", "dynamics", s(&sys), "--field", "qt", "--start", "t,0,0,0,1", "--window", "0..120",
    ]);
    let o = diffeq(&["verify", s(&sys), s(&wit)]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("inequation: nonzero at 1 of"));
}

#[test]
fn detector_witness_stops_at_an_algebraic_zero() {
    let dir = TempDir::new().unwrap();
    let sys = save(&dir, "sys.json", &["compile", "dynamics", "--map", "detector"]);
    let o = diffeq(&["witness", "dynamics", s(&sys), "--start", "1/2,0,0,0,1", "--window", "0..200"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("step 187"), "{}", stderr(&o));
}

#[test]
fn diophantine_pipeline_over_int() {
    let dir = TempDir::new().unwrap();
    let sys = save(&dir, "sys.json", &["compile", "diophantine", "--poly", "x1-2", "--monoid", "int"]);
    let wit = save(&dir, "w.json", &[
        "witness", "diophantine", "--poly", "x1-2", "--a", "2", "--monoid", "int", "--window", "-12..24",
    ]);
    let o = diffeq(&["verify", s(&sys), s(&wit)]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = diffeq(&["witness", "diophantine", "--poly", "x1-2", "--a", "3", "--window", "0..24"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tiling_pipeline() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", &json!({"N": 1, "dominoes": [{"l": 1, "r": 1, "t": 1, "b": 1}]}));
    let tiling = save(&dir, "t.json", &["tile-search", s(&d), "--k", "2"]);
    let sys = save(&dir, "sys.json", &["compile", "domino", s(&d)]);
    let wit = save(&dir, "w.json", &["witness", "domino", s(&tiling), "--window", "0..4,0..4"]);
    let o = diffeq(&["verify", s(&sys), s(&wit)]);
    assert!(o.status.success(), "{}", stdout(&o));

    let clash = write(&dir, "c.json", &json!({"N": 4, "dominoes": [
        {"l": 1, "r": 2, "t": 1, "b": 2}, {"l": 3, "r": 4, "t": 3, "b": 4}
    ]}));
    assert_eq!(diffeq(&["tile-search", s(&clash), "--k", "2"]).status.code(), Some(1));
    assert_eq!(diffeq(&["tile-search", s(&clash), "--k", "9"]).status.code(), Some(2));
}

#[test]
fn free_monoid_pipeline() {
    let dir = TempDir::new().unwrap();
    let (_, nat) = fibonacci_files(&dir);
    let input = write(&dir, "in.json", &json!({"vars": ["X"], "equations": ["s^2(X) - s(X) - X"], "g": "X"}));
    let sys = save(&dir, "sys.json", &["compile", "free-monoid", s(&input)]);
    let wit = save(&dir, "w.json", &["witness", "free-monoid", s(&input), "--nat-witness", s(&nat)]);
    let o = diffeq(&["verify", s(&sys), s(&wit)]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("reduction: free-monoid"));
}

#[test]
fn pn_both_ways() {
    let o = diffeq(&["pn", "--index", "23"]);
    assert_eq!(stdout(&o).trim(), "-2*x+1");
    let o = diffeq(&["pn", "--poly", "2*x-1"]);
    assert_eq!(stdout(&o), "N = 23\nsign = -1\n");
    let o = diffeq(&["pn", "--poly", "x"]);
    let n = stdout(&o).lines().next().unwrap().trim_start_matches("N = ").to_string();
    let back = diffeq(&["pn", "--index", &n]);
    assert_eq!(stdout(&back).trim(), "-x");
    assert_eq!(diffeq(&["pn", "--poly", "0"]).status.code(), Some(2));
}

#[test]
fn degree_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_diffeq"))
        .args(["iterate", "--map", "detector", "--field", "qt", "--start", "t,0,0,0,1", "--steps", "60"])
        .env("DIFFEQ_DEGREE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("cap"));
    let o = Command::new(env!("CARGO_BIN_EXE_diffeq"))
        .args(["pn", "--index", "1"])
        .env("DIFFEQ_DEGREE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
