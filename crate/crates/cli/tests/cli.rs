use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn isoset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_crystal(dir: &Path, id: &str, cell: &str, motif: &str) -> String {
    let path = dir.join(format!("{id}.json"));
    let text = format!(r#"{{"schema": "isoset-crystal/1", "id": "{id}", "cell": {cell}, "motif": {motif}}}"#);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn square_and_hexagonal_pdd_distance() {
    let dir = tempfile::tempdir().unwrap();
    let lam4 = write_crystal(dir.path(), "lam4", r#"{"parameters": {"a": 1, "b": 1, "gamma": 90}}"#, "[[0, 0]]");
    let lam6 = write_crystal(dir.path(), "lam6", r#"{"parameters": {"a": 1, "b": 1, "gamma": 60}}"#, "[[0, 0]]");
    let out = json(&isoset(&["dist", &lam4, &lam6, "--metric", "pdd", "--k", "12"]));
    let value = out["value"].as_f64().unwrap();
    assert!((value - (2f64.sqrt() - 1.0)).abs() < 1e-9, "{value}");

    let out = json(&isoset(&["dist", &lam4, &lam6, "--metric", "isoset"]));
    let (value, factor) = (out["value"].as_f64().unwrap(), out["factor"].as_f64().unwrap());
    let exact = 2f64.sqrt() - 1.0;
    assert!(value >= exact - 1e-9 && value <= factor * exact + 1e-9, "{value}");

    let out = json(&isoset(&["dist", &lam4, &lam4, "--metric", "amd"]));
    assert_eq!(out["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn invariant_reports() {
    let dir = tempfile::tempdir().unwrap();
    let s4 = write_crystal(dir.path(), "s4", r#"{"basis": [[1]]}"#, "[[0], [0.25], [0.3333333333333333], [0.5]]");
    let out = json(&isoset(&["invariant", &s4, "--k", "4"]));
    assert!((out["radius"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    assert!((out["bridge_length"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(out["isoset"]["classes"].as_array().unwrap().len(), 4);
    assert_eq!(out["amd"].as_array().unwrap().len(), 4);

    let out = json(&isoset(&["invariant", &s4, "--alpha", "0.1"]));
    assert_eq!(out["isoset"]["classes"].as_array().unwrap().len(), 2);

    let csv = isoset(&["invariant", &s4, "--k", "2", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("weight,d1,d2\n"));
    assert_eq!(text.lines().count(), 5);

    let tree = json(&isoset(&["isotree", &s4]));
    assert_eq!(tree["levels"][0]["partition"].as_array().unwrap().len(), 1);
}

#[test]
fn scan_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let h = 3f64.sqrt() / 2.0;
    write_crystal(dir.path(), "a", r#"{"basis": [[1.0, 0.0], [0.3, 1.2]]}"#, "[[0, 0], [0.4, 0.55]]");
    // the same crystal rotated by 30 degrees
    let (c, s) = (h, 0.5);
    let rotated = format!(
        r#"{{"basis": [[{}, {}], [{}, {}]]}}"#,
        c,
        s,
        0.3 * c - 1.2 * s,
        0.3 * s + 1.2 * c
    );
    write_crystal(dir.path(), "b", &rotated, "[[0, 0], [0.4, 0.55]]");
    write_crystal(dir.path(), "c", r#"{"basis": [[1.0, 0.0], [0.3, 1.2]]}"#, "[[0, 0], [0.4008, 0.55]]");
    let out = json(&isoset(&["scan", dir.path().to_str().unwrap()]));
    let pairs = out["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    let verdict = |a: &str, b: &str| {
        pairs
            .iter()
            .find(|p| p["id_a"] == a && p["id_b"] == b)
            .unwrap()["verdict"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(verdict("a", "b"), "isometric");
    assert_eq!(verdict("a", "c"), "near-duplicate");
    assert_eq!(out["options"]["amd_threshold"].as_f64(), Some(0.01));
    assert_eq!(out["options"]["k"].as_u64(), Some(12));

    // identical inputs give byte-identical reports
    let again = isoset(&["scan", dir.path().to_str().unwrap()]);
    let first = isoset(&["scan", dir.path().to_str().unwrap()]);
    assert_eq!(again.stdout, first.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = isoset(&["isotree", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "{stderr}");
    assert!(out.stdout.is_empty());

    let out = isoset(&["dist", "--metric", "nonsense", "a", "b"]);
    assert_eq!(out.status.code(), Some(2));
    let out = isoset(&["invariant", "x.json", "--alpha", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_cell_coordinate_warns() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_crystal(dir.path(), "w", r#"{"basis": [[1]]}"#, "[[1.5]]");
    let out = isoset(&["invariant", &path, "--k", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("reduced"));
}
