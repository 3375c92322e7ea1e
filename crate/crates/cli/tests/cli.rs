use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hkl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn trig(n: usize, coeffs: &str) -> String {
    format!(r#"{{"version":"hkl-1","kind":"trig_poly","payload":{{"n":{n},"coeffs":{{{coeffs}}}}}}}"#)
}

fn kernel(n: usize, coeffs: &str) -> String {
    format!(r#"{{"version":"hkl-1","kind":"kernel_element","payload":{{"n":{n},"poly":{{"coeffs":[{coeffs}]}}}}}}"#)
}

const S: &str = "0.70710678118654757";

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    // |1 + z|² / 2
    put(dir.path(), "ext.json", &trig(1, r#""0":[1,0],"1":[0.5,0]"#));
    // |f|² for f = (2/√5)(z - 1/2)
    put(dir.path(), "worked.json", &trig(1, r#""0":[1,0],"1":[-0.4,0]"#));
    put(dir.path(), "neg.json", &trig(1, r#""0":[1,0],"1":[0.6,0]"#));
    put(dir.path(), "plus.json", &kernel(1, &format!("[{S},0],[{S},0]")));
    put(dir.path(), "minus.json", &kernel(1, &format!("[{S},0],[-{S},0]")));
    dir
}

#[test]
fn extreme_verdict_for_boundary_point() {
    let dir = setup();
    let out = hkl(&["extreme", "ext.json", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["version"], "hkl-1");
    assert_eq!(v["kind"], "extreme_certificate");
    assert_eq!(v["payload"]["verdict"], true);
    assert!(v["payload"]["tolerances"]["certificate"].is_number());
    assert!(v["payload"]["algorithm"]["tol_root"].is_number());
}

#[test]
fn split_of_extreme_point_is_a_precondition_error() {
    let dir = setup();
    let out = hkl(&["split", "ext.json", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("AlreadyExtreme"));
}

#[test]
fn split_of_worked_instance() {
    let dir = setup();
    let out = hkl(&["split", "worked.json", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let p = &stdout_json(&out)["payload"];
    assert_eq!(p["valid"], true);
    let g1 = &p["g1"]["coeffs"]["1"];
    let g2 = &p["g2"]["coeffs"]["1"];
    let im1 = g1[1].as_f64().unwrap();
    let im2 = g2[1].as_f64().unwrap();
    assert!((g1[0].as_f64().unwrap() + 0.4).abs() < 1e-12);
    assert!((im1.abs() - 0.3).abs() < 1e-12 && (im1 + im2).abs() < 1e-12);
    assert!(p["conventions"]["lambda"].is_string());
}

#[test]
fn generated_inside_zero_decomposes() {
    let dir = setup();
    let out = hkl(&["gen", "--n", "1", "--zeros", "inside:1", "--seed", "7"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    fs::write(dir.path().join("x.json"), &out.stdout).unwrap();
    let out = hkl(&["decompose", "x.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let p = &stdout_json(&out)["payload"];
    assert_eq!(p["rigid"], false);
    assert!(p["f1"]["poly"].is_object() && p["f2"]["poly"].is_object());
}

#[test]
fn outer_element_is_rigid() {
    let dir = setup();
    let out = hkl(&["decompose", "plus.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["rigid"], true);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = setup();
    let args = ["gen", "--n", "4", "--zeros", "inside:1,circle:2,outside:1", "--seed", "3"];
    let a = hkl(&args, dir.path()).stdout;
    let b = hkl(&args, dir.path()).stdout;
    assert_eq!(a, b);
    let c = hkl(&["gen", "--n", "4", "--zeros", "inside:1,circle:2,outside:1", "--seed", "4"], dir.path()).stdout;
    assert_ne!(a, c);
    let a = hkl(&["split", "worked.json"], dir.path()).stdout;
    let b = hkl(&["split", "worked.json"], dir.path()).stdout;
    assert_eq!(a, b);
}

#[test]
fn rigidity_outcomes_and_witness() {
    let dir = setup();
    let out = hkl(&["rigidity", "ext.json", "minus.json", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let p = &stdout_json(&out)["payload"];
    assert_eq!(p["outcome"]["kind"], "NOT_DOMINATED");
    assert_eq!(p["witness"]["flag"], "DIVERGENT");

    let out = hkl(&["rigidity", "ext.json", "plus.json", "--n", "1"], dir.path());
    let p = &stdout_json(&out)["payload"];
    assert_eq!(p["outcome"]["kind"], "CONSTANT_MULTIPLE");
    assert!((p["outcome"]["constant"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(p["witness"]["flag"], "CONVERGENT");
}

#[test]
fn schema_violations_exit_two() {
    let dir = setup();
    put(
        dir.path(),
        "extra.json",
        r#"{"version":"hkl-1","kind":"trig_poly","payload":{"n":1,"coeffs":{"0":[1,0]},"note":1}}"#,
    );
    let out = hkl(&["spectral", "extra.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Schema"));

    let out = hkl(&["spectral", "neg.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotNonnegative"));

    let out = hkl(&["spectral", "plus.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_io_errors_exit_one() {
    let dir = setup();
    assert_eq!(hkl(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(hkl(&["spectral", "missing.json"], dir.path()).status.code(), Some(1));
    assert_eq!(hkl(&["spectral"], dir.path()).status.code(), Some(1));
    assert_eq!(hkl(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn tolerance_override_is_echoed() {
    let dir = setup();
    let out = hkl(&["extreme", "ext.json", "--tol", "1e-6"], dir.path());
    let t = &stdout_json(&out)["payload"]["tolerances"];
    assert_eq!(t["certificate"].as_f64(), Some(1e-6));
    assert_eq!(t["factor"].as_f64(), Some(1e-6));
}

#[test]
fn spectral_output_feeds_back_and_csv() {
    let dir = setup();
    let out = hkl(&["spectral", "ext.json", "--csv", "f.csv", "--grid", "8", "-o", "f.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    assert_eq!(v["kind"], "poly");
    let out = hkl(&["factor", "f.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["inner"]["m0"], 0);

    let csv = fs::read_to_string(dir.path().join("f.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "theta,re,im,abs");
    assert_eq!(lines.len(), 9);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[3] - 2f64.sqrt()).abs() < 1e-12);

    let out = hkl(&["norm", "plus.json", "--csv", "n.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn symbol_test_and_outer_grid() {
    let dir = setup();
    let out = hkl(&["gen", "--kind", "symbol", "--n", "1", "--grid", "256", "-o", "phi.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = hkl(&["symbol-test", "phi.json", "ext.json", "--grid", "256"], dir.path());
    assert_eq!(stdout_json(&out)["payload"]["verdict"], true);

    let values: Vec<String> = (0..16)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / 16.0;
            format!("[{},0]", (1.25 - t.cos()).sqrt())
        })
        .collect();
    put(
        dir.path(),
        "w.json",
        &format!(r#"{{"version":"hkl-1","kind":"grid","payload":{{"N":16,"values":[{}]}}}}"#, values.join(",")),
    );
    let out = hkl(&["outer-grid", "w.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    // |1 - z/2|² = 1.25 - cos θ, so the outer function at ζ = 1 is 1/2.
    let v0 = &stdout_json(&out)["payload"]["values"][0];
    assert!((v0[0].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn domination_and_baseline() {
    let dir = setup();
    let out = hkl(&["domination", "plus.json", "ext.json"], dir.path());
    let p = &stdout_json(&out)["payload"];
    assert_eq!(p["flag"], "CONVERGENT");
    assert!((p["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let out = hkl(&["baseline-split", "ext.json"], dir.path());
    let p = &stdout_json(&out)["payload"];
    assert_eq!(p["g1"]["n"], 2);
}

#[test]
fn batch_writes_one_file_per_input() {
    let dir = setup();
    let batch = dir.path().join("batch");
    fs::create_dir(&batch).unwrap();
    fs::copy(dir.path().join("ext.json"), batch.join("a.json")).unwrap();
    fs::copy(dir.path().join("worked.json"), batch.join("b.json")).unwrap();
    let out = hkl(&["extreme", "--batch", "batch"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let a: Value = serde_json::from_str(&fs::read_to_string(batch.join("a.extreme.out.json")).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&fs::read_to_string(batch.join("b.extreme.out.json")).unwrap()).unwrap();
    assert_eq!(a["payload"]["verdict"], true);
    assert_eq!(b["payload"]["verdict"], false);

    fs::copy(dir.path().join("neg.json"), batch.join("c.json")).unwrap();
    let out = hkl(&["extreme", "--batch", "batch"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let c: Value = serde_json::from_str(&fs::read_to_string(batch.join("c.extreme.out.json")).unwrap()).unwrap();
    assert_eq!(c["kind"], "error");

    let out = hkl(&["rigidity", "ext.json", "plus.json", "--batch", "batch"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
