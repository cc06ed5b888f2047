//! Black-box tests of the `cobi` binary: exit codes, output shape, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cobi::generator::{load_file, save, save_file};
use cobi::linalg::Point;
use cobi::objective::{MultipeakObjective, QuadraticPeak};
use cobi::problem::{CobiProblem, ProblemMeta};
use serde_json::Value;
use tempfile::TempDir;

fn cobi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobi")).args(args).output().expect("spawn cobi")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn showcase(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances").join(format!("{name}.json"))
}

fn sphere_pair(dir: &TempDir) -> PathBuf {
    let objectives = [
        MultipeakObjective::single(QuadraticPeak::sphere(&[0.0, 0.0])),
        MultipeakObjective::single(QuadraticPeak::sphere(&[1.0, 0.0])),
    ];
    let meta = ProblemMeta { id: "sphere-pair".into(), name: "sphere-pair".into(), seed: None };
    let prob = CobiProblem::unconstrained(objectives, meta).unwrap();
    let path = dir.path().join("spheres.json");
    save_file(&path, &save(&prob)).unwrap();
    path
}

fn generated(dir: &TempDir, n: &str) -> PathBuf {
    let path = dir.path().join(format!("gen{n}.json"));
    let out = cobi(&["generate", "--n", n, "--peaks", "2,1", "--constraints", "linear,quadratic", "--seed", "5", "--out", s(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn generate_writes_and_validates() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = cobi(&["generate", "--n", "2", "--peaks", "1,1", "--constraints", "linear", "--seed", "7", "--out", s(p)]);
        assert_eq!(code(&out), 0);
        assert_eq!(json(&out)["id"], "gen-n2-p1x1-c1-s7");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = cobi(&["generate", "--n", "1"]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let out = cobi(&["generate", "--config", s(&dir.path().join("missing.json"))]);
    assert_eq!(code(&out), 3);
}

#[test]
fn generate_from_config_file_and_showcase() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"dimension": 3, "peaks": [2, 2], "constraints": [{"kind": "quadratic"}], "seed": 4}"#).unwrap();
    let out = cobi(&["generate", "--config", s(&cfg)]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["dimension"], 3);
    assert_eq!(doc["seed"], 4);

    std::fs::write(&cfg, r#"{"dimension": 3, "unknown": 1}"#).unwrap();
    assert_eq!(code(&cobi(&["generate", "--config", s(&cfg)])), 1);
    assert_eq!(code(&cobi(&["generate", "--showcase", "no-such-instance"])), 1);

    let out = cobi(&["generate", "--showcase", "type2-wedge"]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, std::fs::read(showcase("type2-wedge")).unwrap());
}

#[test]
fn evaluate_matches_library() {
    let dir = TempDir::new().unwrap();
    let inst = generated(&dir, "3");
    let (_, prob) = load_file(&inst).unwrap();
    let anchor = prob.anchor();
    let arg = anchor.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",");
    let out = cobi(&["evaluate", "--instance", s(&inst), "--x", &arg]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["feasible"], true);

    let x = Point::from_vec(vec![0.25, -0.5, 1.0]);
    let out = cobi(&["evaluate", "--instance", s(&inst), "--x", "0.25,-0.5,1"]);
    let v = json(&out);
    let e = prob.evaluate(&x).unwrap();
    assert_eq!(v["f"]["f1"].as_f64().unwrap(), e.f.f1);
    assert_eq!(v["f"]["f2"].as_f64().unwrap(), e.f.f2);
    assert_eq!(v["violation"].as_f64().unwrap(), e.violation);

    let raw = json(&cobi(&["evaluate", "--instance", s(&inst), "--x", "0.25,-0.5,1", "--raw"]));
    assert_eq!(raw["f"]["f1"].as_f64().unwrap(), e.f_raw.f1);

    assert_eq!(code(&cobi(&["evaluate", "--instance", s(&inst), "--x", "1,2"])), 1);
    assert_eq!(code(&cobi(&["evaluate", "--instance", s(&inst), "--x", "1,nan,2"])), 1);
    assert_eq!(code(&cobi(&["evaluate", "--instance", "/nonexistent/inst.json", "--x", "1,2,3"])), 3);
}

#[test]
fn approx_ps_segment_and_errors() {
    let dir = TempDir::new().unwrap();
    let inst = sphere_pair(&dir);
    let out = cobi(&["approx-ps", "--instance", s(&inst), "--epsilon", "0.25"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,f1,f2");
    assert_eq!(lines.len(), 6);
    let again = cobi(&["approx-ps", "--instance", s(&inst), "--epsilon", "0.25"]);
    assert_eq!(out.stdout, again.stdout);

    let csv = dir.path().join("ref.csv");
    let summary = dir.path().join("sum.json");
    let out = cobi(&["approx-ps", "--instance", s(&inst), "--epsilon", "0.25", "--out", s(&csv), "--summary", s(&summary)]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), text);
    let sum: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(sum["archive_size"], 5);
    assert_eq!(json(&out), sum);

    assert_eq!(code(&cobi(&["approx-ps", "--instance", s(&inst), "--epsilon", "0"])), 1);
    assert_eq!(code(&cobi(&["approx-ps", "--instance", s(&inst), "--epsilon", "0.1", "--out", "/nonexistent/dir/x.csv"])), 3);
}

#[test]
fn ideal_nadir_command() {
    let dir = TempDir::new().unwrap();
    let inst = sphere_pair(&dir);
    let out = cobi(&["ideal-nadir", "--instance", s(&inst)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["ideal"]["f1"], 0.0);
    assert_eq!(v["ideal"]["f2"], 0.0);
    assert_eq!(v["nadir"]["f1"], 0.5);
    assert_eq!(v["nadir"]["f2"], 0.5);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&cobi(&["ideal-nadir", "--instance", s(&bad)])), 1);
    assert_eq!(code(&cobi(&["ideal-nadir", "--instance", s(&dir.path().join("none.json"))])), 3);
}

#[test]
fn hv_command() {
    let dir = TempDir::new().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "f1,f2\n1,2\n2,1\n").unwrap();
    let out = cobi(&["hv", "--points", s(&pts), "--refpoint", "3,3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["hv"], 3.0);

    let reference = dir.path().join("ref.csv");
    std::fs::write(&reference, "x1,f1,f2\n0,0.5,2\n0,1,1\n0,2,0.5\n").unwrap();
    let v = json(&cobi(&["hv", "--ref", s(&reference), "--points", s(&pts), "--refpoint", "3,3"]));
    assert_eq!(v["reference_hv"], 5.0);
    assert_eq!(v["gap"], 2.0);

    assert_eq!(code(&cobi(&["hv", "--points", s(&pts), "--refpoint", "3"])), 1);
    assert_eq!(code(&cobi(&["hv", "--points", s(&dir.path().join("none.csv")), "--refpoint", "3,3"])), 3);
}

#[test]
fn classify_command() {
    let dir = TempDir::new().unwrap();
    let inst = sphere_pair(&dir);
    let out = cobi(&["classify", "--instance", s(&inst), "--epsilon", "0.05"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["type"], "I");
    let out = cobi(&["classify", "--instance", s(&showcase("type4-ball"))]);
    assert_eq!(json(&out)["type"], "IV");

    assert_eq!(code(&cobi(&["classify", "--instance", s(&inst), "--epsilon", "inf"])), 1);
    assert_eq!(code(&cobi(&["classify", "--instance", s(&dir.path().join("none.json"))])), 3);
}

#[test]
fn run_baseline_command() {
    let dir = TempDir::new().unwrap();
    let inst = generated(&dir, "2");
    let trace = dir.path().join("trace.csv");
    let out = cobi(&["run-baseline", "--instance", s(&inst), "--algo", "nsga2lite", "--budget", "500", "--population", "20", "--seed", "1", "--trace", s(&trace)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["optimizer"], "nsga2lite");
    let text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "evals,hv,gap");
    assert!(lines.last().unwrap().starts_with("500,"));
    for l in &lines[1..] {
        let gap: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
        assert!(gap >= 0.0);
    }

    let out = cobi(&["run-baseline", "--instance", s(&inst), "--algo", "random", "--budget", "200", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("evals,hv,gap\n"));

    assert_eq!(code(&cobi(&["run-baseline", "--instance", s(&inst), "--algo", "cmaes", "--budget", "10"])), 1);
    assert_eq!(code(&cobi(&["run-baseline", "--instance", s(&inst), "--algo", "nsga2lite", "--budget", "10", "--population", "50"])), 1);
}

#[test]
fn plot_data_command() {
    let dir = TempDir::new().unwrap();
    let inst = generated(&dir, "2");
    let out = cobi(&["plot-data", "--instance", s(&inst), "--grid", "5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,f1,f2,g1,g2,feasible");
    assert_eq!(lines.len(), 26);

    let three = generated(&dir, "3");
    assert_eq!(code(&cobi(&["plot-data", "--instance", s(&three)])), 1);
    assert_eq!(code(&cobi(&["plot-data", "--instance", s(&inst), "--grid", "1"])), 1);
}

#[test]
fn help_and_unknown_commands() {
    assert_eq!(code(&cobi(&["--help"])), 0);
    assert_eq!(code(&cobi(&["--version"])), 0);
    assert_eq!(code(&cobi(&["frobnicate"])), 1);
    assert_eq!(code(&cobi(&[])), 1);
}
