//! End-to-end tests of the compiled binary: report contents and exit
//! codes per subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_proxikit"))
}

fn example_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/example_2_10.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_stdout(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("proxikit_cli_{}_{name}", std::process::id()))
}

#[test]
fn check_reports_all_audits() {
    let out = run(&["check", example_path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let cert = &v["check"]["certification"];
    assert_eq!(cert["weak_p"]["holds"], Value::Bool(true));
    assert_eq!(cert["p"]["holds"], Value::Bool(false));
    assert_eq!(cert["admissible"]["holds"], Value::Bool(true));
    assert_eq!(cert["range"]["holds"], Value::Bool(true));
    let k_min = cert["contraction"]["k_min"].as_f64().unwrap();
    assert!((k_min - 0.5735).abs() < 1e-3, "k_min {k_min}");
    assert_eq!(
        v["check"]["theta_conditions"]["theta3"]["pass"],
        Value::Bool(false)
    );
    // version and digest make the report reproducible
    assert!(v["tool"]["version"].is_string());
    assert!(v["instance_digest"].is_string());
}

#[test]
fn check_exits_2_when_the_exponent_is_too_small() {
    let raw = std::fs::read_to_string(example_path()).unwrap();
    let doctored = raw.replace("\"k\": 0.7", "\"k\": 0.5");
    assert_ne!(raw, doctored);
    let path = tmp("low_k.json");
    std::fs::write(&path, doctored).unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}

#[test]
fn oracle_reports_both_proximity_points() {
    let out = run(&["oracle", example_path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["oracle"]["d_ab"].as_f64(), Some(8.0));
    assert_eq!(v["oracle"]["bpps"], serde_json::json!([0, 1]));
}

#[test]
fn analyze_reports_set_distance_and_projections() {
    let out = run(&[
        "analyze",
        "--instance",
        example_path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["analyze"]["d_ab"].as_f64(), Some(8.0));
    assert_eq!(v["analyze"]["a0"], serde_json::json!([0, 1]));
    assert_eq!(v["analyze"]["b0"], serde_json::json!([0, 1]));
    let h = v["analyze"]["image_hausdorff"][0][1].as_f64().unwrap();
    assert_eq!(h, 16.0);
}

#[test]
fn solve_converges_with_oracle_agreement() {
    let out = run(&[
        "solve",
        example_path().to_str().unwrap(),
        "--json",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["solve"]["outcome"], Value::String("Converged".into()));
    assert_eq!(v["solve"]["gap"].as_f64(), Some(0.0));
    assert_eq!(v["solve"]["certified"], Value::Bool(true));
    assert_eq!(v["solve"]["oracle_agreement"], Value::Bool(true));
    assert_eq!(
        v["solve"]["point"]["Coords"],
        serde_json::json!([-2.0, 2.0])
    );
}

#[test]
fn bvp_constant_hits_the_exact_parabola() {
    let out = run(&["bvp", "--f", "constant:2", "--n", "128", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let mid = v["bvp"]["midpoint_value"].as_f64().unwrap();
    assert!((mid - 0.25).abs() <= 1e-8, "x(1/2) = {mid}");
    assert_eq!(v["bvp"]["converged"], Value::Bool(true));
}

#[test]
fn bvp_csv_export_writes_every_node() {
    let path = tmp("solution.csv");
    let out = run(&[
        "bvp",
        "--f",
        "constant:2",
        "--n",
        "64",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x");
    assert_eq!(lines.len(), 66); // header + 65 nodes
    assert!(lines[1].starts_with("0,"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn bvp_exits_3_when_budget_too_small() {
    let out = run(&[
        "bvp",
        "--f",
        "sin",
        "--x0-bump",
        "4",
        "--n",
        "64",
        "--max-iter",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bvp_rejects_non_lipschitz_rhs() {
    let out = run(&["bvp", "--f", "affine:1.5,0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_emits_a_valid_instance_that_solves() {
    let path = tmp("gen.json");
    let out = run(&["gen", "--seed", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let solve_out = run(&["solve", path.to_str().unwrap(), "--json", "--oracle"]);
    assert_eq!(solve_out.status.code(), Some(0));
    let v = json_stdout(&solve_out);
    assert_eq!(v["solve"]["oracle_agreement"], Value::Bool(true));
    std::fs::remove_file(&path).ok();
}

#[test]
fn gen_self_map_solves_in_fixed_point_mode() {
    let path = tmp("gen_self.json");
    let out = run(&[
        "gen",
        "--seed",
        "5",
        "--self-map",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let solve_out = run(&["solve", path.to_str().unwrap(), "--fixed-point", "--json"]);
    assert_eq!(solve_out.status.code(), Some(0));
    let v = json_stdout(&solve_out);
    assert_eq!(v["solve"]["outcome"], Value::String("Converged".into()));
    let gap = v["solve"]["gap"].as_f64().unwrap();
    assert!(gap.abs() <= 1e-9);
    std::fs::remove_file(&path).ok();
}

#[test]
fn gen_is_reproducible_across_invocations() {
    let a = run(&["gen", "--seed", "21"]);
    let b = run(&["gen", "--seed", "21"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_reports_are_identical_across_runs() {
    let path = example_path();
    for cmd in ["analyze", "check", "solve", "oracle"] {
        let a = run(&[cmd, path.to_str().unwrap(), "--json"]);
        let b = run(&[cmd, path.to_str().unwrap(), "--json"]);
        assert_eq!(a.stdout, b.stdout, "{cmd} report must be stable");
    }
}

#[test]
fn missing_instance_is_a_usage_error() {
    let out = run(&["solve"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["check", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_violation_exits_2() {
    // swap the seeds so y0 is not in F(x0)
    let raw = std::fs::read_to_string(example_path()).unwrap();
    let doctored = raw.replace(
        "\"seeds\": { \"x0\": 0, \"x1\": 0, \"y0\": 0 }",
        "\"seeds\": { \"x0\": 0, \"x1\": 0, \"y0\": 1 }",
    );
    assert_ne!(raw, doctored);
    let path = tmp("bad_seed.json");
    std::fs::write(&path, doctored).unwrap();
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}
