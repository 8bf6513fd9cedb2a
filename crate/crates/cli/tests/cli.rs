use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gitwin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gitwin"))
        .current_dir(data(""))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    gitwin_cli::validate_report(&v).expect("report matches the schema");
    v
}

#[test]
fn conifold_report_matches_golden_file() {
    let out = gitwin(&["wallcross", "conifold.json"]);
    let golden = std::fs::read(data("conifold_wallcross.golden.json")).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&golden));
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "equivalence");
    assert_eq!(v["result"]["window_match"]["plus_characters"], v["result"]["window_match"]["minus_characters"]);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["stratify", "quadrant.json"],
        vec!["fan", "quadrant.json", "--format", "text"],
        vec!["windows", "quadrant.json", "--window", "0,0,0", "--box", "4"],
        vec!["lift", "projective_plane.json", "--complex", "twist_two.json"],
    ] {
        let a = gitwin(&args);
        let b = gitwin(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn projective_plane_has_one_stratum() {
    let v = json(&gitwin(&["stratify", "projective_plane.json"]));
    let strata = v["result"]["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 1);
    assert_eq!(strata[0]["eta"], 3);
    let w = json(&gitwin(&["windows", "projective_plane.json"]));
    assert_eq!(w["result"]["characters"], serde_json::json!([[0], [1], [2]]));
}

#[test]
fn empty_stratification_is_reported_as_all_semistable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(&path, r#"{"k": 1, "n": 2, "weights": [[1], [-1]], "linearization": [0]}"#).unwrap();
    let v = json(&gitwin(&["stratify", path.to_str().unwrap()]));
    assert_eq!(v["result"], serde_json::json!({"strata": [], "semistable": "all"}));
}

#[test]
fn rationals_are_exact_strings() {
    let out = gitwin(&["stratify", "half.json"]);
    let v = json(&out);
    assert_eq!(v["result"]["strata"][0]["mu"]["signed_mu_squared"], "1/2");
    assert!(!String::from_utf8_lossy(&out.stdout).contains("0.5"));
}

#[test]
fn every_command_emits_a_valid_report() {
    for args in [
        vec!["stratify", "conifold.json", "--format", "json"],
        vec!["fan", "conifold.json"],
        vec!["wallcross", "conifold.json", "--wall", "0", "--direction", "1", "--window", "2"],
        vec!["windows", "conifold.json"],
        vec!["lift", "projective_plane.json", "--complex", "twist_two.json", "--window", "-1"],
        vec!["quantize", "projective_plane.json", "--box", "5"],
    ] {
        json(&gitwin(&args));
    }
}

#[test]
fn exit_codes() {
    let off_wall = gitwin(&["wallcross", "conifold.json", "--wall", "1", "--direction", "1"]);
    assert_eq!(off_wall.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&off_wall.stderr).contains("not on a wall"));

    assert_eq!(gitwin(&["frobnicate", "conifold.json"]).status.code(), Some(64));
    assert_eq!(gitwin(&["stratify"]).status.code(), Some(64));
    assert_eq!(gitwin(&["stratify", "conifold.json", "--format", "yaml"]).status.code(), Some(64));
    assert_eq!(gitwin(&["lift", "conifold.json"]).status.code(), Some(64));
    assert_eq!(gitwin(&["stratify", "missing.json"]).status.code(), Some(2));
    assert_eq!(gitwin(&["quantize", "conifold.json"]).status.code(), Some(2));
    assert_eq!(gitwin(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"k\": 1, \"n\": 1,\n \"weights\": [[1]],\n \"linearization\": [1],\n \"inner_product\": [[0]]}").unwrap();
    let bad = gitwin(&["stratify", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(msg.contains(":4: field `inner_product`") && msg.contains("positive definite"), "{msg}");
}

#[test]
fn internal_errors_exit_with_one() {
    assert_eq!(gitwin_cli::CliError::Internal("x".into()).exit_code(), 1);
}
