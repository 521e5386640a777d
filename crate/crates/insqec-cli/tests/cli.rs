//! Black-box tests on the built binary: exit codes, determinism, output
//! routing.

use std::io::Write;
use std::process::{Command, Output};

fn insqec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_insqec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

const FOUR_QUBIT: &str = r#"{
    "g": 2, "n": 2, "u": 1,
    "payload": [[0.6, 0.0], [0.0, 0.8]],
    "insertion": [[0.0, 0.0], [1.0, 0.0]],
    "position": 3,
    "seed": 7
}"#;

#[test]
fn single_is_byte_deterministic() {
    let cfg = write_config(FOUR_QUBIT);
    let path = cfg.path().to_str().unwrap();
    let first = insqec(&["single", "--config", path]);
    let second = insqec(&["single", "--config", path]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["schema"], "insqec/1");
    assert_eq!(report["passed"], true);
}

#[test]
fn seed_flag_overrides_config() {
    let cfg = write_config(FOUR_QUBIT);
    let path = cfg.path().to_str().unwrap();
    let base = insqec(&["single", "--config", path]);
    let reseeded = insqec(&["single", "--config", path, "--seed", "8"]);
    let a: serde_json::Value = serde_json::from_slice(&base.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&reseeded.stdout).unwrap();
    assert_eq!(a["config"]["seed"], 7);
    assert_eq!(b["config"]["seed"], 8);
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = insqec(&["example", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["mode"], "example");
}

#[test]
fn sweep_emits_csv() {
    let run = insqec(&["sweep", "--g", "2", "--n", "2", "--u", "1", "--format", "csv"]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.starts_with("a,j,w,analytic,oracle,deviation\n"));
    assert!(text.lines().count() > 1);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(insqec(&["single", "--g", "1"]).status.code(), Some(1));
    assert_eq!(insqec(&["single", "--bogus"]).status.code(), Some(1));
    assert_eq!(insqec(&["single", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(insqec(&["single", "--a", "99"]).status.code(), Some(1));

    let bad_norm = write_config(r#"{"payload": [[0.9, 0.0], [0.9, 0.0]]}"#);
    let run = insqec(&["single", "--config", bad_norm.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));

    let bad_key = write_config(r#"{"gap": 2}"#);
    let run = insqec(&["single", "--config", bad_key.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    assert_eq!(insqec(&["--help"]).status.code(), Some(0));
}

#[test]
fn statistical_violation_exits_2() {
    // Four shots landing outside the 3 sigma band for this seed.
    let run = insqec(&["montecarlo", "--shots", "4", "--seed", "2", "--a", "2"]);
    assert_eq!(run.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn near_unit_payload_is_renormalized_with_warning() {
    let cfg = write_config(
        r#"{
            "g": 2, "n": 2, "u": 1,
            "payload": [[0.70710678118, 0.0], [0.70710678118, 0.0]],
            "position": 0, "seed": 1
        }"#,
    );
    let run = insqec(&["single", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    let warnings = report["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("renormalized")));
}
