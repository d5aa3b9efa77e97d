//! End-to-end checks of the command-line driver against the bundled
//! session files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xsq"))
}

fn sessions_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .join("sessions")
}

#[test]
fn check_validates_bundled_sessions() {
    for name in ["tensor_tour.json", "lie_tour.json", "groups_tour.json"] {
        let out = bin()
            .args(["check"])
            .arg(sessions_dir().join(name))
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {out:?}");
    }
}

#[test]
fn run_is_deterministic_and_exits_zero() {
    let run = || {
        bin()
            .args(["run", "--no-timings", "--format", "json"])
            .arg(sessions_dir().join("tensor_tour.json"))
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "report bytes must be identical");
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["all_passed"], serde_json::json!(true));
    let tasks = report["tasks"].as_array().unwrap();
    assert_eq!(tasks.len(), 10);
    assert_eq!(tasks[0]["data"]["order"], serde_json::json!(3));
}

#[test]
fn lie_session_reports_dimension() {
    let out = bin()
        .args(["run", "--no-timings"])
        .arg(sessions_dir().join("lie_tour.json"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tasks"][1]["data"]["dim"], serde_json::json!(3));
}

#[test]
fn failing_verifier_flips_the_exit_code() {
    let dir = tempfile_dir();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{
            "declare": {
                "s3": {"kind": "standard", "spec": "symmetric 3"},
                "a3": {"kind": "subgroup", "parent": "s3", "gens": [4]}
            },
            "tasks": [
                {"op": "intersection-square", "id": "sq", "args": {"parent": "s3", "m": "a3", "n": "a3", "as": "S"}},
                {"op": "verify-xsq", "id": "bad", "args": {"square": "S", "tamper": {"m": 1, "n": 2, "value": 1}}}
            ]
        }"#,
    )
    .unwrap();
    let out = bin().args(["run", "--no-timings"]).arg(&path).output().unwrap();
    assert!(!out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_passed"], serde_json::json!(false));
}

#[test]
fn explain_prints_axioms() {
    let out = bin().args(["explain", "verify-weak"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("W.1"));
    assert!(text.contains("W.4"));
    let out = bin().args(["explain", "no-such-op"]).output().unwrap();
    assert!(!out.status.success());
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("xsq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
