use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bec-steering"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn category(out: &Output) -> String {
    let line = String::from_utf8_lossy(&out.stderr);
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn missing_dataset_reports_io() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--dataset", "nope", "analyze"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(category(&out), "io");
}

#[test]
fn unknown_config_key_reports_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "bogus = 1\n").unwrap();
    let out = run(&["--config", "c.toml", "simulate"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(category(&out), "config");
}

#[test]
fn empty_report_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--out", ".", "report"], dir.path());
    assert_eq!(out.status.code(), Some(6));
    assert_eq!(category(&out), "empty_report");
}

#[test]
fn simulate_then_sweep_then_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "[acquisition]\nsubsets = 2\n").unwrap();
    let ok = |args: &[&str]| {
        let out = run(args, dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };
    ok(&["--config", "c.toml", "--seed", "9", "--out", "run", "simulate"]);
    ok(&["--out", "run", "--dataset", "run/dataset", "--sweep", "gap-position", "sweep"]);
    ok(&["--out", "run", "--format", "jsonl", "report"]);
    let csv = std::fs::read_to_string(dir.path().join("run/gap_position.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(dir.path().join("run/gap_position.jsonl").exists());
    assert!(dir.path().join("run/summary.txt").exists());
}
