//! End-to-end tests of the `cayleyq` binary: exit codes, report files, and
//! the printed classification lines.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayleyq"))
}

fn run_args(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fresh_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cayleyq-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run_args(&["--help"]).status.code(), Some(0));
    assert_eq!(run_args(&["--version"]).status.code(), Some(0));
    assert_eq!(run_args(&["tables", "--help"]).status.code(), Some(0));
}

#[test]
fn bad_flags_and_formats_are_usage_errors() {
    assert_eq!(run_args(&["tables", "--zap"]).status.code(), Some(1));
    assert_eq!(run_args(&["tables", "--format", "yaml"]).status.code(), Some(1));
    assert_eq!(run_args(&["tables", "--q", "four"]).status.code(), Some(1));
    assert_eq!(run_args(&[]).status.code(), Some(1));
}

#[test]
fn unsupported_field_orders_are_budget_refusals() {
    assert_eq!(run_args(&["tables", "--q", "9"]).status.code(), Some(3));
    assert_eq!(run_args(&["tables", "--q", "5"]).status.code(), Some(3));
    assert_eq!(run_args(&["crosscheck", "--q", "7"]).status.code(), Some(3));
    // Even orders fail the oddness invariant instead: usage.
    assert_eq!(run_args(&["tables", "--q", "4"]).status.code(), Some(1));
}

#[test]
fn malformed_or_zero_params_are_usage_errors() {
    assert_eq!(run_args(&["crosscheck", "--params", "1,2"]).status.code(), Some(1));
    assert_eq!(run_args(&["tables", "--params", "0,1,1"]).status.code(), Some(1));
    assert_eq!(run_args(&["tables", "--params", "1,,1"]).status.code(), Some(1));
}

#[test]
fn classify_prints_the_reference_summaries() {
    let out = run_args(&["classify", "--split", "--u", "q1", "--v", "r2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("Z, dim3"), "stdout: {stdout}");

    let out = run_args(&["classify", "--split", "--u", "q1", "--v", "q2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("J, dim4, F1J3"), "stdout: {stdout}");
}

#[test]
fn classify_rejects_a_dependent_pair() {
    let out = run_args(&["classify", "--u", "e0", "--v", "e0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fano_check_zero_samples_passes_vacuously_with_a_warning() {
    let out = run_args(&["fano-check", "--field", "q", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("vacuous"), "stderr: {stderr}");
}

#[test]
fn fano_check_writes_a_versioned_report() {
    let dir = fresh_dir("fano");
    let path = dir.join("report.json");
    let out = run_args(&[
        "fano-check",
        "--field",
        "q",
        "--samples",
        "5",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("\"schema\": 1"), "body: {body}");
    assert!(body.contains("\"seed\": 7"));
    assert!(body.contains("\"wall_time_ms\""));
    assert!(body.contains("\"config\""));
}

#[test]
fn tables_q3_csv_writes_all_four_files_with_verified_entries() {
    let dir = fresh_dir("tables");
    let out = run_args(&[
        "tables",
        "--q",
        "3",
        "--format",
        "csv",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let theta = std::fs::read_to_string(dir.join("theta.csv")).unwrap();
    assert!(theta.contains("Q,22113"), "theta.csv: {theta}");
    assert!(theta.contains("Z,364"));
    let blocks = std::fs::read_to_string(dir.join("n_blocks.csv")).unwrap();
    assert!(blocks.contains("M4,7371"));
    assert!(blocks.contains("F1J3,364"));
    let h = std::fs::read_to_string(dir.join("h_table.csv")).unwrap();
    assert!(h.starts_with("plane_type,M4,F2J2,S2J2,F1J3"));
    assert!(h.contains("U,9,0,4,0"));
    let t = std::fs::read_to_string(dir.join("t_table.csv")).unwrap();
    assert!(t.contains("Z,0,1,1,4"));
}
