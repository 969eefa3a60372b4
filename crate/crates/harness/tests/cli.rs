//! End-to-end CLI checks against the built `dmdlab` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

fn dmdlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dmdlab"))
}

fn tmp(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("dmdlab_cli").join(tag);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn assert_file(path: &Path) {
    assert!(path.is_file(), "missing artifact {}", path.display());
}

#[test]
fn run_writes_reports_and_respects_flag_overrides() {
    let dir = tmp("run");
    let cfg_path = dir.join("exp.cfg");
    // The config says m=40; the flag below overrides it to 60.
    std::fs::write(
        &cfg_path,
        "test = 2b\nn_grid = 60\nsnapshots = 150\nm = 40\ntiming_repeats = 1\n",
    )
    .unwrap();
    let out = dir.join("out");
    let status = dmdlab()
        .args([
            "run",
            "--config",
            cfg_path.to_str().unwrap(),
            "--m",
            "60",
            "--export-trajectories",
            "--assert-bound",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&status.stderr)
    );
    for file in [
        "comparison.csv",
        "timings.csv",
        "report_dmd_g1.csv",
        "report_dmd_g2.csv",
        "report_pod.csv",
        "model_dmd_g1.bin",
        "model_dmd_g2.bin",
        "resolved_snapshots.bin",
        "resolved_snapshots.csv",
    ] {
        assert_file(&out.join(file));
    }
    // Flag override shows up in the report: prediction steps start at m=60.
    let report = std::fs::read_to_string(out.join("report_dmd_g1.csv")).unwrap();
    let first_row = report.lines().nth(1).unwrap();
    assert!(
        first_row.starts_with("60,"),
        "expected first step 60, got {first_row:?}"
    );
    // The saved trajectory round-trips through the documented binary format.
    let traj =
        dmd_core::snapshots::io::load_binary(&out.join("resolved_snapshots.bin")).unwrap();
    assert_eq!(traj.len(), 150);
    assert_eq!(traj.dim(), 60);
    // The saved model file reloads and predicts.
    let model = dmd_core::dmd::io::load_model(&out.join("model_dmd_g2.bin")).unwrap();
    assert_eq!(model.m, 60);
    dmd_core::dmd::predict(&model, 100).unwrap();
}

#[test]
fn run_without_test_or_config_fails_with_code_1() {
    let status = dmdlab().args(["run", "--m", "10"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn invalid_config_fails_with_code_1() {
    let dir = tmp("badcfg");
    let status = dmdlab()
        .args([
            "run",
            "--test",
            "2b",
            "--m",
            "500",
            "--snapshots",
            "200",
            "--out",
            dir.join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn sweep_produces_per_value_outputs_and_summary() {
    let dir = tmp("sweep");
    let status = dmdlab()
        .args([
            "sweep",
            "--test",
            "1b",
            "--n-grid",
            "60",
            "--methods",
            "dmd",
            "--timing-repeats",
            "1",
            "--param",
            "m",
            "--values",
            "100,200",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&status.stderr)
    );
    assert_file(&dir.join("m_100").join("report_dmd_g1.csv"));
    assert_file(&dir.join("m_200").join("report_dmd_g1.csv"));
    let summary = std::fs::read_to_string(dir.join("sweep_summary.csv")).unwrap();
    assert!(summary.starts_with("m,method,observable,rank"));
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn compare_merges_tables_and_ranks() {
    let dir = tmp("compare");
    // Two quick runs to produce inputs.
    for (tag, test) in [("a", "2b"), ("b", "2a")] {
        let status = dmdlab()
            .args([
                "run",
                "--test",
                test,
                "--n-grid",
                "60",
                "--snapshots",
                "150",
                "--m",
                "60",
                "--methods",
                "dmd",
                "--observables",
                "g2",
                "--timing-repeats",
                "1",
                "--out",
                dir.join(tag).to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(status.status.success());
    }
    let merged_out = dir.join("merged");
    let status = dmdlab()
        .args([
            "compare",
            dir.join("a/comparison.csv").to_str().unwrap(),
            dir.join("b/comparison.csv").to_str().unwrap(),
            "--out",
            merged_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&status.stderr)
    );
    assert_file(&merged_out.join("merged.csv"));
    assert_file(&merged_out.join("summary.csv"));
    let summary = std::fs::read_to_string(merged_out.join("summary.csv")).unwrap();
    // Both ranking views present.
    assert!(summary.contains("total_time_s,1,"));
    assert!(summary.contains("max_error,1,"));
}

#[test]
fn violated_bound_exits_with_code_2() {
    // A quarter-period training window on the fluctuating-boundary problem
    // genuinely breaks the training-window surrogate: prediction-window
    // truncation errors exceed it and the bound fails.
    let dir = tmp("bound2");
    let status = dmdlab()
        .args([
            "run",
            "--test",
            "1b",
            "--n-grid",
            "60",
            "--m",
            "50",
            "--methods",
            "dmd",
            "--timing-repeats",
            "1",
            "--assert-bound",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    // Partial results are still on disk.
    assert_file(&dir.join("report_dmd_g1.csv"));
    assert_file(&dir.join("comparison.csv"));
}

#[test]
fn compare_with_single_row_fails() {
    let dir = tmp("compare_single");
    let path = dir.join("one.csv");
    std::fs::write(
        &path,
        format!(
            "{}\ndmd,g1,3,1.0e0,1.0e0,2.0e0,1.0e-3,1.0e-3\n",
            dmd_harness::report::COMPARISON_HEADER
        ),
    )
    .unwrap();
    let status = dmdlab()
        .args([
            "compare",
            path.to_str().unwrap(),
            "--out",
            dir.join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}
