use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hartree-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn gate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pass = lab(&["gate", "--n", "3", "--s", "0", "--alpha", "2", "--b", "1/2"], dir.path());
    assert_eq!(code(&pass), 0);
    let report: serde_json::Value = serde_json::from_slice(&pass.stdout).unwrap();
    assert_eq!(report["pass"], true);
    let checks = report["details"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["tag"] == "as-r" && c["detail"].as_str().unwrap().contains("(5/6, 7/6)")));

    let fail = lab(&["gate", "--n", "3", "--s", "1", "--alpha", "2", "--b", "1"], dir.path());
    assert_eq!(code(&fail), 1);
    let report: serde_json::Value = serde_json::from_slice(&fail.stdout).unwrap();
    assert_eq!(report["checks"]["as-r"]["pass"], false);
    let written: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(written, report);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["gate", "--n", "3", "--s", "0.1/3", "--alpha", "2", "--b", "1"],
        vec!["gate", "--n", "3", "--alpha", "2", "--b", "1"],
        vec!["gate", "--frobnicate", "1"],
        vec!["launch"],
        vec!["verify", "--suite", "everything"],
    ] {
        let o = lab(&args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# gate point\nn = 3\ns = 1/2\nalpha = two\n").unwrap();
    let o = lab(&["gate", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "n = 3\ns = 1\nalpha = 2\nb = 1\n").unwrap();
    let o = lab(&["gate", "--config", cfg.to_str().unwrap(), "--s", "0", "--b", "0.5"], dir.path());
    assert_eq!(code(&o), 0);
}

#[test]
fn scan_is_byte_identical_across_runs_and_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["scan", "--n", "4", "--s", "1/4", "--steps", "30"];
    assert_eq!(code(&lab(&args, a.path())), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_hartree-lab"))
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("HARTREE_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    for name in ["scan.csv", "report.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let csv = fs::read_to_string(a.path().join("scan.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n,s,alpha,b,p,window_lo,window_hi,verdict"));
    assert_eq!(csv.lines().count(), 901);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hartree-lab"))
        .args(["gate", "--n", "3", "--s", "0", "--alpha", "2", "--b", "1/2", "--out"])
        .arg(dir.path())
        .env("HARTREE_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_writes_ratio_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["verify", "--suite", "holder", "--grid", "16", "--box", "8"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let csv = fs::read_to_string(dir.path().join("holder.csv")).unwrap();
    assert!(csv.starts_with("family,delta,lhs,rhs,ratio\n"));
}

#[test]
fn simulate_writes_trajectory_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(
        &[
            "simulate", "--n", "3", "--s", "0", "--alpha", "2", "--b", "1/2", "--grid", "16", "--box", "6", "--dt",
            "1/100", "--t_end", "1/10", "--record_every", "5", "--snapshots", "true",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let snap = fs::File::open(dir.path().join("snapshot_0002.bin")).unwrap();
    let field = hartree_lab::grid::ComplexField::read_snapshot(snap).unwrap();
    assert_eq!(field.grid().points(), 16);
}
