//! End-to-end runs of the `ckdv` binary.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn ckdv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckdv"))
        .args(args)
        .env("CKDV_REPORT_DIR", dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn report(dir: &Path, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_majda_biello_at_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = ckdv(dir.path(), &["classify", "--system", "mb", "--a2", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("LWP") && stdout(&o).contains("s ≥ 3/4"), "{}", stdout(&o));
    let j = report(dir.path(), "classify");
    assert_eq!(j["summary"]["lwp"]["s_star"], "3/4");
    assert_eq!(j["summary"]["gwp"]["s_star"], "1");
    assert_eq!(j["manifest"]["command"], "classify");
    assert_eq!(j["manifest"]["timestamp"], "2023-11-14T22:13:20Z");
}

#[test]
fn classify_without_a_system_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = ckdv(dir.path(), &["classify"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--system"));
    assert_eq!(ckdv(dir.path(), &["classify", "--system", "mb"]).status.code(), Some(1));
    assert_eq!(ckdv(dir.path(), &["no-such-command"]).status.code(), Some(1));
    assert_eq!(ckdv(dir.path(), &[]).status.code(), Some(1));
    assert_eq!(ckdv(dir.path(), &["--selftest", "verify-quadrature"]).status.code(), Some(1));
    assert_eq!(ckdv(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn diagonal_system_with_rational_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["classify", "--system", "diagonal", "--a2", "-1/2", "--coef", "d11=1/3", "--coef", "d12=1/3"];
    let o = ckdv(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(dir.path(), "classify")["summary"]["lwp"]["s_star"], "-13/12");
    let bad = ckdv(dir.path(), &["classify", "--system", "diagonal", "--a2", "2", "--coef", "zz=1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sharpness_at_the_critical_pair_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let o = ckdv(dir.path(), &["sharpness", "--case", "claim-a", "--s", "-13/12", "--b", "11/18", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("N,ratio\n"));
    let j = report(dir.path(), "sharpness");
    assert_eq!(j["summary"]["verdict"], "boundary: flat ratio");
    assert_eq!(j["summary"]["s"], "-13/12");
    assert_eq!(j["summary"]["necessary_conditions_hold"], true);
    let csv = std::fs::read_to_string(dir.path().join("sharpness.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
}

#[test]
fn identical_inputs_give_identical_reports() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["sharpness", "--case", "nd1-quarter", "--s", "3/4", "--b", "3/5", "--ns", "16,64,256,1024"];
    for d in [&a, &b] {
        assert_eq!(ckdv(d.path(), &args).status.code(), Some(0));
    }
    for file in ["sharpness.json", "sharpness.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
    let other = tempfile::tempdir().unwrap();
    let changed = ["sharpness", "--case", "nd1-quarter", "--s", "3/4", "--b", "1/2", "--ns", "16,64,256,1024"];
    ckdv(other.path(), &changed);
    assert_ne!(
        report(a.path(), "sharpness")["manifest"]["config_digest"],
        report(other.path(), "sharpness")["manifest"]["config_digest"]
    );
}

#[test]
fn resonance_reports_thresholds_and_identities() {
    let dir = tempfile::tempdir().unwrap();
    let o = ckdv(dir.path(), &["resonance", "--a2", "-1", "--samples", "2000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["summary"]["pass"], true);
    assert_eq!(j["rows"][1]["estimate"], "D2");
    assert_eq!(j["rows"][1]["range"], "s ≥ -13/12");
    assert!(j["summary"]["coercivity"].as_f64().unwrap() > 0.0);
}

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("run.json");
    let config = r#"{
        "system": {"form": "general", "named": {"kind": "majda-biello", "a2": 2}},
        "grid": {"L": 62.83185307179586, "N": 64, "dt": 0.001, "T": 0.05},
        "data": {"u": {"kind": "gaussian", "params": {"amplitude": 0.5, "width": 2.0}}},
        "outputs": {"stride": 10}
    }"#;
    std::fs::write(&path, config).unwrap();
    path
}

#[test]
fn simulate_writes_a_series_and_checks_drift() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let cfg = config.to_str().unwrap();
    let o = ckdv(dir.path(), &["simulate", "--config", cfg, "--max-drift", "1e-6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("simulate.csv")).unwrap();
    assert!(csv.starts_with("t,E1,E2,norm_u,norm_v\n"));
    assert_eq!(csv.lines().count(), 7);
    let strict = ckdv(dir.path(), &["simulate", "--config", cfg, "--max-drift", "0"]);
    assert_eq!(strict.status.code(), Some(2));
    let missing = ckdv(dir.path(), &["simulate", "--config", "/nonexistent/run.json"]);
    assert_eq!(missing.status.code(), Some(1));
}
