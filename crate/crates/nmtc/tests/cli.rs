use std::path::Path;
use std::process::{Command, Output};

fn nmtc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmtc"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn tables_writes_csv_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmtc(&["tables"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["table1", "table2", "table3", "table4", "diff_tables"] {
        assert!(dir.path().join(format!("{name}.csv")).exists(), "{name}");
    }
    let t1 = std::fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert!(t1.starts_with("class,w_eff_hz,alpha_db,delta_tau_pct\n"));
    assert!(t1.contains("\nCC2,9000,"));
}

#[test]
fn strict_fails_on_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmtc(&["tables", "--strict"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn compare_has_one_known_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmtc(&["compare", "--strict", "--classes", "1"], dir.path());
    // The eMTC resource figure is the one known mismatch of this command.
    let stderr = String::from_utf8_lossy(&out.stderr);
    let mismatches: Vec<&str> = stderr.lines().filter(|l| l.starts_with("mismatch")).collect();
    assert_eq!(mismatches.len(), 1, "{stderr}");
    assert!(mismatches[0].contains("emtc_resources_hz_s"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[sim]\ntrials = 0\n").unwrap();
    let out = nmtc(&["tables", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&cfg, "[nonsense]\n").unwrap();
    let out = nmtc(&["tables", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = nmtc(&["tables", "--classes", "5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 3\n[analytics]\nn_devices = 5\n").unwrap();
    let out = nmtc(
        &["optimize", "--config", cfg.to_str().unwrap(), "--format", "json", "--classes", "2,4", "--bandwidth", "1080000"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("optimize.json")).unwrap();
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["class"] == "CC2" || r["class"] == "CC4"));
    // 1.08 MHz admits 9 kHz channels for CC2: 120 per slot.
    assert!(rows.iter().any(|r| r["class"] == "CC2" && r["w_hz"] == 9000 && r["n_rach"] == 120));
}

#[test]
fn threshold_override_marks_rows_unreferenced() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmtc(&["tables", "--threshold", "0.05", "--strict"], dir.path());
    let diff = std::fs::read_to_string(dir.path().join("diff_tables.csv")).unwrap();
    assert!(diff.lines().any(|l| l.starts_with("CC4 w_eff_khz,196.0,") && l.ends_with(",unreferenced")));
    assert!(diff.lines().any(|l| l.starts_with("CC1 nmtc tx1 snr_db,") && l.ends_with(",unreferenced")));
    // Only threshold-independent rows remain compared, and they match.
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn infeasible_threshold_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    // CC1's effective bandwidth falls below one subcarrier.
    let out = nmtc(&["tables", "--threshold", "0.2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmtc(&["simulate", "--classes", "4", "--trials", "20", "--seed", "9"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["per_vs_snr.csv", "timing_cdf.csv", "campaign.csv", "battery.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let per = std::fs::read_to_string(dir.path().join("per_vs_snr.csv")).unwrap();
    assert_eq!(per.lines().count(), 1 + 8);
}
