//! End-to-end CLI tests: determinism of the JSON reports, exit codes, and
//! the CSV formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> PathBuf {
    // target/<profile>/isoperimetrix next to the test executable's deps dir
    let mut p = std::env::current_exe().expect("test exe path");
    p.pop();
    if p.ends_with("deps") {
        p.pop();
    }
    p.join("isoperimetrix")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("ISOPERIMETRIX_CONFIG")
        .output()
        .expect("spawn isoperimetrix")
}

#[test]
fn identical_commands_produce_identical_json() {
    let args =
        ["constant", "cheeger", "--measure", "exponential", "--no-timestamp"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "report/v1");
    let che = v["result"]["cheeger_constant"].as_f64().unwrap();
    assert!((che - 1.0).abs() <= 1e-3, "cheeger constant {che}");
    assert!(v.get("timestamp_unix").is_none());
}

#[test]
fn timestamp_included_by_default() {
    let out = run(&["constant", "cheeger", "--measure", "uniform:0,1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["timestamp_unix"].is_f64());
}

#[test]
fn profile_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let out = run(&[
        "profile",
        "--measure",
        "gaussian",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,J(t)"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 512, "expected a dense grid, got {} rows", rows.len());
    // the profile peaks at 1/sqrt(2 pi) near t = 1/2
    let max: f64 = rows
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!((max - 0.3989422804014327).abs() < 1e-6, "profile peak {max}");
}

#[test]
fn grid_measure_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("measure.csv");
    // two-sided exponential potential sampled on a grid
    let mut text = String::from("x,value\n");
    for i in -40..=40 {
        let x = i as f64 * 0.25;
        text.push_str(&format!("{x},{}\n", x.abs() + std::f64::consts::LN_2));
    }
    std::fs::write(&path, text).unwrap();
    let spec = format!("potential-grid:{}", path.display());
    let out = run(&["constant", "cheeger", "--measure", &spec, "--no-timestamp"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let che = v["result"]["cheeger_constant"].as_f64().unwrap();
    assert!((che - 1.0).abs() <= 5e-3, "grid-sampled exponential cheeger {che}");
}

#[test]
fn usage_error_exits_nonzero_with_offending_token() {
    let out = run(&["constant", "cheeger", "--measure", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nonsense"), "stderr should name the bad token: {err}");
}

#[test]
fn verify_single_lemma_passes() {
    let out = run(&[
        "verify",
        "mazya-duality",
        "--measure",
        "gaussian",
        "--N",
        "phi:2",
        "--a",
        "0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "expected a PASS line: {stdout}");
}

#[test]
fn verify_suite_flag_accepts_paper_only() {
    let ok = run(&["verify", "gaussian-lsi-anchor", "--suite", "paper"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["verify", "gaussian-lsi-anchor", "--suite", "unknown"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn transfer_report_carries_ledger_with_citations() {
    let out = run(&[
        "transfer",
        "os-to-iso",
        "--N",
        "power:2",
        "--q",
        "2",
        "--D",
        "1",
        "--no-timestamp",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ledger = &v["constants_ledger"];
    let factors = ledger["factors"].as_array().unwrap();
    assert!(factors.len() >= 3);
    for f in factors {
        assert!(f["citation"].as_str().map_or(false, |c| !c.is_empty()));
    }
    // audit: lo = seed * product of lo-side factors
    let seed = ledger["seed"].as_f64().unwrap();
    let lo = ledger["lo"].as_f64().unwrap();
    let product: f64 = factors
        .iter()
        .filter(|f| f["side"] != "hi")
        .map(|f| f["value"].as_f64().unwrap())
        .product();
    assert!((seed * product - lo).abs() <= 1e-12 * lo.abs().max(1.0));
}

#[test]
fn config_file_changes_hash_and_respects_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.toml");
    std::fs::write(&cfg_path, "[quadrature]\nrel_tol = 1e-8\n").unwrap();
    let base = run(&["constant", "cheeger", "--measure", "exponential", "--no-timestamp"]);
    let tuned = Command::new(bin())
        .args(["constant", "cheeger", "--measure", "exponential", "--no-timestamp"])
        .env("ISOPERIMETRIX_CONFIG", cfg_path.to_str().unwrap())
        .output()
        .unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&base.stdout).unwrap();
    let vt: serde_json::Value = serde_json::from_slice(&tuned.stdout).unwrap();
    assert_ne!(vb["config_hash"], vt["config_hash"]);
    // bad config is rejected
    std::fs::write(&cfg_path, "[quadrature]\nmax_subdivisions = 2\n").unwrap();
    let bad = Command::new(bin())
        .args(["constant", "cheeger", "--measure", "exponential"])
        .env("ISOPERIMETRIX_CONFIG", cfg_path.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
