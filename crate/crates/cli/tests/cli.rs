//! Binary-level behavior: output formats, reproducibility and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ho_skip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ho-skip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL: &str = r#"
lambda_macro_per_km2 = 30.0
lambda_femto_per_km2 = 70.0
p_macro_watt = 1.0
p_femto_watt = 0.1
eta = 4.0
theta_db = 6.0
w_hz = 1e7
v_kmh_grid = [0.0, 120.0]
d_m_s = 0.35
d_f_s = 0.7
strategies = ["bc", "fs"]
"#;

#[test]
fn preset_csv_is_byte_stable_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = ho_skip(&[
            "run",
            "--preset",
            "table2",
            "--mc-samples",
            "2000",
            "--seed",
            "9",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let bytes_a = fs::read(&a).unwrap();
    assert_eq!(bytes_a, fs::read(&b).unwrap());

    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("# "));
    assert!(text.contains("# config_hash: "));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 1 + 7, "column row plus one row per choice");
    assert!(data[0].starts_with("strategy,ic,theta_db,"));
    // every row echoes the config hash in the last column
    let hash = text
        .lines()
        .find(|l| l.starts_with("# config_hash: "))
        .unwrap()
        .trim_start_matches("# config_hash: ")
        .to_owned();
    for row in &data[1..] {
        assert!(row.ends_with(&hash), "{row}");
    }
}

#[test]
fn changing_the_seed_changes_monte_carlo_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, seed) in [(&a, "9"), (&b, "10")] {
        let out = ho_skip(&[
            "run",
            "--preset",
            "table2",
            "--mc-samples",
            "2000",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    assert_ne!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn json_output_mirrors_the_grid() {
    let out = ho_skip(&["run", "--preset", "fig4", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    // 4 strategies x 1 threshold x 1 femto delay x 21 velocities
    assert_eq!(rows.len(), 84);
    let hash = v["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 16);
    for row in rows {
        assert_eq!(row["config_hash"].as_str().unwrap(), hash);
        assert!(row["coverage_mc"].is_null());
        assert!(row["coverage_analytic"].as_f64().unwrap().is_finite());
    }
    // rows arrive in grid order: strategy-major, then velocity
    assert_eq!(rows[0]["strategy"], "bc");
    assert_eq!(rows[0]["v_kmh"], 0.0);
    assert_eq!(rows[20]["v_kmh"], 200.0);
    assert_eq!(rows[21]["strategy"], "fs");
    // handover cost grows with velocity
    assert!(rows[20]["d_ho"].as_f64().unwrap() > rows[1]["d_ho"].as_f64().unwrap());
}

#[test]
fn strict_run_passes_when_monte_carlo_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.toml", SMALL);
    let out = ho_skip(&[
        "run",
        "--config",
        &config,
        "--mc-samples",
        "5000",
        "--strict",
        "--out",
        dir.path().join("o.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn validate_passes_on_a_reference_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.toml", SMALL);
    let out = ho_skip(&["validate", "--config", &config]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("checks passed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();

    let small_eta = write_config(
        dir.path(),
        "eta.toml",
        &SMALL.replace("eta = 4.0", "eta = 1.5"),
    );
    let out = ho_skip(&["validate", "--config", &small_eta]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("path-loss exponent"), "{err}");
    assert!(err.contains("> 2"), "{err}");

    let typo = write_config(dir.path(), "typo.toml", "lambda_macro = 30.0\n");
    let out = ho_skip(&["run", "--config", &typo]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("lambda_macro"), "{err}");
    assert!(err.contains("line 1"), "{err}");

    let out = ho_skip(&["run"]);
    assert_eq!(out.status.code(), Some(1));

    let out = ho_skip(&["run", "--preset", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("table2"));

    let out = ho_skip(&["run", "--config", "/nonexistent.toml"]);
    assert_eq!(out.status.code(), Some(1));

    // empty grids are configuration errors too
    let empty = write_config(
        dir.path(),
        "empty.toml",
        &SMALL.replace("theta_db = 6.0", "theta_db = []"),
    );
    let out = ho_skip(&["run", "--config", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("theta_db"));
}
