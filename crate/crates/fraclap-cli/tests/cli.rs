//! End-to-end tests of the `fraclap` binary: exit codes, CSV shape, config
//! round-trips.  Each test runs the real executable in a fresh process.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fraclap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraclap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// Data rows of a report (everything after the single header row).
fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn config_line(text: &str) -> &str {
    text.lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .expect("header carries the config")
}

#[test]
fn verify_side_i_defaults_pass() {
    let path = tmp("verify_i.csv");
    let out = fraclap(&["verify", "--side", "I", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    let rel_err: f64 = rows[0][5].parse().unwrap();
    assert!(rel_err <= 1e-5, "rel err {rel_err}");
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("side I"), "{summary}");
}

#[test]
fn verify_side_j_defaults_pass() {
    let out = fraclap(&["verify", "--side", "J"]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let rel_err: f64 = data_rows(&text)[0][5].parse().unwrap();
    assert!(rel_err <= 1e-5, "rel err {rel_err}");
}

#[test]
fn nu_zero_is_rejected_with_exit_2() {
    let out = fraclap(&["indices", "--nu", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("nu must be positive"), "{msg}");
}

#[test]
fn inadmissible_weight_is_rejected_with_exit_2() {
    // c2(1) = 0.7 - 1 < 0 violates the lower-side condition.
    let out = fraclap(&["verify", "--side", "I", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_header_replays_bit_identically() {
    let a = tmp("replay_a.csv");
    let out = fraclap(&[
        "kernel",
        "--which",
        "KJ",
        "--lambda",
        "0.3+0.1i",
        "--s",
        "1.5",
        "--x-start",
        "0.25",
        "--x-stop",
        "6",
        "--x-count",
        "5",
        "--x-spacing",
        "geometric",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let first = std::fs::read_to_string(&a).unwrap();

    let cfg = tmp("replay.json");
    std::fs::write(&cfg, config_line(&first)).unwrap();
    let b = tmp("replay_b.csv");
    let out = fraclap(&[
        "kernel",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let second = std::fs::read_to_string(&b).unwrap();
    assert_eq!(first, second);
}

#[test]
fn replayed_config_must_match_the_command() {
    let out = fraclap(&["verify", "--side", "J"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let cfg = tmp("mismatch.json");
    std::fs::write(&cfg, config_line(&text)).unwrap();
    let out = fraclap(&["kernel", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let cfg = tmp("override.json");
    std::fs::write(&cfg, r#"{"lambda": "0.1", "x_count": 3}"#).unwrap();
    let out = fraclap(&[
        "eval-power",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "0.25",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(config_line(&text).contains("\"lambda\":\"0.25\""), "{text}");
    assert!(config_line(&text).contains("\"x_count\":3"), "{text}");
    assert_eq!(data_rows(&text).len(), 3);
}

#[test]
fn indices_report_the_pinned_values() {
    // Order-zero defaults: one series term, all four convergence indices 1,
    // and mu* = -(mu + k + 1/2) = -1.3.
    let out = fraclap(&["indices"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    for col in 1..=4 {
        let v: f64 = rows[0][col].parse().unwrap();
        assert_eq!(v, 1.0, "column {col}");
    }
    let mu_star: f64 = rows[0][5].parse().unwrap();
    assert!((mu_star + 1.3).abs() < 1e-12);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("Delta=1"), "{summary}");
}

#[test]
fn operator_quadrature_agrees_with_the_power_image_via_the_cli() {
    // A pure power test function routes eval-operator through quadrature
    // that must land on eval-power's closed form.
    let shared = [
        "--lambda", "0.4", "--phi-p", "0.4", "--phi-q", "0", "--x-count", "3",
    ];
    let mut args_a = vec!["eval-power"];
    args_a.extend_from_slice(&shared);
    let mut args_b = vec!["eval-operator"];
    args_b.extend_from_slice(&shared);
    let a = fraclap(&args_a);
    let b = fraclap(&args_b);
    assert!(a.status.success() && b.status.success());
    let ra = data_rows(&String::from_utf8(a.stdout).unwrap());
    let rb = data_rows(&String::from_utf8(b.stdout).unwrap());
    for (x, y) in ra.iter().zip(&rb) {
        let (xr, yr): (f64, f64) = (x[2].parse().unwrap(), y[2].parse().unwrap());
        assert!((xr - yr).abs() <= 1e-8 * xr.abs(), "{xr} vs {yr}");
    }
}

#[test]
fn asymptotics_reports_both_regimes() {
    let out = fraclap(&["asymptotics", "--which", "KJ", "--lambda", "1", "--s", "0.5"]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "zero-plus");
    assert_eq!(rows[1][0], "infinity");
    // Near zero the kernel power is exact: fitted ~ Re(lambda - delta).
    let fitted: f64 = rows[0][1].parse().unwrap();
    let target: f64 = rows[0][2].parse().unwrap();
    assert_eq!(target, 0.5);
    assert!((fitted - target).abs() < 0.02, "{fitted}");
}

#[test]
fn grid_validation_failures_exit_2() {
    assert_eq!(fraclap(&["kernel", "--x-count", "0"]).status.code(), Some(2));
    assert_eq!(
        fraclap(&["kernel", "--x-start", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(fraclap(&["verify", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(
        fraclap(&["eval-operator", "--f", "0.5", "--m", "1,2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unknown_config_fields_name_the_field() {
    let cfg = tmp("typo.json");
    std::fs::write(&cfg, r#"{"lambada": "1"}"#).unwrap();
    let out = fraclap(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("lambada"), "{msg}");
}

#[test]
fn malformed_thread_cap_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_fraclap"))
        .args(["indices"])
        .env("FRACLAP_THREADS", "three")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_fraclap"))
        .args(["indices"])
        .env("FRACLAP_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn csv_goes_to_stdout_without_out_flag() {
    let out = fraclap(&["eval-power"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# fraclap eval-power report"), "{text}");
    assert!(text.contains("index,x,value_re,value_im"));
}
