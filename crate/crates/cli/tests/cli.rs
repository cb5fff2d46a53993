//! End-to-end tests of the binary: exit codes, file outputs, determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zoll-finsler"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zoll-finsler-test-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_unit_vector_on_curve() {
    let out = run(&[
        "eval", "--epsilon", "0.25", "--R", "0", "--v1", "0", "--v2", "1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["F"].as_f64().unwrap(), 1.0);
    assert!(v["trusted"].as_bool().unwrap());
    assert!((v["K"].as_f64().unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn eval_round_limit_formula() {
    let out = run(&[
        "eval", "--epsilon", "1e-9", "--R", "0.5", "--v1", "1", "--v2", "1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let want = (1.0 + 0.5f64.cos().powi(2)).sqrt();
    assert!((v["F"].as_f64().unwrap() - want).abs() < 1e-6);
}

#[test]
fn eval_rejects_out_of_range_epsilon() {
    let out = run(&["eval", "--epsilon", "0.6", "--R", "0", "--v1", "0", "--v2", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_with_defaults_and_fails_when_forced() {
    let dir = tmpdir("verify");
    let out = run(&["verify", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 10, "{text}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("verify_report.json")).unwrap()).unwrap();
    assert!(report["all_pass"].as_bool().unwrap());

    let out = run(&[
        "verify",
        "--tol",
        "flag_curvature=1e-15",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL [ 7]"));
}

#[test]
fn unknown_tolerance_is_usage_error() {
    let out = run(&["verify", "--tol", "bogus=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn indicatrix_outputs_are_deterministic() {
    let run_once = |dir: &Path| {
        let out = run(&[
            "indicatrix",
            "--epsilon",
            "0.25",
            "--grid-R",
            "-0.6:0.6:4",
            "--grid-r",
            "0:3.14:25",
            "--seed",
            "7",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    };
    let d1 = tmpdir("ind1");
    let d2 = tmpdir("ind2");
    run_once(&d1);
    run_once(&d2);
    for entry in fs::read_dir(&d1).unwrap() {
        let name = entry.unwrap().file_name();
        let a = fs::read(d1.join(&name)).unwrap();
        let b = fs::read(d2.join(&name)).unwrap();
        assert_eq!(a, b, "{name:?} differs between identical runs");
    }
}

#[test]
fn indicatrix_csv_round_trips() {
    let dir = tmpdir("csv");
    let out = run(&[
        "indicatrix",
        "--grid-R",
        "0.3:0.3:1",
        "--grid-r",
        "0:3.14:10",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("indicatrix_00.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,v1,v2,implicit_residual,F_residual");
    for line in lines {
        for field in line.split(',') {
            let value: f64 = field.parse().expect("numeric field");
            // shortest round-trip formatting: re-printing reproduces the text
            assert_eq!(format!("{value}"), field);
        }
    }
}

#[test]
fn geodesics_full_period_passes_and_half_period_is_informational() {
    let dir = tmpdir("geo");
    let out = run(&[
        "geodesics",
        "--count",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("closure_report.json")).unwrap())
            .unwrap();
    assert!(report["worst_defect"].as_f64().unwrap() < 1e-5);
    assert_eq!(report["informational"].as_bool(), Some(false));
    let csv = fs::read_to_string(dir.join("geodesic_000.csv")).unwrap();
    assert!(csv.starts_with("s,r,theta,r_dot,theta_dot\n"));

    let out = run(&[
        "geodesics",
        "--count",
        "2",
        "--length",
        "3.14159",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("closure_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["informational"].as_bool(), Some(true));
    assert!(report["worst_defect"].as_f64().unwrap() > 1e-3);
}

#[test]
fn config_file_is_honored_and_flags_override() {
    let dir = tmpdir("cfg");
    let cfg_path = dir.join("run.json");
    fs::write(
        &cfg_path,
        r#"{"epsilon": 0.1, "seed": 3, "format": "json"}"#,
    )
    .unwrap();
    let out = run(&[
        "eval",
        "--config",
        cfg_path.to_str().unwrap(),
        "--R",
        "0",
        "--v1",
        "0",
        "--v2",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["epsilon"].as_f64(), Some(0.1));

    // flag beats file
    let out = run(&[
        "eval",
        "--config",
        cfg_path.to_str().unwrap(),
        "--epsilon",
        "0.3",
        "--R",
        "0",
        "--v1",
        "0",
        "--v2",
        "1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["epsilon"].as_f64(), Some(0.3));

    // malformed config is a usage error
    fs::write(&cfg_path, r#"{"epsilon": 0.1, "unknown_key": 1}"#).unwrap();
    let out = run(&[
        "eval",
        "--config",
        cfg_path.to_str().unwrap(),
        "--R",
        "0",
        "--v1",
        "0",
        "--v2",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curvature_scan_reports_positive_curvature() {
    let dir = tmpdir("scan");
    let out = run(&[
        "curvature-scan",
        "--epsilon",
        "0.45",
        "--grid-R",
        "-1.0:1.0:5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("curvature_summary.json")).unwrap())
            .unwrap();
    assert!(summary["min_gauss_curvature"].as_f64().unwrap() > 0.0);
    assert!(summary["max_flag_curvature_error"].as_f64().unwrap() < 1e-3);
}
