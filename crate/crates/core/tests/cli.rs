//! The command line binary: reports, exit codes and reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclic-covers")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cyclic-covers-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn count_reports_family_size() {
    let out = run(&["count", "--q", "3", "--r", "2", "--g", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    let checks = report["checks"].as_array().unwrap();
    let size = checks.iter().find(|c| c["name"] == "family_size_series").unwrap();
    assert_eq!(size["lhs"], "144");
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn hypothesis_violations_exit_with_two() {
    let out = run(&["count", "--q", "5", "--r", "3", "--g", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not congruent to 1 mod 3"));
    let out = run(&["count", "--q", "7", "--r", "3", "--g", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["count", "--q", "13", "--r", "4", "--g", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["count", "--q", "4", "--r", "3", "--g", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_is_reproducible_byte_for_byte() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    for (path, jobs) in [(&a, "1"), (&b, "2")] {
        let out = run(&[
            "verify",
            "--q",
            "7",
            "--r",
            "3",
            "--g",
            "2",
            "--n-max",
            "6",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let report: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2]["mt"], "-12");
    assert_eq!(rows[2]["et"], "12");
    assert_eq!(rows[5]["avg_scaled"], "4");
}

#[test]
fn sampled_verify_reports_standard_errors() {
    let args = ["verify", "--q", "7", "--r", "3", "--g", "2", "--n-max", "3", "--sample", "500", "--seed", "7"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let report = json(&first);
    for row in report["rows"].as_array().unwrap() {
        assert!(row["std_error"].is_string());
        assert!(row["mt"].is_null());
    }
}

#[test]
fn density_csv_and_support_gate() {
    let out = run(&["density", "--q", "7", "--r", "3", "--g-list", "2", "--alpha", "0.4", "--one-sided"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("g,lhs,rhs_refined,rhs_ks,dev_r,residual_refined,residual_ks"));
    assert!(lines.next().unwrap().starts_with("2,"));

    let out = run(&["density", "--q", "7", "--r", "3", "--g-list", "2", "--alpha", "0.6", "--one-sided"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the allowed support"));
}

#[test]
fn tabulated_test_function_matches_builtin() {
    let g = 2u32;
    let alpha = 0.4;
    let path = scratch("fhat.csv");
    let mut table = String::from("x,fhat\n");
    for n in 0..=2 * g {
        let x = n as f64 / (2 * g) as f64;
        table += &format!("{x},{}\n", (1.0 - x / alpha).max(0.0));
    }
    std::fs::write(&path, table).unwrap();
    let base = ["density", "--q", "7", "--r", "3", "--g-list", "2", "--one-sided", "--format", "json"];
    let builtin = json(&run(&[&base[..], &["--alpha", "0.4"]].concat()));
    let tabulated = json(&run(&[&base[..], &["--testfn", path.to_str().unwrap()]].concat()));
    let lhs = |v: &serde_json::Value| v["rows"][0]["lhs"].as_str().unwrap().parse::<f64>().unwrap();
    assert!((lhs(&builtin) - lhs(&tabulated)).abs() < 1e-12);
    assert!(tabulated["rows"][0]["lhs_eigen"].is_null());
}

#[test]
fn zero_test_function_gives_zero_density() {
    let path = scratch("zero.csv");
    std::fs::write(&path, "x,fhat\n0,0\n0.25,0\n").unwrap();
    let out = run(&[
        "density",
        "--q",
        "7",
        "--r",
        "3",
        "--g-list",
        "2",
        "--testfn",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["rows"][0]["lhs"], "0.0000000000000000e0");
}
