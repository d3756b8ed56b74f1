use std::path::PathBuf;
use std::process::{Command as Process, Output};

use cauchylab_cli::io::parse_pointcloud;
use cauchylab_cli::report::{Check, Comparison};
use cauchylab_cli::{emit_report, CliError, Report};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cauchylab-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cauchylab(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_cauchylab")).args(args).output().unwrap()
}

#[test]
fn pointcloud_file_round_trips_through_the_parser() {
    let path = scratch("cloud.csv");
    std::fs::write(&path, "x1,x2,w\n0,0,0.5\n1,0,0.25\n0,0,0.5\n0.5,0.5,1\n").unwrap();
    let file = parse_pointcloud(&path).unwrap();
    assert_eq!(file.rows, 4);
    assert_eq!(file.merged, 1);
    assert_eq!(file.measure.len(), 3);
    assert_eq!(file.measure.weight(0), 1.0);
    assert_eq!(file.measure.total_mass(), 2.25);
}

#[test]
fn pointcloud_errors_name_the_line() {
    let path = scratch("bad.csv");
    std::fs::write(&path, "x1,x2\n0,0\n1,oops\n").unwrap();
    match parse_pointcloud(&path) {
        Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn emitted_report_is_byte_stable_and_canonical() {
    let report = Report {
        checks: vec![
            Check::new("b", "second", 1.5, 1.0, 1.0, Comparison::Absolute),
            Check::new("a", "nan value", f64::NAN, 0.0, 1.0, Comparison::AtMost),
        ],
        tables: vec![],
    };
    let path = scratch("report.json");
    emit_report(&report, &path).unwrap();
    let first = std::fs::read(&path).unwrap();
    emit_report(&report, &path).unwrap();
    assert_eq!(first, std::fs::read(&path).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("1.500000000000e+00"));
    assert!(text.contains("null"));
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["checks"][0]["name"], "b");
}

#[test]
fn unwritable_report_path_is_an_io_error() {
    let path = scratch("missing-dir").join("nested").join("report.json");
    assert!(matches!(emit_report(&Report::default(), &path), Err(CliError::Io { .. })));
}

#[test]
fn koch_fixture_has_four_to_the_depth_plus_one_vertices() {
    let path = scratch("koch.csv");
    let out = cauchylab(&["--cmd", "fixture-gen", "--fixture", "koch", "--depth", "6", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,w"));
    assert_eq!(lines.count(), 4097);
    let cloud = parse_pointcloud(&path).unwrap();
    assert_eq!(cloud.measure.len(), 4097);
}

#[test]
fn passing_suite_exits_zero_and_prints_report() {
    let out = cauchylab(&["--cmd", "planes-check", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn tightened_tolerance_fails_with_exit_one() {
    let out = cauchylab(&["--cmd", "planes-check", "--tol.special-lagrangian-counterexample=5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL special-lagrangian-counterexample"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cauchylab(&["--cmd", "planes-check", "--tol.no-such-check=1"]).status.code(), Some(2));
    assert_eq!(cauchylab(&["--cmd", "planes-check", "--tol.lagrangian-coefficient=abc"]).status.code(), Some(2));
    assert_eq!(cauchylab(&["--cmd", "no-such-command"]).status.code(), Some(2));
    assert_eq!(cauchylab(&["--cmd", "potential-sweep", "--fixture", "sphere"]).status.code(), Some(2));
    let missing = scratch("absent.csv");
    assert_eq!(cauchylab(&["--cmd", "measure-diagnose", "--in", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn input_cloud_runs_measure_diagnostics() {
    let path = scratch("grid.csv");
    let gen = cauchylab(&["--cmd", "fixture-gen", "--fixture", "grid", "--out", path.to_str().unwrap()]);
    assert!(gen.status.success());
    let report_path = scratch("grid-report.json");
    let out = cauchylab(&["--cmd", "measure-diagnose", "--in", path.to_str().unwrap(), "--out", report_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let band = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "ahlfors-band").unwrap();
    assert_eq!(band["pass"], true);
}

#[test]
fn thread_count_does_not_change_the_report() {
    let run = |threads: &str| {
        Process::new(env!("CARGO_BIN_EXE_cauchylab"))
            .args(["--cmd", "demo-surface", "--depth", "3"])
            .env("CAUCHYLAB_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}
