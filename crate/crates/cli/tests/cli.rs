use std::path::PathBuf;
use std::process::{Command, Output};

use qmachine_core::groverperm::GroupTable;
use serde_json::Value;

fn qmachine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmachine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn entries(v: &Value) -> &Vec<Value> {
    v["entries"].as_array().expect("entries array")
}

#[test]
fn shipped_tables_match_builtin_groups() {
    let s3 = std::fs::read_to_string(data("s3.txt")).unwrap();
    let d4 = std::fs::read_to_string(data("d4.txt")).unwrap();
    assert_eq!(GroupTable::parse(&s3).unwrap(), GroupTable::s3());
    assert_eq!(GroupTable::parse(&d4).unwrap(), GroupTable::d4());
}

#[test]
fn report_all_passes_and_is_reproducible() {
    let args = ["report-all", "--seed", "42", "--trials", "100000", "--json"];
    let first = qmachine(&args);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let v = json(&first);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["trials"], 100000);
    assert!(v.get("wall_time_s").is_none());
    for e in entries(&v) {
        assert_eq!(e["pass"], true, "{e}");
        for key in ["name", "expected", "observed", "tolerance", "claim"] {
            assert!(e.get(key).is_some(), "missing {key} in {e}");
        }
    }
    let expected: Vec<f64> = entries(&v)
        .iter()
        .map(|e| e["expected"].as_f64().unwrap())
        .collect();
    for target in [5.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0, 0.5, 0.75, 1.0 / 6.0] {
        assert!(
            expected.iter().any(|x| (x - target).abs() < 1e-14),
            "no entry expects {target}"
        );
    }
    let second = qmachine(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn procfid_theta_beats_grid_bound() {
    let out = qmachine(&[
        "procfid", "--n", "16", "--theta", "0.3", "--trials", "1000", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let e = entries(&v)
        .iter()
        .find(|e| {
            e["name"]
                .as_str()
                .unwrap()
                .contains("nearest-grid fidelity > cos^2(pi/N) at theta=0.3")
        })
        .expect("theta entry");
    assert_eq!(e["pass"], true);
}

#[test]
fn grover_group_file_reports_witness() {
    let out = qmachine(&[
        "grover",
        "--group-file",
        &data("s3.txt"),
        "--g1",
        "2",
        "--g2",
        "3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let e = entries(&v)
        .iter()
        .find(|e| e["name"].as_str().unwrap().starts_with("conjugacy search"))
        .expect("conjugacy entry");
    assert_eq!(e["pass"], true);
    let note = e["note"].as_str().unwrap();
    assert!(note.contains("witness h="), "{note}");
    assert!(note.contains("processor uses"), "{note}");
}

#[test]
fn human_table_by_default() {
    let out = qmachine(&["channels"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  Psi+ program implements I"));
    assert!(text.contains("0 failed"));
}

#[test]
fn timing_only_on_request() {
    let out = qmachine(&["channels", "--json", "--timing"]);
    assert!(json(&out)["wall_time_s"].as_f64().is_some());
}

#[test]
fn same_seed_same_section_output() {
    let a = qmachine(&["phase-gate", "--seed", "7", "--trials", "5000", "--json"]);
    let b = qmachine(&["phase-gate", "--seed", "7", "--trials", "5000", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = qmachine(&["phase-gate", "--seed", "8", "--trials", "5000", "--json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn failed_verification_exits_one() {
    // The grid bound is attained, not beaten, midway between grid angles.
    let mid = std::f64::consts::FRAC_PI_4.to_string();
    let out = qmachine(&["procfid", "--n", "4", "--theta", &mid, "--trials", "100"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["teleport"],
        vec!["clone", "--bogus"],
        vec!["clone", "--trials", "many"],
        vec!["clone", "--trials", "0"],
        vec!["discriminate", "--overlap", "1.5"],
        vec!["grover", "--g1", "2"],
        vec!["grover", "--group-file", "/nonexistent/table.txt"],
        vec!["grover", "--g1", "9", "--g2", "0"],
        vec!["procfid", "--n", "1"],
        vec![],
    ] {
        let out = qmachine(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}
