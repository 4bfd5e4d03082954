use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dr2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dr2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture_copy(dir: &Path) {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/surfaces");
    for entry in fs::read_dir(src).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.join(entry.file_name())).unwrap();
    }
}

#[test]
fn class_at_two() {
    let out = dr2(&["class", "--d", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["outputs"]["class"]["psi1psi2"], "6");
    assert_eq!(v["outputs"]["class"], v["outputs"]["solver_class"]);
}

#[test]
fn class_symbolic_is_coefficient_arrays() {
    let v = json(&dr2(&["class"]));
    let psi = v["outputs"]["class"]["psi1psi2"].as_array().expect("array");
    assert_eq!(psi.len(), 5);
    let expected = ["0", "0", "-1/2", "0", "1/2"];
    assert_eq!(psi, &expected.map(Value::from).to_vec());
}

#[test]
fn class_at_one_is_zero_with_note() {
    let out = dr2(&["class", "--d", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    for (_, c) in v["outputs"]["class"].as_object().unwrap() {
        assert_eq!(c, "0");
    }
    let notes = v["notes"].as_array().unwrap();
    assert!(notes
        .iter()
        .any(|n| n.as_str().unwrap().contains("d^2 - 1")));
}

#[test]
fn malformed_d_is_a_usage_error() {
    for bad in ["0", "-3", "x", "1.5"] {
        let out = dr2(&["class", "--d", bad]);
        assert_eq!(out.status.code(), Some(2), "d = {bad}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn verify_passes_on_builtin_data() {
    let out = dr2(&["verify"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = json(&out);
    let checks = v["outputs"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 13);
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn verify_only_runs_one_check() {
    let v = json(&dr2(&["verify", "--only", "psi3"]));
    let checks = v["outputs"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "psi3");
}

#[test]
fn verify_unknown_check_fails() {
    let out = dr2(&["verify", "--only", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn corrupted_fixture_fails_solve() {
    let dir = tempfile::tempdir().unwrap();
    fixture_copy(dir.path());
    let path = dir.path().join("family01.json");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["rhs"][0] = Value::String("-3".into());
    fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();

    let out = dr2(&["verify", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let solve = v["outputs"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "solve")
        .unwrap();
    assert_eq!(solve["status"], "failed");
}

#[test]
fn fixture_dir_round_trip_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    fixture_copy(dir.path());
    let a = json(&dr2(&["class", "--d", "3"]));
    let b = json(&dr2(&[
        "class",
        "--d",
        "3",
        "--fixtures",
        dir.path().to_str().unwrap(),
    ]));
    assert_eq!(a["outputs"], b["outputs"]);
    assert_eq!(a["fixtures"], b["fixtures"]);
}

#[test]
fn sixteen_equations() {
    let v = json(&dr2(&["equations"]));
    assert_eq!(v["outputs"]["rows"].as_array().unwrap().len(), 16);
    let list = dr2(&["equations", "--list"]);
    assert!(list.status.success());
    assert_eq!(String::from_utf8(list.stdout).unwrap().lines().count(), 16);
}

#[test]
fn json_output_is_deterministic_and_round_trips() {
    for cmd in [
        &["class"][..],
        &["solve"],
        &["pushforward", "--d", "4"],
        &["cone-m21"],
        &["ct"],
        &["cone", "--d", "3"],
    ] {
        let a = dr2(cmd);
        let b = dr2(cmd);
        assert!(a.status.success(), "{cmd:?}");
        assert_eq!(a.stdout, b.stdout, "{cmd:?}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again.as_bytes(), &a.stdout[..], "{cmd:?}");
    }
}

#[test]
fn markdown_has_tables() {
    let out = dr2(&["class", "--d", "2", "--emit", "md"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# dr2 class"));
    assert!(text.contains("|---|"));
}

#[test]
fn zero_strata_table_fails_nonextremality() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strata.json");
    let zero: Vec<&str> = vec!["0"; 14];
    let table: serde_json::Map<String, Value> = ["d11|", "d01|", "d0|", "d00"]
        .iter()
        .map(|n| (n.to_string(), serde_json::json!(zero)))
        .collect();
    fs::write(&path, Value::Object(table).to_string()).unwrap();
    let out = dr2(&["cone", "--strata-table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_strata_entry_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strata.json");
    fs::write(&path, "{}").unwrap();
    let out = dr2(&["cone", "--strata-table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d11|"));
}
