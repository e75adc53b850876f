use std::path::PathBuf;
use std::process::{Command, Output};

fn smash(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smash")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("smash-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn compute_truncated_json() {
    let o = smash(&["compute", "--case", "truncated", "--a", "3", "--nmax", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["totals"], serde_json::json!([3, 2, 2, 2]));
}

#[test]
fn compute_is_independent_of_jobs() {
    let one = smash(&["compute", "--case", "qplane", "--window", "total:4", "--nmax", "2", "--jobs", "1", "--format", "csv"]);
    let four = smash(&["compute", "--case", "qplane", "--window", "total:4", "--nmax", "2", "--jobs", "4", "--seed", "7", "--format", "csv"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn verify_passes_for_cqi() {
    let o = smash(&["verify", "--case", "cqi", "--a", "2", "--b", "3", "--q", "3/2", "--format", "csv"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("n,degree,computed,expected,status,note"));
    assert!(out.contains("0,\"total\",4,4,PASS"));
}

#[test]
fn verify_exit_code_reports_failures() {
    // the closed form for the torus lists HH_2 = 0, the engine finds 1
    let o = smash(&["verify", "--case", "qtorus"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let fail = v["rows"].as_array().unwrap().iter().find(|r| r["status"] == "FAIL").unwrap();
    assert_eq!(fail["n"], 2);
}

#[test]
fn group_ring_discrepancies_are_advisory() {
    let o = smash(&["verify", "--case", "group_ring_character", "--window", "-1..1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"].as_array().unwrap().iter().any(|r| r["status"] == "ADVISORY" && r["n"] == 0));
}

#[test]
fn pages_rows_and_columns() {
    for filt in ["rows", "columns"] {
        let o = smash(&["pages", "--case", "cqi", "--nmax", "2", "--filtration", filt]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["filtration"], filt);
        assert_eq!(v["e2_totals"], serde_json::json!([3, 2, 2]));
    }
}

#[test]
fn spec_file_with_flag_override() {
    let path = scratch("spec.json", r#"{"name": "cqi", "params": {"a": 3, "b": 3, "q": "2/1"}, "bounds": {"n_max": 1}}"#);
    let o = smash(&["compute", "--spec", path.to_str().unwrap(), "--b", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["totals"], serde_json::json!([4, 3]));
}

#[test]
fn confluence_of_presentation_files() {
    let good = r#"{
        "name": "quantum plane",
        "generators": [{"name": "x", "degree": [1, 0]}, {"name": "y", "degree": [0, 1]}],
        "swaps": [{"left": "y", "right": "x", "terms": [{"monomial": "x y", "coeff": "2/1"}]}]
    }"#;
    let o = smash(&["confluence", scratch("good.json", good).to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failures"], serde_json::json!([]));

    let bad = r#"{
        "generators": [{"name": "a", "degree": [1]}, {"name": "b", "degree": [1]}, {"name": "c", "degree": [1]}],
        "swaps": [
            {"left": "b", "right": "a", "terms": [{"monomial": "a b", "coeff": "2"}]},
            {"left": "c", "right": "b", "terms": [{"monomial": "b c", "coeff": "3"}]},
            {"left": "c", "right": "a", "terms": [{"monomial": "a c", "coeff": "5"}, {"monomial": "b b", "coeff": "1"}]}
        ]
    }"#;
    let o = smash(&["confluence", scratch("bad.json", bad).to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().count() > 1);
}

#[test]
fn invalid_input_is_an_error() {
    assert_eq!(smash(&["compute", "--case", "weyl"]).status.code(), Some(2));
    assert_eq!(smash(&["compute", "--case", "qplane", "--q", "1"]).status.code(), Some(2));
    assert_eq!(smash(&["compute"]).status.code(), Some(2));
}
