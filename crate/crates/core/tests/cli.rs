use std::process::Command;

use serde_json::Value;

fn formtop(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_formtop"))
        .args(args)
        .output()
        .expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).expect("JSON report on stdout");
    (report, out.status.code().expect("exit code"))
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const LEVEL_THREE: &str = r#"{"kind":"cantor","branch":2,"depth":3,"bar":[[0,0,0],[0,0,1],[0,1,0],[0,1,1],[1,0,0],[1,0,1],[1,1,0],[1,1,1]],"monotone":true,"inductive":false}"#;

#[test]
fn fan_on_level_three_bar_reports_three() {
    let dir = tempfile::tempdir().unwrap();
    let bar = write(&dir, "bar.json", LEVEL_THREE);
    let (r, code) = formtop(&["fan", "--bar", &bar, "--depth", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["command"], "fan");
    assert_eq!(r["witnesses"][0]["n"], 3);
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == true));
}

#[test]
fn false_is_not_forced_at_the_top_of_a_double() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(&dir, "double-cantor.json", r#"{"kind":"cantor","depth":3,"double":true}"#);
    let f = write(&dir, "f.txt", "false\n");
    let (r, code) = formtop(&["force", "--space", &space, "--at", "D()", "--formula", &f]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"][0]["verdict"]["FailsWithinFuel"]["exhausted"], false);
}

#[test]
fn forced_formula_carries_a_rechecked_derivation() {
    let (r, code) = formtop(&["force", "--formula", "exists n:Nat. App(pi, 1, n)", "--depth", "2"]);
    assert_eq!(code, 0);
    assert!(r["witnesses"][0]["verdict"]["Holds"].is_object());
}

#[test]
fn check_forcing_suite_passes() {
    let (r, code) = formtop(&["check", "forcing", "--seed", "1", "--samples", "200"]);
    assert_eq!(code, 0);
    assert_eq!(r["config"]["seed"], 1);
}

#[test]
fn errors_produce_a_structured_report() {
    let (r, code) = formtop(&["fan", "--bar", "/nonexistent/bar.json"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdicts"][0]["name"], "error");
    assert_eq!(r["verdicts"][0]["pass"], false);
}

#[test]
fn bar_rule_rejects_cantor_space() {
    let dir = tempfile::tempdir().unwrap();
    let bar = write(
        &dir,
        "bar.json",
        r#"{"kind":"cantor","depth":2,"bar":[[]],"monotone":true,"inductive":true}"#,
    );
    let (r, code) = formtop(&["bar", "--bar", &bar]);
    assert_eq!(code, 2);
    assert!(r["verdicts"][0]["detail"].as_str().unwrap().contains("Baire"));
}

#[test]
fn continuity_from_a_relation_document() {
    let dir = tempfile::tempdir().unwrap();
    let rel = write(
        &dir,
        "rel.json",
        r#"{"name":"flip","depth":1,"read":1,"values":{"0":[1],"1":[0]}}"#,
    );
    let (r, code) = formtop(&["continuity", "--relation", &rel]);
    assert_eq!(code, 0);
    let points = r["witnesses"][0]["points"].as_array().unwrap();
    assert!(!points.is_empty());
    for p in points {
        assert_eq!(p["f"][0].as_u64().unwrap(), 1 - p["point"]["prefix"].get(0).unwrap_or(&p["point"]["tail"]).as_u64().unwrap());
    }
}
