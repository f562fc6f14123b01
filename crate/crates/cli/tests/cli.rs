use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn grsod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grsod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_without_timing(o: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&o.stdout).expect("json output");
    v.as_object_mut().unwrap().remove("elapsedMillis");
    v
}

#[test]
fn calculator_examples() {
    let o = grsod(&["bbw", "--n", "4", "--k", "2", "--u", "[-1,-1]", "--q", "[0,0]", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degree"], 0);
    assert_eq!(v["dominant"], serde_json::json!([0, 0, -1, -1]));

    let o = grsod(&["bbw", "--n", "4", "--k", "2", "--u", "[0,-1]", "--q", "[]", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dominant"], serde_json::json!([0, 0, 0, -1]));
    assert_eq!(grsod(&["bbw", "--n", "4", "--k", "2", "--u", "[0,0,-1]", "--q", "[]"]).status.code(), Some(2));

    let o = grsod(&["lr", "--a", "[2,1]", "--b", "[2,1]", "--c", "[3,2,1]"]);
    assert_eq!(stdout(&o).trim(), "2");

    let o = grsod(&["blocks", "--n", "4", "--k", "2", "--path", "0,0;1,1;2,2", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sizes"], serde_json::json!([1, 4, 1]));

    let o = grsod(&["paths", "--n", "4", "--k", "2", "--enumerate", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 3);

    let o = grsod(&["staircase", "--n", "4", "--k", "2", "--kind", "u", "--lambda", "[2,1]"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ranks 2, 4, 4, 2"));
}

#[test]
fn verify_commands_pass() {
    for args in [
        &["verify-sod", "--n", "4", "--k", "2", "--all-paths"][..],
        &["verify-block", "--n", "4", "--k", "2", "--point", "1,1"][..],
        &["verify-block", "--n", "4", "--k", "2", "--point", "0,0"][..],
        &["verify-staircase", "--n", "4", "--k", "2"][..],
    ] {
        let o = grsod(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn mutations_exit_one_with_counterexamples() {
    for args in [
        &["verify-sod", "--n", "4", "--k", "2", "--mutate", "twist-swap", "--json"][..],
        &["verify-sod", "--n", "4", "--k", "2", "--mutate", "duplicate-class", "--json"][..],
        &["verify-staircase", "--n", "4", "--k", "2", "--mutate", "wedge-perturb", "--json"][..],
    ] {
        let o = grsod(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["status"], "fail");
        assert!(!v["details"]["counterexamples"].as_array().unwrap().is_empty());
    }
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(grsod(&["blocks", "--n", "4", "--k", "2", "--path", "0,0;2,2"]).status.code(), Some(2));
    assert_eq!(grsod(&["verify-sod", "--n", "11", "--k", "2"]).status.code(), Some(2));
    assert_eq!(grsod(&["verify-block", "--n", "4", "--k", "5", "--point", "0,0"]).status.code(), Some(2));
    assert_eq!(grsod(&["ext", "--n", "4", "--k", "2", "--src", "[1", "--dst", "[]"]).status.code(), Some(2));
}

#[test]
fn reports_independent_of_jobs() {
    let a = grsod(&["verify-sod", "--n", "5", "--k", "2", "--all-paths", "--json", "--jobs", "1"]);
    let b = grsod(&["verify-sod", "--n", "5", "--k", "2", "--all-paths", "--json", "--jobs", "4"]);
    assert_eq!(json_without_timing(&a), json_without_timing(&b));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.jsonl");
    let p = path.to_str().unwrap();
    let args = ["verify-block", "--n", "5", "--k", "2", "--point", "1,1", "--json"];
    let plain = json_without_timing(&grsod(&args));
    let first = grsod(&[&args[..], &["--cache", p]].concat());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().next().unwrap().contains("grsod-memo"));
    assert!(text.lines().count() > 1);
    let second = grsod(&[&args[..], &["--cache", p]].concat());
    assert_eq!(plain, json_without_timing(&first));
    assert_eq!(plain, json_without_timing(&second));

    fs::write(&path, "not a cache\n{\"kind\":\"lr\"}\n").unwrap();
    let corrupt = grsod(&[&args[..], &["--cache", p]].concat());
    assert_eq!(corrupt.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("corrupt"));
    assert_eq!(plain, json_without_timing(&corrupt));
}

#[test]
fn closed_stdout_keeps_exit_code() {
    let (reader, writer) = std::io::pipe().expect("pipe");
    drop(reader);
    let o = Command::new(env!("CARGO_BIN_EXE_grsod"))
        .args(["verify-sod", "--n", "4", "--k", "2", "--mutate", "twist-swap"])
        .stdout(writer)
        .output()
        .expect("binary runs");
    assert_eq!(o.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&o.stderr).contains("panicked"));
}
