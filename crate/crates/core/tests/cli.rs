//! Runs the `hyperterm` binary end to end.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn spec(name: &str) -> String {
    format!("{}/specs/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperterm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn check_reports_compatibility() {
    let o = run(&["check", &spec("binomial")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "compatible");
}

#[test]
fn incompatible_spec_exits_one() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hyperterm"))
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"k": 2, "generators": [{"num": "z2", "den": "1"}, {"num": "1", "den": "1"}]}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "incompatible");
}

#[test]
fn eval_odd_at_negative_point() {
    let o = run(&["eval", &spec("odd"), "--at", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/3");
    let o = run(&["eval", &spec("odd"), "--at", "3"]);
    assert_eq!(stdout(&o), "15");
}

#[test]
fn seed_override_scales_values() {
    let o = run(&["eval", &spec("odd"), "--seed", "0=2", "--at", "3"]);
    assert_eq!(stdout(&o), "30");
}

#[test]
fn compare_has_no_mismatches() {
    let o = run(&["compare", &spec("binomial"), "--window", "-4:4,-4:4"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["checked"], 81);
    assert_eq!(rep["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn json_outputs_parse() {
    for cmd in ["decompose", "structure", "factorial", "pochhammer"] {
        let o = run(&[cmd, &spec("odd")]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap_or_else(|e| panic!("{cmd}: {e}"));
    }
    let o = run(&["decompose", &spec("odd"), "--text"]);
    assert!(stdout(&o).contains("a = 2*t + 1"), "{}", stdout(&o));
}

#[test]
fn output_file_is_written() {
    let dir = std::env::temp_dir().join(format!("hyperterm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("form.json");
    let o = run(&["decompose", &spec("binomial"), "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path).unwrap().contains("\"chains\""));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(run(&["eval", &spec("odd")]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/spec.json"]).status.code(), Some(2));
    let o = run(&["eval", &spec("odd"), "--at", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dimension"));
}

#[test]
fn splitting_failure_exits_one() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hyperterm"))
        .args(["pochhammer", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"k": 1, "generators": [{"num": "z1^2 + 1", "den": "1"}], "seed": {"point": [0], "value": "1"}}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not split"));
}
