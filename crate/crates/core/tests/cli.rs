//! Black-box checks of the `ezd` binary's exit codes and output streams.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ezd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ezd")).args(args).output().unwrap()
}

fn shipped() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("jobs/example_s4.job").display().to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("ezd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn run_reaches_verdicts_with_exit_zero() {
    let out = ezd(&["run", &shipped()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "ezd-report/1");
    let cmds = v["commands"].as_array().unwrap();
    let phi = cmds.iter().find(|c| c["command"] == "homotopy check B.phi --window 0:3").unwrap();
    assert_eq!(phi["verdict"], "not null-homotopic");
    assert!(String::from_utf8_lossy(&out.stderr).contains("check ezd S f g: true"));
}

#[test]
fn emitted_reports_verify() {
    let out = ezd(&["run", &shipped()]);
    let report = scratch("report.json", &String::from_utf8(out.stdout).unwrap());
    let v = ezd(&["verify", &report]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stderr).contains("ok   phi"));

    let tampered = std::fs::read_to_string(&report).unwrap().replacen("\"witness\": [\n", "\"witness\": [\n \"7\",\n", 1);
    let t = scratch("tampered.json", &tampered);
    assert_eq!(ezd(&["verify", &t]).status.code(), Some(1));
}

#[test]
fn syntax_errors_exit_two_with_location() {
    let p = scratch("bad.job", "ring S vars x:1\nann q in S\n");
    let out = ezd(&["run", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:5: undefined reference `q`"));
    assert!(out.stdout.is_empty());
}

#[test]
fn runtime_errors_exit_nonzero() {
    let p = scratch("inexact.job", "ring S vars x:1, y:1 mod x*y\nelem f in S = x+y\nquotient R = S / f\n\
         complex K over R { module 0 twists [0]; module 1 twists [-1]; map d1 = [[y]] }\n\
         operators build K pair f,y\n");
    let out = ezd(&["run", &p]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["commands"][0]["status"], "error");
}

#[test]
fn reproduce_example_exit_codes() {
    assert_eq!(ezd(&["reproduce-example"]).status.code(), Some(0));
    assert_eq!(ezd(&["reproduce-example", "--dmax", "3"]).status.code(), Some(0));
    assert_eq!(ezd(&["reproduce-example", "--f", "x^2+y^2"]).status.code(), Some(1));
}

#[test]
fn missing_file_exits_two() {
    assert_eq!(ezd(&["run", "/nonexistent/x.job"]).status.code(), Some(2));
}
