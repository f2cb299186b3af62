//! End-to-end checks of the command line interface.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planecurves"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bounds_and_hartshorne() {
    let out = run(&["bounds", "--d", "10", "--r", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n_lower"], 28);

    let out = run(&["hartshorne", "--d", "7", "--n", "12"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["r_max"], 3);
}

#[test]
fn decompose_and_table() {
    let out = run(&["decompose", "--r", "9"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["x"], 3);
    assert_eq!(v["beta"], 1);

    let out = run(&["table", "--d", "10"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("28"));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["carnot"], true);
    assert_eq!(v["numerics"], true);
}

#[test]
fn usage_and_domain_errors() {
    let out = run(&["bounds", "--d", "10"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["bounds", "--d", "10", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn construct_verify_roundtrip_is_deterministic() {
    let args = ["construct", "--d", "10", "--x", "1", "--beta", "0", "--p", "1009", "--seed", "42"];
    let first = run(&args);
    assert!(first.status.success());
    let cert = stdout(&first);
    let v: serde_json::Value = serde_json::from_str(&cert).unwrap();
    assert_eq!(v["report"]["r"], "3");
    assert_eq!(v["report"]["n"], "28");

    let second = run(&args);
    assert_eq!(cert, stdout(&second), "same seed must give identical output");

    let dir = std::env::temp_dir().join("planecurves-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    std::fs::write(&path, &cert).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], true);
}
