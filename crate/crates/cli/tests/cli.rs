use std::path::PathBuf;
use std::process::{Command, Output};

fn chiral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chiral"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn character_of_the_full_modular_group() {
    let o = chiral(&["character", "--gamma", "full", "--max-order", "3", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("coefficients: 1, 0, 2, 4\n"));
}

#[test]
fn character_json() {
    let o = chiral(&["--json", "character", "--max-order", "5"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"][2], "2");
    assert_eq!(v["group"], "full");
}

#[test]
fn character_from_a_table() {
    let path = tmp("table.json", r#"{"group":"test","dims":{"0":1,"2":1,"4":0,"6":2,"8":1}}"#);
    let o = chiral(&["character", "--max-order", "4", "--table", path.to_str().unwrap(), "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("agree"));
}

#[test]
fn missing_table_entry_is_a_domain_error() {
    let path = tmp("short.json", r#"{"group":"short","dims":{"0":1}}"#);
    let o = chiral(&["character", "--max-order", "3", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("short"));
}

#[test]
fn constant_lifting_prints_the_vector() {
    let o = chiral(&["lift", "--lambda", "1", "--mu", "1", "--constant"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("vector: 1 * a[-1]b[-1] + 2 * b[-2] E + 1 * b[-1]^2 E'"), "{out}");
    assert!(out.contains("invariant: yes"));
}

#[test]
fn adjoint_prints_four_terms() {
    let o = chiral(&["adjoint", "--lambda", "1", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "1 * a[-1]b[-1] + 2*g^1*u^-1 * b[-2] + 2*g^1*u^-1 * b[-1]^2a0^1 - 1*g^2*u^-2 * b[-1]^2"
    );
}

#[test]
fn adjoint_json_has_terms() {
    let o = chiral(&["--json", "adjoint", "--lambda", "1", "--mu", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
    assert_eq!(v["weight_cap"], 2);
}

#[test]
fn solved_and_closed_form_liftings_agree() {
    let solved = chiral(&["lift", "--mu", "2,1"]);
    let closed = chiral(&["lift", "--mu", "2,1", "--closed-form"]);
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(closed.status.code(), Some(0));
    let body = |o: &Output| stdout(o).split_once(':').unwrap().1.to_string();
    assert_eq!(body(&solved), body(&closed));
    assert!(stdout(&solved).contains("1/4 * b[-1]^3a0^1"));
}

#[test]
fn wrong_weight_fails_verification() {
    let o = chiral(&["lift", "--mu", "2", "--weight", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("invariant: no"));
}

#[test]
fn verify_replays_lift_output() {
    let lifted = chiral(&["--json", "lift", "--mu", "2,1"]);
    let path = tmp("lift.json", &stdout(&lifted));
    let o = chiral(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "invariant: yes");
}

#[test]
fn verify_reports_a_residual() {
    let bare = r#"[{"kind":"vector","lambda":"","mu":"2","upow":0,"gamma_poly":["1"],
        "symbol":{"name":"f","depth":0,"weight":2}}]"#;
    let path = tmp("bare.json", bare);
    let o = chiral(&["--json", "verify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["invariant"], false);
    assert!(!v["residual"].as_array().unwrap().is_empty());
}

#[test]
fn bad_input_exits_with_one() {
    for args in [
        &["lift", "--mu", "x"][..],
        &["lift", "--lambda", "1", "--mu", "1"],
        &["lift", "--lambda", "2"],
        &["verify", "--input", "/nonexistent/file.json"],
        &["frobnicate"],
    ] {
        let o = chiral(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn unknown_symbol_is_a_domain_error() {
    let odd = r#"[{"kind":"vector","lambda":"","mu":"1","upow":0,"gamma_poly":["1"],
        "symbol":{"name":"g","depth":0,"weight":3}}]"#;
    let path = tmp("odd.json", odd);
    let o = chiral(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dims_lists_the_table() {
    let o = chiral(&["dims", "--gamma", "full", "--max", "24"]);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "12 2"));
    assert!(out.lines().any(|l| l == "24 3"));
    let o = chiral(&["--json", "dims", "--max", "4"]);
    assert_eq!(stdout(&o).trim(), r#"{"group":"full","dims":{"0":1,"2":0,"4":1}}"#);
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(chiral(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let o = chiral(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
