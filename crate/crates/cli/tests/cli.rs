//! Runs the `fourier` binary end to end against a throwaway cache directory.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fourier(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fourier"))
        .args(args)
        .env("FOURIER_CACHE_DIR", cache)
        .env_remove("FOURIER_LONG")
        .env_remove("FOURIER_THREADS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn manifests(cache: &Path) -> Vec<Value> {
    let Ok(dir) = std::fs::read_dir(cache.join("manifests")) else {
        return Vec::new();
    };
    dir.map(|e| serde_json::from_str(&std::fs::read_to_string(e.unwrap().path()).unwrap()).unwrap())
        .collect()
}

#[test]
fn norms_are_cached_with_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let first = fourier(dir.path(), &["--json", "norms", "6"]);
    assert_eq!(code(&first), 0);
    let v = json(&first);
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[2], serde_json::json!([6, 6, 6, 6, 6, 6]));

    let m = manifests(dir.path());
    assert_eq!(m.len(), 1);
    assert_eq!(m[0]["command"], "norms");
    assert_eq!(m[0]["cached"], false);
    assert!(m[0]["versions"]["fourier-core"].is_string());

    let second = fourier(dir.path(), &["--json", "norms", "6"]);
    assert_eq!(first.stdout, second.stdout);
    let m = manifests(dir.path());
    assert_eq!(m[0]["cached"], true);
    assert!(dir.path().join("lock").exists());
}

#[test]
fn no_cache_leaves_the_directory_alone() {
    let dir = tempfile::tempdir().unwrap();
    let out = fourier(dir.path(), &["--no-cache", "norms", "4"]);
    assert_eq!(code(&out), 0);
    assert!(!dir.path().join("manifests").exists());
}

#[test]
fn enumerate_emits_matrix_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = fourier(dir.path(), &["--json", "enumerate", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 2);
    for m in list {
        assert_eq!(m["n"], 4);
        assert_eq!(m["s"].as_array().unwrap().len(), 4);
        assert_eq!(m["norms"].as_array().unwrap().len(), 4);
        assert_eq!(m["degrees"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn matrix_from_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_fourier"))
        .args(["--json", "modulus", "-"])
        .env("FOURIER_CACHE_DIR", dir.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"n": 2, "s": [[1, 1], [1, -1]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["modulus"], 2);
}

#[test]
fn verification_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = fourier(dir.path(), &["--json", "verify", "dim18"]);
    assert_eq!(code(&ok), 0);
    let v = json(&ok);
    assert_eq!(v["modular_datum"], true);
    assert_eq!(v["finite_order"], 6);

    // the stored T of dim16 does not satisfy the modular equation
    let bad = fourier(dir.path(), &["--json", "verify", "dim16"]);
    assert_eq!(code(&bad), 1);
    assert_eq!(json(&bad)["modular_equation"], false);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&fourier(dir.path(), &["bogus"])), 2);
    assert_eq!(code(&fourier(dir.path(), &["norms"])), 2);
    assert_eq!(code(&fourier(dir.path(), &["cmt", "no-such-entry"])), 2);
    assert_eq!(code(&fourier(dir.path(), &["group", "info", "X9"])), 2);
}

#[test]
fn budgets_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = fourier(dir.path(), &["enumerate", "8", "--budget", "10"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert_eq!(code(&fourier(dir.path(), &["reproduce", "12"])), 3);
}

#[test]
fn reproduce_small_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = fourier(dir.path(), &["--json", "reproduce", "6"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn group_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = fourier(dir.path(), &["--json", "group", "info", "S4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["order"], 24);

    let out = fourier(dir.path(), &["group", "chartab", "S3"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("chi3"));

    let out = fourier(dir.path(), &["group", "subdirect", "S3", "(1 2 3)", "2", "--rational-check"]);
    assert_eq!(code(&out), 0);

    // Z3 has an irrational double
    assert_eq!(code(&fourier(dir.path(), &["qdouble", "Z3", "--rational-check"])), 1);
    assert_eq!(code(&fourier(dir.path(), &["qdouble", "S3", "--rational-check", "--fourier"])), 0);
}

#[test]
fn catalog_tags_check_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = fourier(dir.path(), &["catalog", "check"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = fourier(dir.path(), &["--json", "catalog", "show", "s(8,2)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["n"], 8);
}
