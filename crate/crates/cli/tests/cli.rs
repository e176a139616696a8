//! End-to-end tests driving the built binary.

use std::path::Path;
use std::process::{Command, Output};

fn hadz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hadz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn construct_prints_parameters_and_matrix() {
    let out = hadz(&["construct", "--family", "z2z4z8", "--t", "1,1,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("alpha: (8,12,8)"));
    assert!(text.contains("n: 64"));
    assert!(text.contains("00001111|000000222222|00004444"));
}

#[test]
fn construct_rejects_bad_exponents_with_usage_exit() {
    let out = hadz(&["construct", "--family", "z2z4z8", "--t", "0,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hadz(&["construct", "--family", "z2s", "--t", "2,0,6"]);
    assert_eq!(out.status.code(), Some(1), "missing --s is a usage error");
}

#[test]
fn analyze_reports_profile() {
    let out = hadz(&["analyze", "--family", "z2z4z8", "--t", "1,0,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in ["n: 8", "size: 16", "d: 4", "hadamard: true", "linear: true"] {
        assert!(text.contains(line), "missing {:?} in {}", line, text);
    }
    let out = hadz(&["analyze", "--family", "z2z4", "--t", "1,1"]);
    assert!(stdout(&out).contains("linear: true"));
}

#[test]
fn construct_analyze_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("code");
    let out = hadz(&[
        "construct",
        "--family",
        "z2z4z8",
        "--t",
        "1,1,1",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let desc = dir.path().join("code.desc");
    let matrix = dir.path().join("code.matrix");
    assert!(Path::new(&desc).exists() && Path::new(&matrix).exists());

    let from_files = hadz(&[
        "analyze",
        "--descriptor",
        desc.to_str().unwrap(),
        "--matrix",
        matrix.to_str().unwrap(),
    ]);
    let from_exponents = hadz(&["analyze", "--family", "z2z4z8", "--t", "1,1,1"]);
    assert!(from_files.status.success());
    assert_eq!(stdout(&from_files), stdout(&from_exponents));
}

#[test]
fn table_small_and_out_of_range() {
    let out = hadz(&["table", "--t", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("family,exponents,"));
    assert!(text.contains("z2z4z8,\"1,0,1\""));

    let out = hadz(&["table", "--t", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_distinct_equivalent_and_self() {
    let dir = tempfile::tempdir().unwrap();
    let write_desc = |name: &str, body: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        path
    };
    let a = write_desc("a.desc", "family=z2z4z8\nt=1,0,3\n");
    let b = write_desc("b.desc", "family=z2z4z8\nt=1,1,1\n");
    let out = hadz(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: distinct"));

    // Same code twice: identity witness.
    let out = hadz(&["compare", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(stdout(&out).contains("verdict: equivalent"));

    // Equivalent pair across ring exponents, length 16.
    let c = write_desc("c.desc", "family=z2s\ns=2\nt=2,1\n");
    let d = write_desc("d.desc", "family=z2s\ns=3\nt=1,1,0\n");
    let out = hadz(&["compare", c.to_str().unwrap(), d.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("verdict: equivalent"), "{}", text);
    assert!(text.contains("witness:"));
}

#[test]
fn verify_small_range_passes() {
    let out = hadz(&["verify", "--t-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("seed: 20260811"));
    assert!(text.contains("summary:"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_catches_corrupted_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("code");
    let out = hadz(&[
        "construct",
        "--family",
        "z2z4z8",
        "--t",
        "1,1,1",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let matrix = dir.path().join("code.matrix");
    let desc = dir.path().join("code.desc");
    let text = std::fs::read_to_string(&matrix).unwrap();
    // Corrupt one digit of the order-8 row.
    let corrupted = text.replacen("01|0", "00|0", 1);
    assert_ne!(text, corrupted);
    std::fs::write(&matrix, corrupted).unwrap();

    let out = hadz(&[
        "verify",
        "--t-max",
        "3",
        "--matrix",
        matrix.to_str().unwrap(),
        "--descriptor",
        desc.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("FAIL verify.matrix-file"), "{}", text);
    assert!(text.contains("order"), "names the violated invariant: {}", text);
}
