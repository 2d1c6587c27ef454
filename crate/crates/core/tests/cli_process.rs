//! The installed binary: exit codes and byte-identical reruns.

use std::process::{Command, Output};

fn sshecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sshecke")).args(args).output().expect("binary runs")
}

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

#[test]
fn exit_codes() {
    assert_eq!(sshecke(&["--p", "13", "locus"]).status.code(), Some(0));
    let bad = sshecke(&["--p", "10", "locus"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("p must be a prime ≥ 5"));
    assert_eq!(sshecke(&["--p", "11", "brandt"]).status.code(), Some(2));
    let missing = sshecke(&["--p", "11", "brandt", "--m", "35"]);
    assert_eq!(missing.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("l = 5"));
    assert_eq!(sshecke(&["--p", "11", "--phi-dir", DATA, "brandt", "--m", "35"]).status.code(), Some(0));
    let file = format!("{DATA}/phi_j_5.txt");
    assert_eq!(sshecke(&["--p", "11", "--phi-file", &file, "brandt", "--m", "10"]).status.code(), Some(0));
    let with_level = format!("5={file}");
    assert_eq!(sshecke(&["--p", "11", "--phi-file", &with_level, "brandt", "--m", "10"]).status.code(), Some(0));
    assert_eq!(sshecke(&["--p", "11", "--phi-file", "/nonexistent/phi_j_5.txt", "locus"]).status.code(), Some(3));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["--p", "101", "--phi-dir", DATA, "verify", "--m-max", "120"];
    let first = sshecke(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stdout));
    let second = sshecke(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_and_csv_formats() {
    let out = sshecke(&["--p", "11", "--format", "json", "brandt", "--m", "2", "--oracle"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["matrix"], serde_json::json!([[0, 3], [2, 1]]));
    assert_eq!(v["oracle"], "MATCH");
    let out = sshecke(&["--p", "11", "--format", "csv", "locus"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "index,j,w\n1,0,3\n2,1,2\n");
    let out = sshecke(&["--p", "5", "eisenstein", "--m-max", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,a_m,b_m,f0\n0,,,1/1\n1,1,1,6/1\n"));
    assert!(text.contains("\n5,5,-19,6/1\n"));
}
