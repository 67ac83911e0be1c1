//! End-to-end tests through the `linkhom` binary.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linkhom"))
}

fn write_file(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn json_of(output: &Output) -> serde_json::Value {
    serde_json::from_str(stdout_of(output).trim()).unwrap()
}

const BORROMEAN: &str = "strands:3 A(1,3) A(2,3) A(1,3)^-1 A(2,3)^-1\n";

#[test]
fn nh_borromean_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "borromean.braid", BORROMEAN);
    let out = bin()
        .args(["nh"])
        .arg(&file)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["lambda"], 0);
    assert_eq!(v["nh"]["exact"], 2);
    assert_eq!(v["nd_equals_nh"], true);
    assert_eq!(v["components"], 3);
}

#[test]
fn witt_and_znumber() {
    let out = bin()
        .args(["witt", "--rank", "3", "--weight", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "8");

    let out = bin()
        .args(["znumber", "x1 x2 x1^-1 x2^-1", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["value"], 2);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn rz_upper_with_and_without_search() {
    let out = bin()
        .args(["rz-upper", "x1 x2 x1^-1 x2^-1", "--rank", "2", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["upper"], 2);
    assert_eq!(v["method"], "lemma");

    let out = bin()
        .args([
            "rz-upper",
            "x1 x2 x1^-1 x2^-1",
            "--rank",
            "2",
            "--search-budget",
            "200",
            "--seed",
            "7",
            "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["upper"], 2);
}

#[test]
fn comb_round_trips_through_nh() {
    let dir = tempfile::tempdir().unwrap();
    let braid_file = write_file(dir.path(), "b.braid", BORROMEAN);
    let combed = bin().args(["comb"]).arg(&braid_file).output().unwrap();
    assert!(combed.status.success());
    let hl_file = write_file(dir.path(), "b.hl", &stdout_of(&combed));

    let from_braid = bin()
        .args(["nh"])
        .arg(&braid_file)
        .arg("--json")
        .output()
        .unwrap();
    let from_hl = bin()
        .args(["nh"])
        .arg(&hl_file)
        .arg("--json")
        .output()
        .unwrap();
    let a = json_of(&from_braid);
    let b = json_of(&from_hl);
    assert_eq!(a["nh"], b["nh"]);
    assert_eq!(a["lambda"], b["lambda"]);
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(
        dir.path(),
        "l.braid",
        "strands:4 A(1,2) A(2,4)^-1 A(1,3) A(3,4) A(1,2)\n",
    );
    let run = || {
        let out = bin()
            .args(["nh"])
            .arg(&file)
            .args(["--json", "--seed", "3"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn batch_isolates_failures() {
    let dir = tempfile::tempdir().unwrap();
    let list = write_file(
        dir.path(),
        "batch.txt",
        "strands:2 A(1,2) A(1,2)\nno-such-file.braid\ncomponents:3; gamma3 = x1 x2 x1^-1 x2^-1\n",
    );
    let out = bin().args(["batch"]).arg(&list).output().unwrap();
    assert!(out.status.success());
    let stdout = stdout_of(&out);
    let lines: Vec<&str> = stdout.trim().lines().collect();
    assert_eq!(lines.len(), 3);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["result"]["nh"]["exact"], 2);
    let second: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert!(second["error"].is_string());
    let third: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
    assert_eq!(third["result"]["nh"]["exact"], 2);
}

#[test]
fn batch_empty_and_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write_file(dir.path(), "empty.txt", "");
    let out = bin().args(["batch"]).arg(&empty).output().unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).trim().is_empty());

    let dups = write_file(
        dir.path(),
        "dups.txt",
        "strands:2 A(1,2)\nstrands:2 A(1,2)\n",
    );
    let out = bin().args(["batch"]).arg(&dups).output().unwrap();
    let lines: Vec<String> = stdout_of(&out)
        .trim()
        .lines()
        .map(|l| {
            l.replacen("\"line\":1", "\"line\":N", 1)
                .replacen("\"line\":2", "\"line\":N", 1)
        })
        .collect();
    assert_eq!(lines[0], lines[1]);
}

#[test]
fn seifert_check_null_form() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "v.mat", "0 0 0 5\n1 0 0 -3\n0 0 0 0\n2 7 1 0\n");
    let out = bin()
        .args(["seifert-check"])
        .arg(&file)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["null_form"], true);
    assert_eq!(v["intersection"]["unimodular"], true);

    let json_matrix = write_file(dir.path(), "v.json", "[[0,1],[0,0]]");
    let out = bin()
        .args(["seifert-check"])
        .arg(&json_matrix)
        .arg("--json")
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["null_form"], true);
    assert_eq!(v["intersection"]["det"], 1);
}

#[test]
fn hall_uses_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = bin()
            .args([
                "hall",
                "--rank",
                "3",
                "--weight",
                "3",
                "--nonrepeating",
                "--json",
            ])
            .arg("--cache-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
        stdout_of(&out)
    };
    let first = run();
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(cached.len(), 1);
    assert_eq!(first, run());
    let v: serde_json::Value = serde_json::from_str(first.trim()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8); // 3 + 3 + 2 repeat-free
}

#[test]
fn exit_codes() {
    // unknown subcommand: input error
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // unreadable file
    let out = bin().args(["nh", "/definitely/not/here"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // wrong component count for mu123
    let dir = tempfile::tempdir().unwrap();
    let two = write_file(dir.path(), "two.braid", "strands:2 A(1,2)\n");
    let out = bin().args(["mu123"]).arg(&two).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // malformed braid with position information
    let bad = write_file(dir.path(), "bad.braid", "strands:3 A(3,1)\n");
    let out = bin().args(["nh"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("byte 10"), "stderr: {err}");
}

#[test]
fn rank_cap_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let big = write_file(dir.path(), "big.braid", "strands:13 A(1,13)\n");
    let out = bin().args(["lambda"]).arg(&big).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin()
        .args(["lambda"])
        .arg(&big)
        .args(["--rank-cap", "13", "--allow-large-rank"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "1");

    // raising the cap without the override flag is refused
    let out = bin()
        .args(["lambda"])
        .arg(&big)
        .args(["--rank-cap", "13"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_component_inputs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let braid = write_file(dir.path(), "zero.json", r#"{"strands": 0, "letters": []}"#);
    let out = bin().args(["nh"]).arg(&braid).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let hl = write_file(
        dir.path(),
        "zero-hl.json",
        r#"{"components": 0, "gammas": []}"#,
    );
    let out = bin().args(["nh"]).arg(&hl).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn expand_emits_canonical_polynomial() {
    let out = bin()
        .args(["expand", "x1 x2 x1^-1 x2^-1", "--rank", "2", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out).trim(),
        r#"[{"mono":[],"coef":1},{"mono":[1,2],"coef":1},{"mono":[2,1],"coef":-1}]"#
    );
}

#[test]
fn hl_json_mirror_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(
        dir.path(),
        "link.json",
        r#"{"components": 3, "gammas": ["e", "x1 x2 x1^-1 x2^-1"]}"#,
    );
    let out = bin()
        .args(["nh"])
        .arg(&file)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["nh"]["exact"], 2);

    let braid = write_file(
        dir.path(),
        "braid.json",
        r#"{"strands": 2, "letters": [[1, 2, 1], [1, 2, 1], [1, 2, -1]]}"#,
    );
    let out = bin().args(["lambda"]).arg(&braid).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "1");
}
