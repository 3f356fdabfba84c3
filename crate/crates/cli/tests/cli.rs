use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use braidtwist::presentations::{bt, DecoratedSurface, Presentation};
use braidtwist::qp::Qp;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_braidtwist"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("runs")
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawns");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("braidtwist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn bt_genus_one_counts() {
    let o = run(&["present", "bt", "--genus", "1", "--boundary", "1", "--decorations", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let p = Presentation::from_text(&text).unwrap();
    assert_eq!(p.generators().len(), 5);
    assert_eq!(p.relators().len(), 10);
}

#[test]
fn json_presentation_round_trips() {
    let o = run(&["present", "bt", "--decorations", "5", "--json"]);
    assert!(o.status.success());
    let p: Presentation = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(p, bt(&DecoratedSurface::new(0, 1, 5).unwrap()).unwrap());
}

#[test]
fn mutate_twice_restores_the_file() {
    let t = run(&["surf", "canonical", "--genus", "1", "--boundary", "2"]);
    assert!(t.status.success());
    let q = run_with_stdin(&["qp", "build"], &t.stdout);
    assert!(q.status.success());
    let qp: Qp = serde_json::from_slice(&q.stdout).unwrap();
    for v in qp.vertices() {
        let once = run_with_stdin(&["qp", "mutate", "--at", v.as_str()], &q.stdout);
        assert!(once.status.success(), "{}", String::from_utf8_lossy(&once.stderr));
        let twice = run_with_stdin(&["qp", "mutate", "--at", v.as_str()], &once.stdout);
        assert_eq!(twice.stdout, q.stdout, "vertex {v}");
    }
}

#[test]
fn pentagon_mutation_reverses_the_arrow() {
    let t = run(&["surf", "canonical", "--genus", "0", "--boundary", "5"]);
    let q = run_with_stdin(&["qp", "build"], &t.stdout);
    let m = run_with_stdin(&["qp", "mutate", "--at", "g1"], &q.stdout);
    let before: Value = serde_json::from_slice(&q.stdout).unwrap();
    let after: Value = serde_json::from_slice(&m.stdout).unwrap();
    assert_eq!(before["arrows"].as_array().unwrap().len(), 1);
    assert_eq!(before["arrows"][0]["src"], after["arrows"][0]["tgt"]);
    assert_eq!(before["arrows"][0]["tgt"], after["arrows"][0]["src"]);
}

#[test]
fn input_errors_exit_two_with_json() {
    let o = run(&[
        "present",
        "sbg",
        "--genus",
        "0",
        "--boundary",
        "1",
        "--decorations",
        "1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "input");

    let o = run_with_stdin(&["qp", "mutate", "--at", "x", "--json"], b"not json");
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"]["message"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["map", "rho", "--decorations", "4", "--t", "1", "--sign", "3", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn shipped_corpus_passes() {
    let dir = corpus();
    let o = run(&["verify", "derivations", dir.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text
        .lines()
        .filter(|l| !l.contains("scripts as expected"))
        .all(|l| l.starts_with("PASS ")));

    let o = bin()
        .args(["verify", "derivations"])
        .env("BRAIDTWIST_SCRIPT_DIR", &dir)
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn broken_script_exits_one() {
    let dir = tmp("bad-corpus");
    std::fs::create_dir_all(&dir).unwrap();
    let script = r#"{"name":"wrong","context":{"R":{"lhs":"a b","rhs":"b a"}},
        "goal":{"lhs":"a b a","rhs":"b a b"},"steps":[{"kind":"FreeReduce"}]}"#;
    std::fs::write(dir.join("wrong.json"), script).unwrap();
    let o = run(&["verify", "derivations", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL wrong step"));
}

#[test]
fn quotient_checks_on_the_disk() {
    let p = tmp("disk5.txt");
    std::fs::write(&p, stdout(&run(&["present", "bt", "--decorations", "5"]))).unwrap();
    let f = p.to_str().unwrap();
    assert!(run(&["verify", "perm", f]).status.success());
    let o = run(&["verify", "abelian", f, "--rank", "1", "--torsion-free"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "Z^1");
    assert_eq!(run(&["verify", "abelian", f, "--rank", "2"]).status.code(), Some(1));
}

#[test]
fn search_and_artin() {
    let p = tmp("disk4.txt");
    std::fs::write(&p, stdout(&run(&["present", "bt", "--decorations", "4"]))).unwrap();
    let f = p.to_str().unwrap();
    let o = run(&["verify", "search", f, "--lhs", "s1 s3", "--rhs", "s3 s1"]);
    assert!(o.status.success());
    let o = run(&["verify", "search", f, "--lhs", "s1", "--depth", "3", "--states", "500"]);
    assert_eq!(o.status.code(), Some(1));

    let args = ["verify", "artin", f, "--aleph", "4", "--samples", "20", "--seed", "11"];
    let a = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn maps_are_json_objects() {
    let o = run(&[
        "map",
        "rho",
        "--genus",
        "1",
        "--decorations",
        "4",
        "--t",
        "1",
        "--sign",
        "-1",
        "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_object().unwrap().values().all(Value::is_string));
    let o = run(&[
        "map",
        "eps-delta",
        "--genus",
        "1",
        "--decorations",
        "3",
        "--direction",
        "eps-to-delta",
    ]);
    assert!(o.status.success());
}
