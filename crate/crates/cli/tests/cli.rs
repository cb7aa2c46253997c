use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn reclaim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reclaim")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const ZIGZAG: &str = r#"{"L": 12, "s": "5", "pads": [[{"l":0,"r":2},{"l":2,"r":12}], [{"l":0,"r":10},{"l":10,"r":12}]]}"#;

#[test]
fn solve_then_validate_then_render() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "zigzag.json", ZIGZAG);
    let out = reclaim(&["solve", "--solver", "contiguous", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    let res = json_of(&out);
    assert_eq!(res["makespan"], "76/5");
    let sched = write(&dir, "res.json", &String::from_utf8(out.stdout).unwrap());

    let out = reclaim(&["validate", "--instance", s(&inst), "--schedule", s(&sched)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["ok"], true);

    let svg = dir.path().join("out.svg");
    let out = reclaim(&["render", "--instance", s(&inst), "--schedule", s(&sched), "--out", s(&svg)]);
    assert_eq!(out.status.code(), Some(0));
    let first = std::fs::read_to_string(&svg).unwrap();
    assert!(first.starts_with("<svg"));
    let again = reclaim(&["render", "--instance", s(&inst), "--schedule", s(&sched)]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), first);
}

#[test]
fn oracle_beats_contiguous_on_zigzag() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "zigzag.json", ZIGZAG);
    let out = reclaim(&["oracle", "--kind", "two-free", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["makespan"], "72/5");
}

#[test]
fn violation_exits_one() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "zigzag.json", ZIGZAG);
    let idle = write(&dir, "idle.json", r#"{"paths": [[["0","0"]], [["0","12"]]], "assignments": []}"#);
    let out = reclaim(&["validate", "--instance", s(&inst), "--schedule", s(&idle)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["ok"], false);
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["kind"] == "uncovered stockpile"));

    let bad = write(&dir, "bad.json", r#"{"L": 5, "s": "1", "pads": [[{"l":0,"r":3},{"l":2,"r":4}], []]}"#);
    let out = reclaim(&["validate", "--instance", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_resource_errors_exit_two() {
    assert_eq!(reclaim(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(reclaim(&["solve", "--solver", "contiguous", "--instance", "/nonexistent/x.json"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "zigzag.json", ZIGZAG);
    let out = reclaim(&["oracle", "--kind", "two-free", "--instance", s(&inst), "--max-nodes", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
}

#[test]
fn unsupported_solver_exits_two() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "zigzag.json", ZIGZAG);
    let out = reclaim(&["solve", "--solver", "dp-two", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generated_instances_are_reproducible() {
    let args = ["gen", "random", "--seed", "42", "--n", "6", "--length", "20", "--speed", "3/2", "--mode", "precedence"];
    let a = reclaim(&args);
    let b = reclaim(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["precedence"].as_array().unwrap().len(), 6);
}

#[test]
fn gen_partition_matches_construction() {
    let out = reclaim(&["gen", "partition", "--a", "1,1,2", "--find-witness"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["target"], "7/1");
    assert_eq!(v["instance"]["L"], 12);
    let pads = v["instance"]["pads"][0].as_array().unwrap();
    let spans: Vec<(i64, i64)> = pads.iter().map(|p| (p["l"].as_i64().unwrap(), p["r"].as_i64().unwrap())).collect();
    assert_eq!(spans, vec![(0, 4), (4, 5), (5, 6), (6, 8), (8, 12)]);
    assert!(v["witness_schedule"].is_object());
}

#[test]
fn gen_odd_sum_is_an_error() {
    assert_eq!(reclaim(&["gen", "partition", "--a", "1,2"]).status.code(), Some(2));
}

#[test]
fn positioning_round_trip() {
    let dir = TempDir::new().unwrap();
    let li = write(&dir, "li.json", r#"{"L": 6, "s": "2", "lengths": [2, 5, 1]}"#);
    let out = reclaim(&["solve", "--solver", "fb-positioning", "--lengths", s(&li)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["makespan"], "10/1");
    assert_eq!(v["case"], 1);

    let out = reclaim(&["bound", "--lengths", s(&li)]);
    assert_eq!(json_of(&out)["lower_bound"], "10/1");

    let crowded = write(&dir, "c.json", r#"{"L": 7, "s": "1", "lengths": [5, 5, 5]}"#);
    let out = reclaim(&["bound", "--lengths", s(&crowded)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["feasibility"], "infeasible");
}

#[test]
fn bound_reports_k_star() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "zigzag.json", ZIGZAG);
    let out = reclaim(&["bound", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let pre = json_of(&reclaim(&["solve", "--solver", "preemptive", "--instance", s(&inst)]));
    assert_eq!(v["k_star"], pre["makespan"]);
}

#[test]
fn probe_emits_report() {
    let out = reclaim(&["probe", "--seed", "3", "--trials", "8", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["trials"], 8);
    assert!(v["max_ratio"].is_string());
    assert!(v.get("witness_seed").is_some());
}

#[test]
fn stdin_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_reclaim"))
        .args(["solve", "--solver", "forward-backward", "--instance", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(ZIGZAG.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["makespan"].is_string());
}

#[test]
fn single_pair_evaluation() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "zigzag.json", ZIGZAG);
    let out = reclaim(&["solve", "--solver", "pair", "--pair", "0,2,1,1,0", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["detail"].as_str().unwrap().starts_with("j=0 j'=2"));
    let out = reclaim(&["solve", "--solver", "pair", "--pair", "0,2,0,1,0", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(2));
}
