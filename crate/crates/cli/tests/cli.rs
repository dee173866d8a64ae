use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pot")).args(args).output().expect("running pot")
}

fn code(args: &[&str]) -> i32 {
    pot(args).status.code().expect("exit code")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn solve_three_tasks_writes_a_verifying_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = tmp(&dir, "three_tasks.model");
    let m = model.to_str().unwrap();
    for algo in ["ptop", "total", "brute"] {
        assert_eq!(code(&["solve", "--algo", algo, "--input", &fixture("three_tasks.pot"), "--model-out", m]), 10);
        assert_eq!(code(&["verify", "--input", &fixture("three_tasks.pot"), "--model", m]), 0);
    }
}

#[test]
fn solve_contradiction_exits_20() {
    assert_eq!(code(&["solve", "--input", &fixture("cycle.pot")]), 20);
    let out = pot(&["solve", "--input", &fixture("cycle.pot")]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s no\n");
}

#[test]
fn brute_guard_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let f = tmp(&dir, "big.pot");
    fs::write(&f, "p pot 20 1\nc 0 19 <\n").unwrap();
    let out = pot(&["solve", "--algo", "brute", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("n <= 8"));
}

#[test]
fn flag_and_file_errors_exit_1() {
    assert_eq!(code(&["solve", "--algo", "dfs", "--input", &fixture("three_tasks.pot")]), 1);
    assert_eq!(code(&["solve", "--input", "/nonexistent/x.pot"]), 1);
    assert_eq!(code(&["solve", "--bogus"]), 1);
    assert_eq!(code(&["solve"]), 1);
}

#[test]
fn stats_are_key_value_lines() {
    let out = pot(&["solve", "--input", &fixture("three_tasks.pot"), "--stats"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["leaves", "greedy_steps", "rule_fires", "millis", "verification_failures"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{key}="))), "{key} missing");
    }
}

#[test]
fn explain_prints_example_chains() {
    let out = pot(&["solve", "--input", &fixture("two_chains.pot"), "--explain"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("L: ")).count(), 5);
    assert_eq!(text.lines().filter(|l| l.starts_with("C: ")).count(), 2);
}

#[test]
fn gen_is_deterministic_and_planted_models_verify() {
    let dir = tempfile::tempdir().unwrap();
    let a = tmp(&dir, "a.pot");
    let b = tmp(&dir, "b.pot");
    for f in [&a, &b] {
        let args = ["gen", "--n", "6", "--density", "0.5", "--seed", "42", "--mode", "planted", "-o", f.to_str().unwrap()];
        assert_eq!(code(&args), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let model = format!("{}.model", a.display());
    assert_eq!(code(&["verify", "--input", a.to_str().unwrap(), "--model", &model]), 0);
    assert_eq!(code(&["solve", "--input", a.to_str().unwrap()]), 10);
}

#[test]
fn gen_rejects_bad_density() {
    let dir = tempfile::tempdir().unwrap();
    let f = tmp(&dir, "x.pot");
    assert_eq!(code(&["gen", "--n", "4", "--density", "2.0", "-o", f.to_str().unwrap()]), 1);
}

#[test]
fn verify_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let merged = tmp(&dir, "merged.model");
    fs::write(&merged, "s yes\nq 0 0\nq 1 0\nq 2 0\n").unwrap();
    assert_eq!(code(&["verify", "--input", &fixture("three_tasks.pot"), "--model", merged.to_str().unwrap()]), 20);
    let truncated = tmp(&dir, "trunc.model");
    fs::write(&truncated, "s yes\nq 0 0\nq 1").unwrap();
    assert_eq!(code(&["verify", "--input", &fixture("three_tasks.pot"), "--model", truncated.to_str().unwrap()]), 1);
    let short = tmp(&dir, "short.model");
    fs::write(&short, "s yes\nq 0 0\nq 1 1\n").unwrap();
    assert_eq!(code(&["verify", "--input", &fixture("three_tasks.pot"), "--model", short.to_str().unwrap()]), 1);
}

#[test]
fn strict_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = tmp(&dir, "i.pot");
    assert_eq!(code(&["gen", "--n", "8", "--density", "0.4", "--seed", "7", "--mode", "uniform", "-o", f.to_str().unwrap()]), 0);
    let run = || pot(&["solve", "--input", f.to_str().unwrap(), "--threads", "4", "--strict-determinism"]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn bench_writes_leaf_counts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = tmp(&dir, "b.csv");
    let args = ["bench", "--algos", "ptop,total", "--sizes", "8..8", "--per-size", "2", "--seed", "5", "--density", "0.9",
        "--csv", csv.to_str().unwrap()];
    assert_eq!(code(&args), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("algo,n,seed,instance,verdict,leaves,millis,timeout"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r[4], "no");
        assert_eq!(r[5], if r[0] == "ptop" { "2520" } else { "40320" });
        assert_eq!(r[7], "0");
    }
}

#[test]
fn bench_errors_and_timeouts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = tmp(&dir, "b.csv");
    let c = csv.to_str().unwrap();
    assert_eq!(code(&["bench", "--sizes", "5..4", "--csv", c]), 1);
    assert_eq!(code(&["bench", "--sizes", "x", "--csv", c]), 1);
    let args = ["bench", "--algos", "total", "--sizes", "12..12", "--density", "0.9", "--timeout-ms", "1", "--csv", c];
    assert_eq!(code(&args), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4], "");
    assert_eq!(row[7], "1");
}
