//! End-to-end checks of the installed binary: exit codes, determinism of
//! generated files, and the budget environment variable.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_pierce-lab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("PIERCE_LAB_BUDGET").output().expect("spawn binary")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("PIERCE_LAB_BUDGET")
        .env(key, value)
        .output()
        .expect("spawn binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf8 path")
}

#[test]
fn gen_is_deterministic_per_seed() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a.json");
    let b = tmp.path().join("b.json");
    let c = tmp.path().join("c.json");
    for (out, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        let r = run(&[
            "gen",
            "--generator",
            "random-pairwise",
            "--seed",
            seed,
            "--n-rects",
            "5",
            "--n-points",
            "20",
            "--out",
            path_str(out),
        ]);
        assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());
    assert_ne!(bytes_a, std::fs::read(&c).unwrap());
}

#[test]
fn tau_and_pierce8_on_a_cycle_file() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("cycle4.json");
    let r = run(&["gen", "--generator", "cycle", "--k", "4", "--out", path_str(&file)]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));

    let r = run(&["tau", "--in", path_str(&file)]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));
    assert!(stdout(&r).starts_with("tau = 2 "), "stdout: {}", stdout(&r));

    let report = tmp.path().join("report.json");
    let r = run(&[
        "pierce8",
        "--in",
        path_str(&file),
        "--out",
        path_str(&report),
    ]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));
    assert!(stdout(&r).contains("pierced 4 rectangles"), "stdout: {}", stdout(&r));
    assert!(report.exists());
}

#[test]
fn empty_trace_input_exits_2() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("hollow.json");
    // One rectangle, one point outside it: the trace is empty.
    std::fs::write(
        &file,
        r#"{"format_version":1,"points":[[0,0]],"rects":[{"x":[5,6],"y":[5,6]}]}"#,
    )
    .unwrap();
    let r = run(&["pierce8", "--in", path_str(&file)]);
    assert_eq!(code(&r), 2, "stderr: {}", stderr(&r));
}

#[test]
fn violated_pq_property_exits_2() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("split.json");
    // Two far-apart rectangles with one point each: traces are disjoint.
    std::fs::write(
        &file,
        r#"{"format_version":1,"points":[[0,0],[50,50]],"rects":[{"x":[0,1],"y":[0,1]},{"x":[50,51],"y":[50,51]}]}"#,
    )
    .unwrap();
    let r = run(&["check-pq", "--in", path_str(&file), "--p", "2"]);
    assert_eq!(code(&r), 2, "stderr: {}", stderr(&r));
    assert!(stderr(&r).contains("violated"), "stderr: {}", stderr(&r));
}

#[test]
fn exhausted_budget_exits_4() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("cycle6.json");
    let r = run(&["gen", "--generator", "cycle", "--k", "6", "--out", path_str(&file)]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));

    let r = run(&["tau", "--in", path_str(&file), "--budget", "1"]);
    assert_eq!(code(&r), 4, "stderr: {}", stderr(&r));

    // Same limit through the environment instead of the flag.
    let r = run_env(&["tau", "--in", path_str(&file)], "PIERCE_LAB_BUDGET", "1");
    assert_eq!(code(&r), 4, "stderr: {}", stderr(&r));

    // The flag wins over a permissive environment value.
    let r = Command::new(BIN)
        .args(["tau", "--in", path_str(&file), "--budget", "1"])
        .env("PIERCE_LAB_BUDGET", "1000000")
        .output()
        .unwrap();
    assert_eq!(code(&r), 4, "stderr: {}", stderr(&r));
}

#[test]
fn unparsable_budget_env_is_an_error() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("cycle3.json");
    let r = run(&["gen", "--generator", "cycle", "--k", "3", "--out", path_str(&file)]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));

    let r = run_env(&["tau", "--in", path_str(&file)], "PIERCE_LAB_BUDGET", "plenty");
    assert_eq!(code(&r), 1, "stderr: {}", stderr(&r));
    assert!(stderr(&r).contains("PIERCE_LAB_BUDGET"), "stderr: {}", stderr(&r));
}

#[test]
fn verify_pt_fixtures() {
    let r = run(&["verify-pt", "--fixture", "valid"]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));
    assert!(stdout(&r).contains("pass"), "stdout: {}", stdout(&r));

    for fixture in ["overlapping-class", "wrong-point-count", "wrong-class-sizes"] {
        let r = run(&["verify-pt", "--fixture", fixture]);
        assert_eq!(code(&r), 2, "fixture {fixture}, stderr: {}", stderr(&r));
    }
}

#[test]
fn run_suite_writes_all_outputs() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("suite");
    let r = run(&[
        "run-suite",
        "--campaign",
        "pierce8",
        "--seed",
        "3",
        "--count",
        "5",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));
    for name in ["pierce8-records.jsonl", "pierce8-aggregate.csv", "pierce8-summary.json"] {
        assert!(out.join(name).exists(), "missing {name}");
    }
    let csv = std::fs::read_to_string(out.join("pierce8-aggregate.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6, "header plus five rows");
    assert!(csv.starts_with("instance,seed,"), "csv: {csv}");
}

#[test]
fn quadrant_pipeline_reads_origin_from_metadata() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("quadrant.json");
    let r = run(&[
        "gen",
        "--generator",
        "quadrant",
        "--seed",
        "9",
        "--n-rects",
        "4",
        "--n-points",
        "16",
        "--span",
        "40",
        "--out",
        path_str(&file),
    ]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));

    let r = run(&["pierce-quadrant-p", "--in", path_str(&file), "--p", "2"]);
    assert_eq!(code(&r), 0, "stderr: {}", stderr(&r));
    assert!(stdout(&r).contains("pierced 4 rectangles"), "stdout: {}", stdout(&r));
}
