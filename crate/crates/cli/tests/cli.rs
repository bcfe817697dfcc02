//! The `pathcover` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pathcover_core::cover::{verify_cover, PathCover};
use pathcover_core::graph::{sample_gnp, Graph, SampleParams};

fn pathcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathcover"))
        .args(args)
        .output()
        .unwrap()
}

fn run_into(dir: &Path, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    pathcover(&args)
}

#[test]
fn reruns_give_identical_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("sweep.toml");
    fs::write(
        &config,
        "n = 2000\nc = [5, 6, 7, 8]\ntrials = 3\nseed = 11\nchecks = [\"cover\"]\n",
    )
    .unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let first = run_into(&a, &config, &[]);
    assert_eq!(first.status.code(), Some(0), "{first:?}");
    assert_eq!(run_into(&b, &config, &["--serial"]).status.code(), Some(0));
    for name in ["trials.csv", "summary.csv", "checks.csv"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let trials = fs::read_to_string(a.join("trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 1 + 12);
    assert!(a.join("timings.csv").exists());

    let c = tmp.path().join("c");
    assert_eq!(
        run_into(&c, &config, &["--format", "json"]).status.code(),
        Some(0)
    );
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(c.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["trials"].as_array().unwrap().len(), 12);
    assert_eq!(report["summaries"].as_array().unwrap().len(), 4);
}

#[test]
fn failed_checks_exit_with_one() {
    let out = pathcover(&[
        "run", "--n", "300", "--c", "3", "--trials", "2", "--check", "success",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("FAIL Success"), "{stderr}");
}

#[test]
fn unwritable_output_fails_before_running() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("reports");
    let out = pathcover(&[
        "run",
        "--n",
        "2000000",
        "--trials",
        "100",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pathcover(&["run", "--c", "-3"]).status.code(), Some(2));
    assert_eq!(pathcover(&["run", "--bogus"]).status.code(), Some(2));
    assert_eq!(pathcover(&["oracle"]).status.code(), Some(2));
    assert_eq!(pathcover(&["--help"]).status.code(), Some(0));
}

#[test]
fn solve_writes_a_valid_cover() {
    let tmp = tempfile::tempdir().unwrap();
    let g = sample_gnp(&SampleParams::new(3000, 7.0, 4)).unwrap();
    let graph = tmp.path().join("g.txt");
    fs::write(&graph, g.to_edge_list()).unwrap();
    let cover = tmp.path().join("cover.txt");
    let out = pathcover(&[
        "solve",
        graph.to_str().unwrap(),
        "--c",
        "7",
        "--out",
        cover.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let paths = PathCover::from_lines(&fs::read_to_string(&cover).unwrap()).unwrap();
    assert!(verify_cover(&g, &paths).is_valid());
    assert_eq!(
        summary["gap"]["cover_size"].as_u64().unwrap() as usize,
        paths.size()
    );
}

#[test]
fn oracle_reports_exact_values() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (Graph::cycle(6), "0"),
        (Graph::path(6), "1"),
        (Graph::empty(3), "3"),
        (
            Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(),
            "2",
        ),
    ];
    for (i, (g, want)) in cases.iter().enumerate() {
        let path = tmp.path().join(format!("g{i}.txt"));
        fs::write(&path, g.to_edge_list()).unwrap();
        let out = pathcover(&["oracle", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), *want);
    }
    let big = tmp.path().join("big.txt");
    fs::write(&big, Graph::cycle(40).to_edge_list()).unwrap();
    assert_eq!(
        pathcover(&["oracle", big.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let missing = tmp.path().join("missing.txt");
    assert_eq!(
        pathcover(&["oracle", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn predict_prints_csv() {
    let out = pathcover(&["predict", "--c", "6", "--c", "8", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "c,n,x,two_core,v0,v1,degree_bound,target"
    );
    assert_eq!(lines.count(), 2);
}
