use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prunedperm")).args(args).output().expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

#[test]
fn stats_reports_closed_forms() {
    let out = run(&["stats", "brp:n=4", "--format", "csv"]);
    assert!(out.status.success());
    let csv = text(&out.stdout);
    for row in ["num_descents,8,8", "major_index,64,64", "num_fixed_points,4,4", "num_excedances,6,6", "num_inversions,44,44"] {
        assert!(csv.contains(row), "{row} missing from\n{csv}");
    }
}

#[test]
fn malformed_descriptor_is_a_usage_error() {
    let out = run(&["stats", "brp:m=4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("parse error"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn prune_writes_addresses_and_trace() {
    let dir = std::env::temp_dir().join(format!("prunedperm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bin = dir.join("addr.bin");
    let trace = dir.join("trace.json");
    let out = run(&[
        "prune",
        "brp:n=5",
        "--beta",
        "22",
        "--p",
        "8",
        "--verify",
        "--format",
        "bin",
        "--out",
        bin.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("verification OK"));
    assert_eq!(std::fs::read(&bin).unwrap().len(), 22 * 4);
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["final_gap"], 9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn prune_gap_only_solves_large_instances() {
    let out = run(&["prune", "brp:n=32", "--alpha", "4096", "--beta", "2147483658", "--gap-only"]);
    assert!(out.status.success());
    assert!(text(&out.stdout).contains("4294967296,4096,2147483658,4093,12"));
    assert_eq!(run(&["prune", "brp:n=5", "--beta", "22", "--p", "0"]).status.code(), Some(1));
}

#[test]
fn banksim_and_contention() {
    let out = run(&["banksim", "brp:n=5", "--beta", "22", "--W", "4", "--M", "8"]);
    assert!(out.status.success());
    assert!(text(&out.stderr).contains("write steps 3, stalls 10"));
    let bad = run(&["banksim", "random:k=16,seed=3", "--beta", "12", "--W", "4", "--M", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bench_output_is_reproducible() {
    let args = ["bench", "--family", "lcs-lcs2S", "--family", "brev1D", "--n", "10..=12", "--p", "2,8", "--seed", "4"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let csv = text(&a.stdout);
    assert!(csv.starts_with("# prunedperm-csv v1\n"));
    assert_eq!(csv.lines().count(), 2 + 2 * 3 * 2);
    assert!(csv.lines().nth(2).unwrap().starts_with("brev1D,10,2,"));
}

#[test]
fn overflow_exits_with_three() {
    assert_eq!(run(&["stats", "brp:n=63"]).status.code(), Some(3));
}
