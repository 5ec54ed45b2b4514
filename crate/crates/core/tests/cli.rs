//! The binary end to end: outputs, exit codes and reproducible generation.

use std::path::{Path, PathBuf};
use std::process::Command;

use steiner_stability::exact::{brute_force_opt, EnumerationBudget};
use steiner_stability::generators::{sample, write_corpus_file, GenSpec};
use steiner_stability::model::tree_weight;
use steiner_stability::solvers::mst_terminals;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Runs the binary with TSV output; returns the key/value lines and status.
fn run(args: &[&str]) -> (Vec<(String, String)>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_steiner-stability"))
        .arg("--format")
        .arg("tsv")
        .args(args)
        .env_remove("STEINER_BUDGET_SECS")
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let lines = text
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('\t').expect("tab-separated line");
            (k.to_string(), v.to_string())
        })
        .collect();
    (lines, out.status.code().unwrap())
}

fn get<'a>(lines: &'a [(String, String)], key: &str) -> &'a str {
    lines
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .unwrap_or_else(|| panic!("missing key {key}"))
}

#[test]
fn solve_reports_the_optimum() {
    let path = fixture("triangle.stp");
    for algorithm in ["exact", "dw", "mst"] {
        let (out, code) = run(&["solve", path.to_str().unwrap(), "--algorithm", algorithm]);
        assert_eq!(code, 0);
        assert_eq!(get(&out, "tree"), "1-2 2-3");
        assert_eq!(get(&out, "weight"), "3");
    }
    let (out, code) = run(&[
        "solve",
        fixture("star.stp").to_str().unwrap(),
        "--algorithm",
        "dw",
    ]);
    assert_eq!(code, 0);
    assert_eq!(get(&out, "tree"), "1-4 2-4 3-4");
}

#[test]
fn gamma_star_values() {
    let (out, code) = run(&["gamma-star", fixture("triangle.stp").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(get(&out, "gamma_star"), "1.45");
    assert_eq!(get(&out, "witness"), "1-2 1-3");
    let (out, _) = run(&["gamma-star", fixture("star.stp").to_str().unwrap()]);
    assert_eq!(get(&out, "gamma_star"), "1.33333333333");
    let (out, _) = run(&["gamma-star", fixture("pair.stp").to_str().unwrap()]);
    assert_eq!(get(&out, "gamma_star"), "inf");
}

#[test]
fn certify_exit_codes() {
    let path = fixture("triangle.stp");
    let (out, code) = run(&["certify", path.to_str().unwrap(), "--gamma", "1.4"]);
    assert_eq!((code, get(&out, "stable")), (0, "true"));
    let (out, code) = run(&["certify", path.to_str().unwrap(), "--gamma", "1.5"]);
    assert_eq!((code, get(&out, "stable")), (1, "false"));
    assert_eq!(get(&out, "perturbed_margin"), "-0.1");
}

#[test]
fn check_lemmas_reports_violations() {
    let path = fixture("triangle.stp");
    let (out, code) = run(&["check-lemmas", path.to_str().unwrap(), "--gamma", "1.4"]);
    assert_eq!((code, get(&out, "violations")), (0, "0"));
    let (out, code) = run(&["check-lemmas", path.to_str().unwrap(), "--gamma", "1.46"]);
    assert_eq!(code, 1);
    assert_ne!(get(&out, "violations"), "0");
    let (_, code) = run(&[
        "check-lemmas",
        path.to_str().unwrap(),
        "--gamma",
        "1.46",
        "--lemma",
        "bogus",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn input_and_parameter_errors_exit_two() {
    let (out, code) = run(&["solve", fixture("malformed.stp").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(get(&out, "error").contains("edges declared"));
    let (_, code) = run(&["solve", "/nonexistent/file.stp"]);
    assert_eq!(code, 2);
    let (_, code) = run(&[
        "solve",
        fixture("star.stp").to_str().unwrap(),
        "--algorithm",
        "fan-greedy",
    ]);
    assert_eq!(code, 2);
    let (_, code) = run(&[
        "certify",
        fixture("star.stp").to_str().unwrap(),
        "--gamma",
        "0.9",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn budget_exhaustion_exits_three() {
    let (out, code) = run(&[
        "gamma-star",
        fixture("star.stp").to_str().unwrap(),
        "--budget-steiner",
        "0",
    ]);
    assert_eq!(code, 3);
    assert!(get(&out, "error").contains("budget"));
}

#[test]
fn broken_oracle_contract_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for seed in 0..30 {
        let spec = GenSpec::random_metric(8, 4, seed);
        let inst = sample(&spec).unwrap();
        let opt = brute_force_opt(&inst, EnumerationBudget::unlimited()).unwrap();
        let mst = tree_weight(&inst, &mst_terminals(&inst)).unwrap();
        // ε = (γ−1)/(2n) = 0.25/16 on the first round.
        if mst <= (1.0 + 0.25 / 16.0) * opt.weight * (1.0 + 1e-9) {
            continue;
        }
        let path = write_corpus_file(dir.path(), &spec, &inst, None).unwrap();
        let args = [
            "solve",
            path.to_str().unwrap(),
            "--algorithm",
            "contract",
            "--gamma",
            "1.25",
            "--oracle",
            "mst",
        ];
        let (_, code) = run(&args);
        assert_eq!(code, 4, "seed {seed}");
        let (out, code) = run(&[&args[..6], &["--oracle", "exact"]].concat());
        assert_eq!((code, get(&out, "matches_exact")), (0, "true"));
        seen += 1;
    }
    assert!(seen > 0);
}

#[test]
fn generation_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = dir.path().to_str().unwrap();
        let (_, code) = run(&[
            "generate",
            "--model",
            "euclidean",
            "--n",
            "7",
            "--t",
            "3",
            "--gamma",
            "1.3",
            "--seed",
            "5",
            "--count",
            "3",
            "--out",
            out,
        ]);
        assert_eq!(code, 0);
    }
    for seed in 5..8 {
        let rel = format!("euclidean-2d/1.3/{seed}.stp");
        let x = std::fs::read(a.path().join(&rel)).unwrap();
        let y = std::fs::read(b.path().join(&rel)).unwrap();
        assert_eq!(x, y);
        let (out, code) = run(&[
            "certify",
            a.path().join(&rel).to_str().unwrap(),
            "--gamma",
            "1.3",
        ]);
        assert_eq!((code, get(&out, "stable")), (0, "true"));
    }
}

#[test]
fn unreachable_target_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (_, code) = run(&[
        "generate",
        "--model",
        "metric",
        "--n",
        "8",
        "--t",
        "4",
        "--gamma",
        "1.99",
        "--max-tries",
        "20",
        "--out",
        out,
    ]);
    assert_eq!(code, 3);
    let (_, code) = run(&[
        "generate", "--model", "metric", "--n", "8", "--t", "4", "--gamma", "3.5", "--out", out,
    ]);
    assert_eq!(code, 2);
}
