use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use poset_dist_cli::config::ExperimentConfig;
use poset_dist_cli::csv::cells_well_formed;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poset-dist"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn shipped(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

#[test]
fn oracle_prints_csv() {
    let o = run(&["oracle", "--poset", "line2", "--dist", "(0.75,0.25)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,dtv,w,lp,certified\n2,0.25,0.5,0.5,1\n");
}

#[test]
fn validation_errors_exit_2() {
    let bad_sum = run(&["oracle", "--poset", "line2", "--dist", "(0.7,0.7)"]);
    assert_eq!(bad_sum.status.code(), Some(2));
    let mismatch = run(&["oracle", "--poset", "line3", "--dist", "(0.5,0.5)"]);
    assert_eq!(mismatch.status.code(), Some(2));
    let bad_flag = run(&["oracle", "--poset", "line2"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let bad_eps = run(&["test", "--alg", "bigness", "--dist", "(0.5,0.5)", "--eps", "0"]);
    assert_eq!(bad_eps.status.code(), Some(2));
    let missing = run(&["oracle", "--poset", "/nonexistent/poset", "--dist", "(1)"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn infeasible_parameters_exit_3() {
    let o = run(&["lb", "gen", "--n", "1000", "--eps", "0.0001", "--L", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rho"));
}

#[test]
fn out_writes_sidecar_that_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = run(&[
        "test", "--alg", "matching", "--poset", "matching2", "--dist", "(0.1,0.2,0.3,0.4)", "--eps", "0.3",
        "--trials", "4", "--seed", "9", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(cells_well_formed(&first));
    let sidecar = dir.path().join("t.csv.run");
    let cfg = ExperimentConfig::parse(&std::fs::read_to_string(&sidecar).unwrap()).unwrap();
    assert_eq!(cfg.seed, 9);
    std::fs::remove_file(&out).unwrap();
    let again = run(&["run", sidecar.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn reduce_writes_target_files() {
    let dir = tempfile::tempdir().unwrap();
    let (gp, dp) = (dir.path().join("g.poset"), dir.path().join("q.dist"));
    let o = run(&[
        "reduce", "--kind", "b2m", "--from", "matching2", "--dist", "(0.1,0.2,0.3,0.4)", "--out-poset",
        gp.to_str().unwrap(), "--out-dist", dp.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let oracle = run(&["oracle", "--poset", gp.to_str().unwrap(), "--dist", dp.to_str().unwrap()]);
    assert_eq!(oracle.status.code(), Some(0));
    let text = stdout(&oracle);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(row[0], 4.0);
    assert!(row[1].abs() < 1e-12 && row[2].abs() < 1e-12);
}

#[test]
fn lb_commands_emit_well_formed_csv() {
    let solve = run(&["lb", "solve", "--lambda", "6", "--L", "4"]);
    assert_eq!(solve.status.code(), Some(0));
    assert!(cells_well_formed(&stdout(&solve)));
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&["lb", "gen", "--n", "2000", "--lambda", "6", "--L", "4", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    for f in ["p.dist", "p_prime.dist", "h.csv", "h_prime.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let probe = run(&["lb", "probe", "--n", "2000", "--trials", "50", "--s-values", "0,100,400"]);
    assert_eq!(probe.status.code(), Some(0));
    let text = stdout(&probe);
    assert!(cells_well_formed(&text));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn suite_is_byte_identical_across_runs() {
    let manifest = shipped("manifests/examples.manifest");
    let a = run(&["suite", manifest.to_str().unwrap(), "--seed", "5"]);
    let b = run(&["suite", manifest.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().filter(|l| l.ends_with(",pass")).count(), 5);
}

#[test]
fn suite_thread_count_does_not_change_output() {
    let manifest = shipped("manifests/examples.manifest");
    let one = bin()
        .args(["suite", manifest.to_str().unwrap()])
        .env("POSET_DIST_THREADS", "1")
        .output()
        .unwrap();
    let four = bin()
        .args(["suite", manifest.to_str().unwrap()])
        .env("POSET_DIST_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn empty_manifest_and_failing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.manifest");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let o = run(&["suite", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "row,criterion,exit,result\n");
    std::fs::write(dir.path().join("bad.conf"), "verb = lb-gen\nn = 1000\neps = 0.0001\nL = 3\n").unwrap();
    let m = dir.path().join("m.manifest");
    std::fs::write(&m, "bad.conf\n").unwrap();
    let o = run(&["suite", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "row,criterion,exit,result\n0,0,3,fail\n");
}

#[test]
fn acceptance_manifest_rows_pass() {
    let manifest = shipped("manifests/acceptance.manifest");
    let o = run(&["suite", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",0,pass"), "{line}");
    }
}
