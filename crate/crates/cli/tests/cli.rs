//! End-to-end checks of the binary: file formats, report shapes, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn congestlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_congestlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"))
}

#[test]
fn gen_oracle_run_pipeline_on_reference_gadget() {
    let dir = tempfile::tempdir().unwrap();
    let out = congestlab(
        dir.path(),
        &["gen", "apsp", "--n", "8", "--x", "010", "--y", "110", "--out", "fig2", "--dot"],
    );
    assert!(out.status.success());
    let edges = std::fs::read_to_string(dir.path().join("fig2.edges")).unwrap();
    assert!(edges.starts_with("8 12\n"));
    assert!(dir.path().join("fig2.roles.json").exists());
    assert!(dir.path().join("fig2.dot").exists());

    let out = congestlab(dir.path(), &["oracle", "--graph", "fig2", "--matrix"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["decode_apsp"], 1);
    assert!(report["diameter"].as_u64().unwrap() <= 4);
    let matrix = report["matrix"].as_array().unwrap();
    assert_eq!(matrix.len(), 8);
    assert_eq!(matrix[0][0], 0);

    let out = congestlab(
        dir.path(),
        &["run", "apsp", "--graph", "fig2", "--check-oracle", "--cut"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["oracle_match"], true);
    assert_eq!(report["cut"]["size"], 3);
    assert_eq!(report["cut"]["within_bound"], true);
}

#[test]
fn ecc_gadget_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = congestlab(
        dir.path(),
        &["gen", "ecc", "--n", "23", "--ell", "1", "--x", "100", "--y", "110", "--out", "g"],
    );
    assert!(out.status.success());

    let out = congestlab(dir.path(), &["oracle", "--graph", "g"]);
    let report = stdout_json(&out);
    assert_eq!(report["decode_ecc"], 1);

    let out = congestlab(
        dir.path(),
        &["run", "ecc", "--graph", "g", "--check-oracle", "--cut"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["oracle_match"], true);
    assert_eq!(report["cut"]["size"], 5, "2s + 1 crossing edges at s = 2");
}

#[test]
fn verify_suites_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "thresholds", "--eps", "0.1"],
        vec!["verify", "apsp-prop", "--n", "8"],
        vec!["verify", "ecc-approx", "--trials", "25"],
        vec!["verify", "sim-vs-oracle", "--trials", "5", "--n-range", "2..40"],
    ] {
        let out = congestlab(dir.path(), &args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report = stdout_json(&out);
        assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn usage_errors_exit_two_and_name_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let out = congestlab(
        dir.path(),
        &["gen", "ecc", "--n", "10", "--ell", "1", "--x", "1", "--y", "1", "--out", "bad"],
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("31*ell - 8"), "constraint named: {stderr}");

    let out = congestlab(dir.path(), &["oracle", "--graph", "missing"]);
    assert_eq!(out.status.code(), Some(2));

    let out = congestlab(dir.path(), &["run", "apsp", "--graph", "missing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let gen_args = [
        "gen", "apsp", "--n", "9", "--x", "random", "--y", "random", "--seed", "5", "--out", "r",
    ];
    congestlab(dir.path(), &gen_args);
    let once = std::fs::read_to_string(dir.path().join("r.edges")).unwrap();
    congestlab(dir.path(), &gen_args);
    let twice = std::fs::read_to_string(dir.path().join("r.edges")).unwrap();
    assert_eq!(once, twice, "seeded generation is reproducible");

    let args = ["run", "apsp", "--graph", "r", "--cut", "--seed", "7"];
    let first = congestlab(dir.path(), &args);
    let second = congestlab(dir.path(), &args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}
