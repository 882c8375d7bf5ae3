//! Integration tests for the `cesaro` binary: schemas, exit codes and
//! output determinism.

use std::process::{Command, Output};

fn cesaro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cesaro"))
        .args(args)
        .output()
        .expect("spawn cesaro")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn emit_order_one_json() {
    let out = cesaro(&["emit", "--kind", "P", "--n", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["entries"], serde_json::json!([["1"]]));
    assert_eq!(v["kind"], "P");
    assert_eq!(v["mode"], "exact");
}

#[test]
fn emit_is_byte_deterministic() {
    let a = cesaro(&["emit", "--kind", "Mcoef", "--n", "7", "--format", "json"]);
    let b = cesaro(&["emit", "--kind", "Mcoef", "--n", "7", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let a = cesaro(&["norms", "--n-list", "1,2,5", "--format", "csv", "--seed", "3"]);
    let b = cesaro(&["norms", "--n-list", "1,2,5", "--format", "csv", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn emit_float_csv() {
    let out = cesaro(&["emit", "--kind", "P", "--n", "2", "--mode", "float", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0,1\n0.5,0.5\n");
}

#[test]
fn emit_defaults_to_float_above_100() {
    let out = cesaro(&["emit", "--kind", "Dinv", "--n", "101", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mode"], "float");
}

#[test]
fn spectrum_p3_matches_closed_eigenvalues() {
    let out = cesaro(&["spectrum", "--kind", "P", "--n", "3", "--mode", "exact"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["eigenvalues"], serde_json::json!(["1", "-1/2", "1/3"]));
    assert_eq!(v["residual"], 0);
}

#[test]
fn spectrum_mmin_is_float_only() {
    let out = cesaro(&["spectrum", "--kind", "Mmin", "--n", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["matrix"], "Mmin");
    assert!(v["eigenvalues"][0].is_f64());

    let out = cesaro(&["spectrum", "--kind", "Mmin", "--n", "4", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cesaro(&["emit", "--kind", "Q", "--n", "3"]).status.code(), Some(2));
    assert_eq!(cesaro(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cesaro(&["emit", "--kind", "P", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        cesaro(&["verify", "--suite", "everything"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cesaro(&["bench", "--kind", "P", "--n-list", "8"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cesaro(&["verify", "--perturb", "P:zero,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_small_sweep_passes() {
    let out = cesaro(&["verify", "--suite", "diagonalization", "--n-max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[PASS] diagonalization/t_diagonalizes_p (n=1..10)"));
    assert!(text.contains("all 15 checks passed"));
}

#[test]
fn verify_perturbation_fails_and_names_identity() {
    let out = cesaro(&["verify", "--n-max", "4", "--perturb", "V:2,1"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("[FAIL] diagonalization/"));
    assert!(text.contains("verify: FAILED"));
}

#[test]
fn norms_csv_parses() {
    let out = cesaro(&["norms", "--n-list", "1,3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,harmonic,lambda_max_K,k_bound_ok,gershgorin_W,paper_bound_W,lambda_max_M_closed,paper_approx_M"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert_eq!(row[1], "1");
    assert_eq!(row[3], "true");
    let row3: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row3[0], "3");
    assert_eq!(row3[4], "17"); // largest Gershgorin disk of W(3)
    assert_eq!(row3[5], "21"); // 4n^2-6n+3
}

#[test]
fn bench_emits_wellformed_csv() {
    let out = cesaro(&["bench", "--kind", "Mmin", "--n-list", "16,32", "--repeat", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,n,method,median_seconds,residual");
    assert_eq!(lines.len(), 5); // closed+reference per order
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 5);
        assert_eq!(cols[0], "Mmin");
        assert!(cols[3].parse::<f64>().unwrap() >= 0.0);
        assert!(cols[4].parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("cesaro-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p4.json");
    let out = cesaro(&[
        "emit",
        "--kind",
        "P",
        "--n",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&contents).unwrap();
    assert_eq!(v["n"], 4);
    std::fs::remove_file(&path).unwrap();
}
