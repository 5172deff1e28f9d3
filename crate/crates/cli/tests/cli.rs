//! End-to-end tests spawning the real binary: exit codes, JSON shapes, CSV
//! artifacts, and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const W3: &str = r#"{"n_qubits": 3, "amplitudes": [[0,0],[0.5773502691896258,0],
[0.5773502691896258,0],[0,0],[0.5773502691896258,0],[0,0],[0,0],[0,0]]}"#;

const MAXMIXED_1Q: &str = r#"{"n_qubits": 1, "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#;

const WERNER_08: &str = r#"{"n_qubits": 2, "matrix": [
 [[0.05,0],[0,0],[0,0],[0,0]],
 [[0,0],[0.45,0],[-0.4,0],[0,0]],
 [[0,0],[-0.4,0],[0.45,0],[0,0]],
 [[0,0],[0,0],[0,0],[0.05,0]]]}"#;

fn ghz3_density() -> String {
    let mut rows = vec![vec![[0.0f64, 0.0]; 8]; 8];
    for (i, j) in [(0, 0), (0, 7), (7, 0), (7, 7)] {
        rows[i][j] = [0.5, 0.0];
    }
    serde_json::to_string(&serde_json::json!({"n_qubits": 3, "matrix": rows})).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsallisq"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stash(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn entropy_values_and_domain_guard() {
    let dir = tempfile::tempdir().unwrap();
    let state = stash(dir.path(), "mm.json", MAXMIXED_1Q);
    let state = state.to_str().unwrap();

    let out = run(&["entropy", state, "--q", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["tsallis_q"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["von_neumann"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);

    assert_eq!(code(&run(&["entropy", state, "--q", "0"])), 2);

    let bad = stash(dir.path(), "bad.json", "{ not json");
    let out = run(&["entropy", bad.to_str().unwrap(), "--q", "2"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn entropy_of_pure_projector_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let state = stash(dir.path(), "w3.json", W3);
    let out = run(&["entropy", state.to_str().unwrap(), "--q", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["tsallis_q"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn measure_routes_by_state_kind() {
    let dir = tempfile::tempdir().unwrap();
    let w3 = stash(dir.path(), "w3.json", W3);
    let werner = stash(dir.path(), "werner.json", WERNER_08);

    let out = run(&["measure", w3.to_str().unwrap(), "--cut", "0", "--q", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 4.0 / 9.0).abs() < 1e-9);
    assert_eq!(v["method"], "pure_exact");

    let out = run(&["measure", werner.to_str().unwrap(), "--q", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.245).abs() < 1e-9);
    assert_eq!(v["method"], "two_qubit_closed_form");

    // Range gating: q = 4.1 needs the opt-in flag.
    assert_eq!(code(&run(&["measure", werner.to_str().unwrap(), "--q", "4.1"])), 2);
    let out = run(&["measure", werner.to_str().unwrap(), "--q", "4.1", "--allow-extended"]);
    assert_eq!(code(&out), 0);

    // Forced roof agrees with the closed form.
    let out = run(&[
        "measure",
        werner.to_str().unwrap(),
        "--q",
        "2",
        "--method",
        "roof",
        "--budget",
        "4,24,250",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["method"], "roof_bound");
    assert!((v["value"].as_f64().unwrap() - 0.245).abs() < 2e-3);
}

#[test]
fn measure_needs_cut_on_larger_pure_states() {
    let dir = tempfile::tempdir().unwrap();
    let w3 = stash(dir.path(), "w3.json", W3);
    assert_eq!(code(&run(&["measure", w3.to_str().unwrap(), "--q", "2"])), 2);
}

#[test]
fn scan_convexity_expectation_and_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("conv.csv");
    let out = run(&[
        "scan-convexity",
        "--x-steps",
        "60",
        "--q-steps",
        "30",
        "--out",
        out_csv.to_str().unwrap(),
        "--expect-convex",
    ]);
    assert_eq!(code(&out), 0, "default [1,4] window is convex");
    let csv = fs::read_to_string(&out_csv).unwrap();
    assert!(csv.starts_with("x,q,value\n"));
    assert_eq!(csv.lines().count(), 1 + 60 * 30);
    let summary = stdout_json(&out);
    assert_eq!(summary["violations"].as_array().unwrap().len(), 0);

    let out = run(&[
        "scan-convexity",
        "--q-min",
        "4.4",
        "--q-max",
        "4.5",
        "--x-steps",
        "60",
        "--q-steps",
        "30",
        "--out",
        out_csv.to_str().unwrap(),
        "--expect-convex",
    ]);
    assert_eq!(code(&out), 3, "negative cells + --expect-convex exit 3");
    assert!(!stdout_json(&out)["violations"].as_array().unwrap().is_empty());

    // Without the expectation flag the same scan succeeds.
    let out = run(&[
        "scan-convexity",
        "--q-min",
        "4.4",
        "--q-max",
        "4.5",
        "--x-steps",
        "60",
        "--q-steps",
        "30",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let out = run(&[
        "scan-convexity",
        "--out",
        dir.path().join("no/such/dir/x.csv").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "unwritable path is a usage error");
}

#[test]
fn scan_bq_locates_zero_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("bq.csv");
    let out = run(&["scan-bq", "--steps", "600", "--out", out_csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let crossings: Vec<f64> = v["zero_crossings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap())
        .collect();
    assert_eq!(crossings.len(), 2);
    assert!((crossings[0] - 2.0).abs() < 1e-3);
    assert!((crossings[1] - 3.0).abs() < 1e-3);
    let signs: Vec<i64> = v["sign_segments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["sign"].as_i64().unwrap())
        .collect();
    assert_eq!(signs, vec![-1, 1, -1]);
    assert!(fs::read_to_string(&out_csv).unwrap().starts_with("q,value\n"));

    assert_eq!(
        code(&run(&["scan-bq", "--q-min", "0.9", "--out", out_csv.to_str().unwrap()])),
        2,
        "q-min must exceed 1"
    );
}

#[test]
fn check_pure_state_runs_all_applicable() {
    let dir = tempfile::tempdir().unwrap();
    let w3 = stash(dir.path(), "w3.json", W3);
    let out = run(&["check", w3.to_str().unwrap(), "--q", "2,3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["violations"], 0);
    // ckw + dual + tsallis_mono at 2 q's + tsallis_poly at 2 q's
    assert_eq!(v["reports"].as_array().unwrap().len(), 6);

    // Explicit bad pairing fails hard.
    let out = run(&["check", w3.to_str().unwrap(), "--ineq", "tsallis_mono", "--q", "1.5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_density_runs_mixed_probe() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = stash(dir.path(), "ghz3.json", &ghz3_density());
    let out = run(&["check", ghz.to_str().unwrap(), "--q", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["inequality"], "tsallis_mono");
    // GHZ pairs carry no two-qubit entanglement: lhs = 1/2, rhs = 0.
    assert!((reports[0]["residual"].as_f64().unwrap() - 0.5).abs() < 1e-6);

    let werner = stash(dir.path(), "werner.json", WERNER_08);
    assert_eq!(code(&run(&["check", werner.to_str().unwrap(), "--q", "2"])), 2);
}

#[test]
fn sweep_is_deterministic_and_validates_pairings() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let args = |out: &Path| {
        vec![
            "sweep".to_string(),
            "--n-qubits".into(),
            "3".into(),
            "--n-states".into(),
            "12".into(),
            "--ineq".into(),
            "ckw,dual_ckw,tsallis_mono".into(),
            "--q".into(),
            "2,2.5,3".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let out_a = run(&args(&csv_a).iter().map(String::as_str).collect::<Vec<_>>());
    let out_b = run(&args(&csv_b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out_a), 0);
    assert_eq!(code(&out_b), 0);
    let bytes_a = fs::read(&csv_a).unwrap();
    assert_eq!(bytes_a, fs::read(&csv_b).unwrap(), "same seed, same bytes");
    assert_eq!(out_a.stdout, out_b.stdout);

    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("inequality,q,n_qubits,state_seed,lhs,rhs,residual,pass\n"));
    // 12 states × (1 + 1 + 3 q-values) rows
    assert_eq!(text.lines().count(), 1 + 12 * 5);

    let summary = stdout_json(&out_a);
    assert_eq!(summary["config"]["seed"], 42, "default seed echoed");
    assert_eq!(summary["violation_count"], 0);

    // tsallis_mono at q = 1.5 is an invalid pairing.
    let out = run(&[
        "sweep",
        "--n-qubits",
        "3",
        "--n-states",
        "4",
        "--ineq",
        "tsallis_mono",
        "--q",
        "1.5",
        "--out",
        csv_a.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);

    // Summary can also land in a file, identical to stdout.
    let sum_path = dir.path().join("sum.json");
    let mut with_summary = args(&csv_a);
    with_summary.push("--summary-out".into());
    with_summary.push(sum_path.to_str().unwrap().into());
    let out = run(&with_summary.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read(&sum_path).unwrap(), out.stdout[..out.stdout.len() - 1]);
}

#[test]
fn roof_reports_budget_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let werner = stash(dir.path(), "werner.json", WERNER_08);
    let out = run(&[
        "roof",
        werner.to_str().unwrap(),
        "--q",
        "2",
        "--budget",
        "4,24,250",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["m"], 4);
    assert!((v["value"].as_f64().unwrap() - 0.245).abs() < 2e-3);

    // Concurrence roof needs no q; measure=tsallis without q is an error.
    let out = run(&[
        "roof",
        werner.to_str().unwrap(),
        "--measure",
        "concurrence",
        "--direction",
        "max",
        "--budget",
        "4,16,150",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(&["roof", werner.to_str().unwrap()])), 2);
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(code(&run(&["scan-bq", "--frobnicate", "1"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
}
