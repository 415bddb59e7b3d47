//! CLI surface: the commands behind the binary, the trajectory file format,
//! report determinism, and exit codes of the installed binary.

use lpv_realize::cli::{self, CliConfig};
use lpv_realize::trajfile;
use std::path::{Path, PathBuf};
use std::process::Command;

fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("models")
        .join(format!("{name}.json"))
}

fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn realize_prints_the_evaluated_matrices() {
    let out = tempfile::tempdir().unwrap();
    let out_path = out.path().join("realized.json");
    cli::cmd_realize(&model_path("mech3"), &[5.0], Some(&out_path)).unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["n_x"], 2);
    assert_eq!(doc["F"], serde_json::json!([[-5.0, 5.0], [0.0, 0.0]]));
    assert_eq!(doc["G"], serde_json::json!([[1.0], [1.0]]));
    assert_eq!(doc["H"], serde_json::json!([[-5.0, 5.0]]));
    assert_eq!(doc["J"], serde_json::json!([[1.0]]));
}

#[test]
fn simulate_reproduces_the_cancellation() {
    let dir = tempfile::tempdir().unwrap();
    let u_path = dir.path().join("u.csv");
    let p_path = dir.path().join("p.csv");
    let y_path = dir.path().join("y.csv");
    let u_rows: Vec<Vec<f64>> = (0..20).map(|k| vec![(k as f64 * 0.7).sin()]).collect();
    let p_rows: Vec<Vec<f64>> = (0..20).map(|k| vec![-2.0 + 0.2 * k as f64]).collect();
    write_csv(&u_path, "u1", &u_rows);
    write_csv(&p_path, "p1", &p_rows);
    cli::cmd_simulate(&model_path("mech3"), &u_path, &p_path, &y_path).unwrap();
    let y = trajfile::read_signal(&y_path).unwrap();
    assert_eq!(y.len(), 20);
    for (k, u_row) in u_rows.iter().enumerate() {
        assert!((y.sample(k)[0] - u_row[0]).abs() < 1e-12, "step {k}");
    }
}

#[test]
fn simulate_zero_input_gives_zero_output() {
    let dir = tempfile::tempdir().unwrap();
    let u_path = dir.path().join("u.csv");
    let p_path = dir.path().join("p.csv");
    let y_path = dir.path().join("y.csv");
    write_csv(&u_path, "u1", &vec![vec![0.0]; 10]);
    write_csv(&p_path, "p1", &vec![vec![1.5]; 10]);
    cli::cmd_simulate(&model_path("mech1"), &u_path, &p_path, &y_path).unwrap();
    let y = trajfile::read_signal(&y_path).unwrap();
    for k in 0..10 {
        assert_eq!(y.sample(k)[0], 0.0);
    }
}

#[test]
fn simulate_rejects_mismatched_lengths_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let u_path = dir.path().join("u.csv");
    let p_path = dir.path().join("p.csv");
    write_csv(&u_path, "u1", &vec![vec![0.1]; 7]);
    write_csv(&p_path, "p1", &vec![vec![1.5]; 9]);
    let err = cli::cmd_simulate(
        &model_path("mech1"),
        &u_path,
        &p_path,
        &dir.path().join("y.csv"),
    )
    .unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains('7') && msg.contains('9'), "message: {msg}");
}

#[test]
fn check_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("report1.json");
    let out2 = dir.path().join("report2.json");
    for out in [&out1, &out2] {
        let cfg = CliConfig {
            grid: Some(vec![(-1.0, 1.0, 11)]),
            trial_count: 4,
            seed: 7,
            output: Some(out.clone()),
            ..CliConfig::default()
        };
        cli::cmd_check(&model_path("mech2"), &cfg).unwrap();
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "reports must be byte-identical for a fixed config");
}

#[test]
fn check_report_embeds_config_and_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let cfg = CliConfig {
        grid: Some(vec![(1.0, 2.0, 2)]),
        output: Some(out.clone()),
        ..CliConfig::default()
    };
    let report = cli::cmd_check(&model_path("mech1"), &cfg).unwrap();
    assert_eq!(report.config.seed, 0);
    assert_eq!(report.config.grid_box, vec![[1.0, 2.0]]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["reachability"]["structurally_reachable"], "Yes");
    assert_eq!(doc["reachability"]["witness_p"], serde_json::json!([2.0]));
    assert_eq!(doc["observability"]["observable"], "No");
    assert_eq!(doc["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(doc["tolerances"]["rank_epsilon"].is_number());
}

#[test]
fn check_requires_a_grid_for_unbounded_domains() {
    let cfg = CliConfig::default();
    let err = cli::cmd_check(&model_path("mech3"), &cfg).unwrap_err();
    assert!(err.to_string().contains("--grid"), "{err}");
}

#[test]
fn grid_spec_parsing() {
    assert_eq!(
        cli::parse_grid_spec("1:2:5").unwrap(),
        vec![(1.0, 2.0, 5)]
    );
    assert_eq!(
        cli::parse_grid_spec("-1:1:3,0:4:9").unwrap(),
        vec![(-1.0, 1.0, 3), (0.0, 4.0, 9)]
    );
    assert!(cli::parse_grid_spec("1:2").is_err());
    assert!(cli::parse_grid_spec("a:b:c").is_err());
}

// --- binary-level checks -------------------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lpv-realize"))
}

#[test]
fn binary_check_missing_file_fails_with_message() {
    let out = bin().args(["check", "missing.json"]).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error"), "stderr: {stderr}");
}

#[test]
fn binary_examples_run_all_only_mech3_json() {
    let out = bin()
        .args(["examples", "run-all", "--only", "mech3", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["example"] == "mech3"));
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn binary_realize_at_point_succeeds() {
    let out = bin()
        .args([
            "realize",
            model_path("mech2").to_str().unwrap(),
            "--at",
            "0.0",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["kind"], "InverseFir");
}
