//! CLI contract tests: determinism, strict config handling, exit codes, and
//! the output-directory override chain.

use std::fs;
use std::process::Command;

use everett_lab::config::ExperimentConfig;
use everett_lab::error::CliError;
use everett_lab::{resolve_output_dir, run};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(text).unwrap()
}

#[test]
fn identical_config_and_seed_give_byte_identical_csvs() {
    let cfg = config(
        r#"{ "experiment": "envariance",
             "parameters": { "c1": [0.7071067811865476, 0.0],
                              "c2": [0.5, 0.5],
                              "env_dim": 5 },
             "seed": 1234 }"#,
    );
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let report_a = run(&cfg, dir_a.path(), 1234).unwrap();
    let report_b = run(&cfg, dir_b.path(), 1234).unwrap();
    assert!(report_a.all_passed() && report_b.all_passed());

    let mut compared = 0;
    for entry in fs::read_dir(dir_a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        if name.to_string_lossy().ends_with(".csv") {
            let a = fs::read(dir_a.path().join(&name)).unwrap();
            let b = fs::read(dir_b.path().join(&name)).unwrap();
            assert_eq!(a, b, "{name:?} differs between runs");
            compared += 1;
        }
    }
    assert!(compared > 0);

    // digests recorded in the two reports agree as well
    for (a, b) in report_a.outputs.iter().zip(&report_b.outputs) {
        assert_eq!(a.sha256, b.sha256);
    }

    // a different seed rotates the random environment basis
    let dir_c = tempfile::tempdir().unwrap();
    let report_c = run(&cfg, dir_c.path(), 99).unwrap();
    assert!(report_c.all_passed());
    let a = fs::read(dir_a.path().join("envariance.csv")).unwrap();
    let c = fs::read(dir_c.path().join("envariance.csv")).unwrap();
    assert_ne!(a, c, "different seeds must produce different bases");
}

#[test]
fn capacity_errors_map_to_exit_code_3() {
    let cfg = config(
        r#"{ "experiment": "repeated",
             "parameters": { "amplitudes": [[0.6, 0.0], [0.8, 0.0]],
                              "n_measurements": 14 },
             "seed": 1 }"#,
    );
    let dir = tempfile::tempdir().unwrap();
    match run(&cfg, dir.path(), 1) {
        Err(e @ CliError::Capacity(_)) => assert_eq!(e.exit_code(), 3),
        other => panic!("expected capacity error, got {other:?}"),
    }
}

#[test]
fn failed_checks_are_reported_not_hidden() {
    // a huge Crank–Nicolson step conserves norm but badly misses the
    // spreading law, so the run completes with a failing check
    let cfg = config(
        r#"{ "experiment": "wavepacket",
             "parameters": { "scenario": "free_spread", "n_points": 256,
                              "half_width": 14.0, "sigma": 1.0, "k0": 0.0,
                              "dt": 0.25, "steps": 4 },
             "seed": 1 }"#,
    );
    let dir = tempfile::tempdir().unwrap();
    let report = run(&cfg, dir.path(), 1).unwrap();
    assert!(!report.all_passed());
    let spreading = report
        .checks
        .iter()
        .find(|c| c.name == "spreading_law")
        .unwrap();
    assert!(!spreading.passed);
}

#[test]
fn output_dir_precedence_flag_env_config() {
    let cfg = config(
        r#"{ "experiment": "estimator",
             "parameters": { "n": 100, "rho_u": 0.5 },
             "seed": 5, "output_dir": "from-config" }"#,
    );
    assert_eq!(
        resolve_output_dir(&cfg, Some(std::path::Path::new("from-flag"))),
        std::path::PathBuf::from("from-flag")
    );
    // no flag, no env → config value
    std::env::remove_var(everett_lab::OUTPUT_DIR_ENV);
    assert_eq!(
        resolve_output_dir(&cfg, None),
        std::path::PathBuf::from("from-config")
    );
    std::env::set_var(everett_lab::OUTPUT_DIR_ENV, "from-env");
    assert_eq!(
        resolve_output_dir(&cfg, None),
        std::path::PathBuf::from("from-env")
    );
    std::env::remove_var(everett_lab::OUTPUT_DIR_ENV);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_everett-lab");
    let dir = tempfile::tempdir().unwrap();

    // 0: all checks pass
    let good = dir.path().join("good.json");
    fs::write(
        &good,
        r#"{ "experiment": "chebyshev",
             "parameters": { "n": 1000, "rho_u": 0.3, "delta_z": 0.1 },
             "seed": 42 }"#,
    )
    .unwrap();
    let status = Command::new(bin)
        .args(["run", good.to_str().unwrap(), "--output-dir"])
        .arg(dir.path().join("out0"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // 2: usage error (bad parameter range)
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{ "experiment": "chebyshev",
             "parameters": { "n": 1000, "rho_u": 7.0, "delta_z": 0.1 },
             "seed": 42 }"#,
    )
    .unwrap();
    let status = Command::new(bin)
        .args(["run", bad.to_str().unwrap(), "--output-dir"])
        .arg(dir.path().join("out2"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // 2: unreadable config path
    let status = Command::new(bin)
        .args(["run", "no-such-file.json"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // 3: capacity
    let big = dir.path().join("big.json");
    fs::write(
        &big,
        r#"{ "experiment": "repeated",
             "parameters": { "amplitudes": [[0.6, 0.0], [0.8, 0.0]],
                              "n_measurements": 14 },
             "seed": 1 }"#,
    )
    .unwrap();
    let status = Command::new(bin)
        .args(["run", big.to_str().unwrap(), "--output-dir"])
        .arg(dir.path().join("out3"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    // 1: completes but a check fails
    let failing = dir.path().join("failing.json");
    fs::write(
        &failing,
        r#"{ "experiment": "wavepacket",
             "parameters": { "scenario": "free_spread", "n_points": 256,
                              "half_width": 14.0, "sigma": 1.0, "k0": 0.0,
                              "dt": 0.25, "steps": 4 },
             "seed": 1 }"#,
    )
    .unwrap();
    let status = Command::new(bin)
        .args(["run", failing.to_str().unwrap(), "--output-dir"])
        .arg(dir.path().join("out1"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn report_lists_every_output_with_a_digest() {
    let cfg = config(
        r#"{ "experiment": "frequency",
             "parameters": { "n": 1000, "rho_u": 0.5 },
             "seed": 3 }"#,
    );
    let dir = tempfile::tempdir().unwrap();
    let report = run(&cfg, dir.path(), 3).unwrap();
    assert!(report.all_passed());
    // symmetry check fires for rho_u = 0.5
    assert!(report.checks.iter().any(|c| c.name == "curve_symmetry"));
    assert_eq!(report.outputs.len(), 2);
    for output in &report.outputs {
        assert!(output.path.exists());
        assert_eq!(output.sha256.len(), 64);
        let body = fs::read(&output.path).unwrap();
        let digest = {
            use sha2::{Digest, Sha256};
            hex::encode(Sha256::digest(&body))
        };
        assert_eq!(digest, output.sha256);
    }
    let report_json = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(report_json.contains("\"experiment\": \"frequency\""));
}
