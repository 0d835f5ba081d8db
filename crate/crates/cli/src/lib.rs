// Range validations use the !(x > 0.0) form so NaN parameters fail them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Experiment runner binding the measurement, statistics, and wavepacket
//! subsystems behind a single config-driven command.
//!
//! A run is deterministic given (config, seed): identical inputs produce
//! byte-identical CSV outputs. All files are written atomically (temp name,
//! then rename) and listed in `report.json` with content digests.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

use std::path::{Path, PathBuf};

use config::ExperimentConfig;
use error::CliError;
use report::{RunRecorder, RunReport};

/// Environment variable that overrides the output directory.
pub const OUTPUT_DIR_ENV: &str = "EVERETT_LAB_OUTPUT_DIR";

/// Output directory precedence: CLI flag, then environment, then config,
/// then a fixed default.
pub fn resolve_output_dir(config: &ExperimentConfig, flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    config
        .output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("everett-lab-output"))
}

/// Validates the config, runs the experiment, writes outputs and the
/// report, and prints one verdict line per check.
pub fn run(config: &ExperimentConfig, output_dir: &Path, seed: u64) -> Result<RunReport, CliError> {
    let params = config.typed_parameters()?;
    let mut recorder = RunRecorder::new(output_dir)?;
    experiments::dispatch(&params, seed, &mut recorder)?;

    let mut echo =
        serde_json::to_value(config).map_err(|e| CliError::Usage(format!("config echo: {e}")))?;
    if let Some(obj) = echo.as_object_mut() {
        obj.insert("seed".into(), serde_json::json!(seed));
        obj.insert(
            "output_dir".into(),
            serde_json::json!(output_dir.display().to_string()),
        );
    }
    let report = recorder.finish(config.experiment.name(), echo)?;

    for check in &report.checks {
        println!(
            "[{}] {} — {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    println!(
        "{}: {}/{} checks passed in {:.3}s, outputs in {}",
        config.experiment.name(),
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len(),
        report.wall_time_seconds,
        output_dir.display()
    );
    Ok(report)
}
