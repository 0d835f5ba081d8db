//! Run reports and atomic output writing.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// One named check with its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// An emitted file and the digest of its contents.
#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything one run produced.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: serde_json::Value,
    pub wall_time_seconds: f64,
    pub checks: Vec<CheckResult>,
    pub outputs: Vec<OutputFile>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Collects outputs and checks while an experiment runs.
pub struct RunRecorder {
    output_dir: PathBuf,
    started: Instant,
    checks: Vec<CheckResult>,
    outputs: Vec<OutputFile>,
}

impl RunRecorder {
    pub fn new(output_dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(output_dir)?;
        Ok(Self {
            output_dir: output_dir.to_path_buf(),
            started: Instant::now(),
            checks: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn output_dir(&self) -> &Path {
        &self.output_dir
    }

    /// Writes a file atomically (temp name, then rename) and records its digest.
    pub fn write_output(&mut self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.output_dir.join(name);
        let tmp = self.output_dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, contents)?;
        fs::rename(&tmp, &path)?;
        let digest = Sha256::digest(contents.as_bytes());
        self.outputs.push(OutputFile {
            path: path.clone(),
            sha256: hex::encode(digest),
        });
        Ok(path)
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckResult::new(name, passed, detail));
    }

    /// Records a check that passes when `|got − want| ≤ tol`.
    pub fn check_close(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let diff = (got - want).abs();
        self.check(
            name,
            diff <= tol,
            format!("got {got:.6e}, want {want:.6e} (|Δ| = {diff:.3e}, tol {tol:.1e})"),
        );
    }

    /// Finalizes the report and writes `report.json` alongside the outputs.
    pub fn finish(
        self,
        experiment: &str,
        config_echo: serde_json::Value,
    ) -> Result<RunReport, CliError> {
        let report = RunReport {
            experiment: experiment.to_string(),
            config: config_echo,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
            checks: self.checks,
            outputs: self.outputs,
        };
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Usage(format!("report serialization: {e}")))?;
        let path = self.output_dir.join("report.json");
        let tmp = self.output_dir.join(".report.json.tmp");
        fs::write(&tmp, &text)?;
        fs::rename(&tmp, &path)?;
        Ok(report)
    }
}
