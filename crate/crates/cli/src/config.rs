//! Strict experiment configuration.
//!
//! A config is one JSON document. Unknown keys anywhere are errors — a typo
//! must fail loudly rather than silently fall back to a default — and every
//! parameter is range-checked before the experiment starts.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Top-level config document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub parameters: serde_json::Value,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MeasureChain,
    Repeated,
    Frequency,
    Chebyshev,
    Estimator,
    Envariance,
    Wavepacket,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MeasureChain => "measure_chain",
            ExperimentKind::Repeated => "repeated",
            ExperimentKind::Frequency => "frequency",
            ExperimentKind::Chebyshev => "chebyshev",
            ExperimentKind::Estimator => "estimator",
            ExperimentKind::Envariance => "envariance",
            ExperimentKind::Wavepacket => "wavepacket",
        }
    }
}

/// Complex number as a `[re, im]` pair in JSON.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexPair(pub f64, pub f64);

impl From<ComplexPair> for Complex64 {
    fn from(p: ComplexPair) -> Self {
        Complex64::new(p.0, p.1)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureChainParams {
    /// System amplitudes over the outcome basis; the outcome count is the length.
    pub amplitudes: Vec<ComplexPair>,
    pub env_qubits: u32,
    pub coupling: f64,
    pub time: f64,
    pub observe: bool,
    #[serde(default = "default_interference_tol")]
    pub interference_tol: f64,
}

fn default_interference_tol() -> f64 {
    everett_core::tolerance::INTERFERENCE
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepeatedParams {
    pub amplitudes: Vec<ComplexPair>,
    pub n_measurements: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyParams {
    pub n: u64,
    pub rho_u: f64,
    /// Interval width of the coarse histogram; defaults to N^(−1/2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_z: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChebyshevParams {
    pub n: u64,
    pub rho_u: f64,
    pub delta_z: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorParams {
    pub n: u64,
    pub rho_u: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvarianceParams {
    pub c1: ComplexPair,
    pub c2: ComplexPair,
    pub env_dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "scenario", rename_all = "snake_case")]
pub enum WavepacketParams {
    FreeSpread {
        n_points: usize,
        half_width: f64,
        sigma: f64,
        k0: f64,
        dt: f64,
        steps: usize,
    },
    HarmonicGround {
        n_points: usize,
        half_width: f64,
        dt: f64,
        steps: usize,
    },
    LinearForce {
        n_points: usize,
        half_width: f64,
        sigma: f64,
        center: f64,
        force: f64,
        t_max: f64,
        steps: usize,
    },
}

/// Typed, validated parameters for one experiment.
#[derive(Debug, Clone)]
pub enum ExperimentParams {
    MeasureChain(MeasureChainParams),
    Repeated(RepeatedParams),
    Frequency(FrequencyParams),
    Chebyshev(ChebyshevParams),
    Estimator(EstimatorParams),
    Envariance(EnvarianceParams),
    Wavepacket(WavepacketParams),
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    /// Parses and range-checks the parameter block for the named experiment.
    pub fn typed_parameters(&self) -> Result<ExperimentParams, CliError> {
        let value = self.parameters.clone();
        let usage = |e: serde_json::Error| {
            CliError::Usage(format!(
                "invalid parameters for {}: {e}",
                self.experiment.name()
            ))
        };
        let params = match self.experiment {
            ExperimentKind::MeasureChain => {
                ExperimentParams::MeasureChain(serde_json::from_value(value).map_err(usage)?)
            }
            ExperimentKind::Repeated => {
                ExperimentParams::Repeated(serde_json::from_value(value).map_err(usage)?)
            }
            ExperimentKind::Frequency => {
                ExperimentParams::Frequency(serde_json::from_value(value).map_err(usage)?)
            }
            ExperimentKind::Chebyshev => {
                ExperimentParams::Chebyshev(serde_json::from_value(value).map_err(usage)?)
            }
            ExperimentKind::Estimator => {
                ExperimentParams::Estimator(serde_json::from_value(value).map_err(usage)?)
            }
            ExperimentKind::Envariance => {
                ExperimentParams::Envariance(serde_json::from_value(value).map_err(usage)?)
            }
            ExperimentKind::Wavepacket => {
                ExperimentParams::Wavepacket(serde_json::from_value(value).map_err(usage)?)
            }
        };
        validate(&params)?;
        Ok(params)
    }
}

fn validate(params: &ExperimentParams) -> Result<(), CliError> {
    let fail = |msg: String| Err(CliError::Usage(msg));
    match params {
        ExperimentParams::MeasureChain(p) => {
            if p.amplitudes.len() < 2 {
                return fail("amplitudes: need at least two outcomes".into());
            }
            if amplitude_norm(&p.amplitudes) == 0.0 {
                return fail("amplitudes: zero vector".into());
            }
            if p.coupling < 0.0 || p.time < 0.0 {
                return fail("coupling and time must be nonnegative".into());
            }
            if !(p.interference_tol > 0.0) {
                return fail("interference_tol must be positive".into());
            }
        }
        ExperimentParams::Repeated(p) => {
            if p.amplitudes.len() < 2 {
                return fail("amplitudes: need at least two outcomes".into());
            }
            if amplitude_norm(&p.amplitudes) == 0.0 {
                return fail("amplitudes: zero vector".into());
            }
            if p.n_measurements == 0 {
                return fail("n_measurements must be ≥ 1".into());
            }
        }
        ExperimentParams::Frequency(p) => {
            check_n_rho(p.n, p.rho_u)?;
            if let Some(dz) = p.delta_z {
                if !(dz > 0.0 && dz < 1.0) {
                    return fail(format!("delta_z must lie in (0,1), got {dz}"));
                }
            }
        }
        ExperimentParams::Chebyshev(p) => {
            check_n_rho(p.n, p.rho_u)?;
            if !(p.delta_z > 0.0) {
                return fail(format!("delta_z must be positive, got {}", p.delta_z));
            }
        }
        ExperimentParams::Estimator(p) => check_n_rho(p.n, p.rho_u)?,
        ExperimentParams::Envariance(p) => {
            if p.env_dim < 2 {
                return fail("env_dim must be ≥ 2".into());
            }
            let (c1, c2): (Complex64, Complex64) = (p.c1.into(), p.c2.into());
            if c1.norm_sqr() + c2.norm_sqr() == 0.0 {
                return fail("c1 and c2 cannot both vanish".into());
            }
        }
        ExperimentParams::Wavepacket(p) => validate_wavepacket(p)?,
    }
    Ok(())
}

fn amplitude_norm(amps: &[ComplexPair]) -> f64 {
    amps.iter()
        .map(|p| Complex64::from(*p).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn check_n_rho(n: u64, rho_u: f64) -> Result<(), CliError> {
    if n == 0 || n > everett_core::stats::MAX_EXACT_N {
        return Err(CliError::Usage(format!(
            "n must lie in 1..={}, got {n}",
            everett_core::stats::MAX_EXACT_N
        )));
    }
    if !(rho_u > 0.0 && rho_u < 1.0) {
        return Err(CliError::Usage(format!(
            "rho_u must lie strictly inside (0,1), got {rho_u}"
        )));
    }
    Ok(())
}

fn validate_wavepacket(p: &WavepacketParams) -> Result<(), CliError> {
    let fail = |msg: &str| Err(CliError::Usage(msg.into()));
    let check_grid = |n_points: usize, half_width: f64, steps: usize, dt: f64| {
        if n_points < 64 {
            return fail("n_points must be ≥ 64");
        }
        if !(half_width > 0.0) {
            return fail("half_width must be positive");
        }
        if steps == 0 {
            return fail("steps must be ≥ 1");
        }
        if !(dt > 0.0) {
            return fail("dt must be positive");
        }
        Ok(())
    };
    match *p {
        WavepacketParams::FreeSpread {
            n_points,
            half_width,
            sigma,
            dt,
            steps,
            ..
        } => {
            check_grid(n_points, half_width, steps, dt)?;
            if !(sigma > 0.0) {
                return fail("sigma must be positive");
            }
            if half_width < 5.0 * sigma {
                return fail("half_width must keep the packet ≥ 5σ from the walls");
            }
        }
        WavepacketParams::HarmonicGround {
            n_points,
            half_width,
            dt,
            steps,
        } => check_grid(n_points, half_width, steps, dt)?,
        WavepacketParams::LinearForce {
            n_points,
            half_width,
            sigma,
            center,
            t_max,
            steps,
            ..
        } => {
            check_grid(n_points, half_width, steps, t_max / steps as f64)?;
            if !(sigma > 0.0) {
                return fail("sigma must be positive");
            }
            if half_width - center.abs() < 5.0 * sigma {
                return fail("half_width must keep the packet ≥ 5σ from the walls");
            }
        }
    }
    Ok(())
}
