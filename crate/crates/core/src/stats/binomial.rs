//! Exact branch-count density over repeated measurements and its Gaussian
//! approximations.
//!
//! For N identically prepared systems with branch weight ρ_u on the target
//! value, the summed density of all label sequences containing the target
//! exactly m times is binomial:
//!
//! ```text
//! ρ(m:N|u) = C(N,m) · ρ_u^m · ρ_¬u^(N−m)
//! ```
//!
//! Each term is assembled in log space so the densities stay finite and
//! accurate out to N = 10⁷.

use crate::error::{Error, Result};

use super::distribution::{DistributionKind, DistributionParams, FrequencyDistribution};
use super::log_factorial::{binomial_deviance, stirling_error};

/// Largest N accepted by the exact density.
pub const MAX_EXACT_N: u64 = 10_000_000;

/// Gaussian forms are flagged below this value of Nρρ̄.
pub const GAUSSIAN_GUARD: f64 = 9.0;

pub(crate) fn check_rho(rho_u: f64) -> Result<()> {
    if !(rho_u > 0.0 && rho_u < 1.0) {
        return Err(Error::Contract(format!(
            "rho_u must lie strictly inside (0,1), got {rho_u}"
        )));
    }
    Ok(())
}

/// Single binomial term ρ(m:N|u).
///
/// Uses the saddle-point form: Stirling remainders plus two deviance terms,
/// all of O(1) magnitude, so the result keeps ~1e-15 relative accuracy out
/// to N = 10⁷ where the plain log-gamma route loses five digits.
pub fn count_density_term(n: u64, rho_u: f64, m: u64) -> f64 {
    let rho_not = 1.0 - rho_u;
    if m == 0 {
        return (n as f64 * rho_not.ln()).exp();
    }
    if m == n {
        return (n as f64 * rho_u.ln()).exp();
    }
    let (nf, mf) = (n as f64, m as f64);
    let lc = stirling_error(n)
        - stirling_error(m)
        - stirling_error(n - m)
        - binomial_deviance(mf, nf * rho_u)
        - binomial_deviance(nf - mf, nf * rho_not);
    let ln_prefactor = (2.0 * std::f64::consts::PI).ln() + mf.ln() + (-mf / nf).ln_1p();
    (lc - 0.5 * ln_prefactor).exp()
}

/// Exact density ρ(m:N|u) over m = 0..N.
pub fn exact_count_density(n: u64, rho_u: f64) -> Result<FrequencyDistribution> {
    check_rho(rho_u)?;
    if n == 0 || n > MAX_EXACT_N {
        return Err(Error::Contract(format!(
            "N must lie in 1..={MAX_EXACT_N}, got {n}"
        )));
    }
    let support: Vec<f64> = (0..=n).map(|m| m as f64).collect();
    let density: Vec<f64> = (0..=n).map(|m| count_density_term(n, rho_u, m)).collect();
    Ok(FrequencyDistribution::new(
        DistributionKind::ExactCount,
        support,
        density,
        DistributionParams {
            n,
            rho_u,
            delta_z: None,
        },
    ))
}

/// Gaussian value at count m, `(2πNρρ̄)^(−1/2) exp(−(m−Nρ)²/(2Nρρ̄))`.
pub fn gaussian_count_at(n: u64, rho_u: f64, m: f64) -> f64 {
    let var = n as f64 * rho_u * (1.0 - rho_u);
    (-((m - n as f64 * rho_u).powi(2)) / (2.0 * var)).exp()
        / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// Gaussian approximation to the count density, sampled at m = 0..N.
///
/// Validity requires Nρρ̄ ≥ 9; below that the result carries a warning flag
/// instead of failing.
pub fn gaussian_count_density(n: u64, rho_u: f64) -> Result<FrequencyDistribution> {
    check_rho(rho_u)?;
    if n == 0 {
        return Err(Error::Contract("N must be positive".into()));
    }
    let warn = n as f64 * rho_u * (1.0 - rho_u) < GAUSSIAN_GUARD;
    let support: Vec<f64> = (0..=n).map(|m| m as f64).collect();
    let density: Vec<f64> = support
        .iter()
        .map(|&m| gaussian_count_at(n, rho_u, m))
        .collect();
    Ok(FrequencyDistribution::new(
        DistributionKind::GaussianCount,
        support,
        density,
        DistributionParams {
            n,
            rho_u,
            delta_z: None,
        },
    )
    .with_guard_warning(warn))
}

/// Frequency-space Gaussian `ρ(z|u) = √(N/2πρρ̄) · exp(−N(z−ρ)²/2ρρ̄)` at z.
pub fn relative_frequency_at(n: u64, rho_u: f64, z: f64) -> f64 {
    let rr = rho_u * (1.0 - rho_u);
    let nf = n as f64;
    (nf / (2.0 * std::f64::consts::PI * rr)).sqrt() * (-nf * (z - rho_u).powi(2) / (2.0 * rr)).exp()
}

/// Gaussian density over the relative frequency z = m/N, sampled on a grid
/// spanning ±12 standard deviations around the mean ρ_u.
pub fn relative_frequency_density(n: u64, rho_u: f64) -> Result<FrequencyDistribution> {
    check_rho(rho_u)?;
    if n == 0 {
        return Err(Error::Contract("N must be positive".into()));
    }
    let warn = n as f64 * rho_u * (1.0 - rho_u) < GAUSSIAN_GUARD;
    let sigma = (rho_u * (1.0 - rho_u) / n as f64).sqrt();
    let points = 4097i64;
    let mid = points / 2;
    let step = 24.0 * sigma / (points - 1) as f64;
    // grid centered exactly on ρ_u so the peak sits on a support point
    let support: Vec<f64> = (0..points)
        .map(|i| rho_u + (i - mid) as f64 * step)
        .collect();
    let density: Vec<f64> = support
        .iter()
        .map(|&z| relative_frequency_at(n, rho_u, z))
        .collect();
    Ok(FrequencyDistribution::new(
        DistributionKind::GaussianFrequency,
        support,
        density,
        DistributionParams {
            n,
            rho_u,
            delta_z: None,
        },
    )
    .with_guard_warning(warn))
}
