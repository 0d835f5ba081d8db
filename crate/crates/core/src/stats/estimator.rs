//! Branch-weighted estimator distribution for the single-shot probability.
//!
//! An observer inside one branch sees m target hits out of N and infers a
//! probability P_u for a single measurement. Under a uniform prior the
//! posterior given m hits is Beta(m+1, N−m+1). Folding the per-branch
//! posteriors with the branch weights ρ(m:N|u) gives the distribution of
//! P_u over all observers:
//!
//! ```text
//! ρ(P_u) = Σ_m ρ(m:N|u) · Beta(m+1, N−m+1)(P_u)
//! ```
//!
//! The mixture is represented on a fixed uniform grid over [0,1].

use crate::error::Result;

use super::binomial::exact_count_density;
use super::distribution::{DistributionKind, DistributionParams, FrequencyDistribution};
use super::log_factorial::{compensated_descending_sum, ln_factorial};

/// Prior the observers apply to the unknown single-shot probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prior {
    /// Flat on \[0,1\].
    Uniform,
}

/// Grid resolution of the returned density.
pub const ESTIMATOR_GRID_POINTS: usize = 2048;

/// Branch weights below this fraction of the largest weight contribute less
/// than ~1e-13 to the mixture and are skipped.
const WEIGHT_CUTOFF: f64 = 1e-16;

/// Posterior density Beta(m+1, N−m+1) at p, assembled in log space.
fn beta_posterior_at(n: u64, m: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return if m == 0 { n as f64 + 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if m == n { n as f64 + 1.0 } else { 0.0 };
    }
    let ln_norm = ln_factorial(n + 1) - ln_factorial(m) - ln_factorial(n - m);
    (ln_norm + m as f64 * p.ln() + (n - m) as f64 * (1.0 - p).ln()).exp()
}

/// The branch-weight-mixed posterior density of P_u on a uniform grid.
pub fn estimator_distribution(n: u64, rho_u: f64, _prior: Prior) -> Result<FrequencyDistribution> {
    let weights = exact_count_density(n, rho_u)?;
    let w = weights.density();
    let w_max = w.iter().cloned().fold(0.0f64, f64::max);

    let grid: Vec<f64> = (0..ESTIMATOR_GRID_POINTS)
        .map(|i| i as f64 / (ESTIMATOR_GRID_POINTS - 1) as f64)
        .collect();

    let mut density = vec![0.0f64; grid.len()];
    let mut terms: Vec<f64> = Vec::new();
    for (i, &p) in grid.iter().enumerate() {
        terms.clear();
        for m in 0..=n {
            let weight = w[m as usize];
            if weight < w_max * WEIGHT_CUTOFF {
                continue;
            }
            terms.push(weight * beta_posterior_at(n, m, p));
        }
        density[i] = compensated_descending_sum(&mut terms);
    }

    Ok(FrequencyDistribution::new(
        DistributionKind::Estimator,
        grid,
        density,
        DistributionParams {
            n,
            rho_u,
            delta_z: None,
        },
    ))
}

/// Trapezoid mass of a sampled density within [lo, hi].
pub fn mass_within(dist: &FrequencyDistribution, lo: f64, hi: f64) -> f64 {
    let support = dist.support();
    let density = dist.density();
    let mut total = 0.0;
    for i in 1..support.len() {
        let (a, b) = (support[i - 1], support[i]);
        if b <= lo || a >= hi {
            continue;
        }
        // clip the cell to [lo, hi], interpolating the density linearly
        let (ca, cb) = (a.max(lo), b.min(hi));
        let fa = density[i - 1] + (density[i] - density[i - 1]) * (ca - a) / (b - a);
        let fb = density[i - 1] + (density[i] - density[i - 1]) * (cb - a) / (b - a);
        total += 0.5 * (fa + fb) * (cb - ca);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_posterior_normalizes() {
        // quadrature oracle: Simpson over [0,1] at fine resolution
        for &(n, m) in &[(10u64, 3u64), (50, 0), (50, 50), (200, 120)] {
            let cells = 20_000usize;
            let h = 1.0 / cells as f64;
            let mut total = 0.0;
            for i in 0..cells {
                let a = i as f64 * h;
                let fa = beta_posterior_at(n, m, a);
                let fm = beta_posterior_at(n, m, a + 0.5 * h);
                let fb = beta_posterior_at(n, m, a + h);
                total += h / 6.0 * (fa + 4.0 * fm + fb);
            }
            assert!(
                (total - 1.0).abs() < 1e-8,
                "Beta({},{}) mass {total}",
                m + 1,
                n - m + 1
            );
        }
    }

    #[test]
    fn mixture_integrates_to_one() {
        let d = estimator_distribution(100, 0.3, Prior::Uniform).unwrap();
        assert!((d.trapezoid_mass() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn mixture_mean_approaches_rho_u() {
        // the analytic mixture mean is (Nρ+1)/(N+2); its distance from ρ_u
        // must shrink monotonically as N grows by decades
        let mut last = f64::INFINITY;
        for &n in &[100u64, 1000, 10_000] {
            let d = estimator_distribution(n, 0.3, Prior::Uniform).unwrap();
            let err = (d.trapezoid_mean() - 0.3).abs();
            assert!(err < last, "mean error not decreasing at N={n}: {err}");
            last = err;
        }
    }

    #[test]
    fn mixture_symmetric_at_half() {
        let d = estimator_distribution(64, 0.5, Prior::Uniform).unwrap();
        let rho = d.density();
        let n = rho.len();
        for i in 0..n / 2 {
            assert!(
                (rho[i] - rho[n - 1 - i]).abs() <= 1e-10 * rho[i].max(1.0),
                "asymmetry at grid point {i}"
            );
        }
    }

    #[test]
    fn concentration_grows_with_n() {
        let mut last = 0.0;
        for &n in &[100u64, 1000, 10_000] {
            let d = estimator_distribution(n, 0.3, Prior::Uniform).unwrap();
            let mass = mass_within(&d, 0.25, 0.35);
            assert!(mass > last, "mass not increasing at N={n}: {mass}");
            last = mass;
        }
        assert!(last >= 0.99, "mass at N=10⁴ only {last}");
    }
}
