//! The frequency operator F_N on the N-fold product basis.
//!
//! `F_N = (1/N) Σ_i f_i` with f projecting the i-th factor onto the target
//! eigenstate, so F_N is diagonal on product basis states with eigenvalues
//! m/N. Its eigenvalue density for `|ψ⟩^N` is computed along two independent
//! routes that must agree:
//!
//! - the explicit route walks every one of the dⁿ basis sequences and sums
//!   squared amplitudes per eigenvalue;
//! - the combinatorial route is the binomial count density with
//!   ρ_u = |c_u|².
//!
//! The coarse operator F_{NΔz} snaps each eigenvalue to the midpoint z_k of
//! the interval containing it.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::binomial::exact_count_density;
use super::distribution::{DistributionKind, DistributionParams, FrequencyDistribution};
use super::histogram::HistogramSpec;
use super::log_factorial::compensated_descending_sum;

/// Largest N for which the explicit dⁿ walk is allowed.
pub const MAX_EXPLICIT_N: u64 = 20;

fn target_weight(psi: &[Complex64], u_index: usize) -> Result<f64> {
    if psi.is_empty() {
        return Err(Error::Contract("amplitude array is empty".into()));
    }
    if u_index >= psi.len() {
        return Err(Error::Contract(format!(
            "target index {u_index} out of range for {} amplitudes",
            psi.len()
        )));
    }
    let total: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(psi[u_index].norm_sqr() / total)
}

/// Eigenvalue density of F_N for ψ⊗…⊗ψ via the binomial identity.
///
/// Support is z = m/N, m = 0..N. The m = 0 eigenvalue is included: a
/// sequence can avoid the target entirely.
pub fn frequency_operator_density(
    psi: &[Complex64],
    n: u64,
    u_index: usize,
) -> Result<FrequencyDistribution> {
    let rho_u = target_weight(psi, u_index)?;
    let support: Vec<f64> = (0..=n).map(|m| m as f64 / n as f64).collect();
    // a B-eigenstate has a deterministic frequency; the binomial degenerates
    if rho_u == 0.0 || rho_u == 1.0 {
        let mut density = vec![0.0; n as usize + 1];
        density[if rho_u == 1.0 { n as usize } else { 0 }] = 1.0;
        return Ok(FrequencyDistribution::new(
            DistributionKind::ExactCount,
            support,
            density,
            DistributionParams {
                n,
                rho_u,
                delta_z: None,
            },
        ));
    }
    let counts = exact_count_density(n, rho_u)?;
    Ok(FrequencyDistribution::new(
        DistributionKind::ExactCount,
        support,
        counts.density().to_vec(),
        counts.params(),
    ))
}

/// Walks all dⁿ product sequences, accumulating |Π c|² per target count.
fn explicit_count_masses(psi: &[Complex64], n: u64, u_index: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 || n > MAX_EXPLICIT_N {
        return Err(Error::Contract(format!(
            "explicit route needs 1 ≤ N ≤ {MAX_EXPLICIT_N}, got {n}"
        )));
    }
    let total: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    let weights: Vec<f64> = psi.iter().map(|c| c.norm_sqr() / total).collect();
    let mut masses: Vec<Vec<f64>> = vec![Vec::new(); n as usize + 1];

    // depth-first over sequences with the running |amplitude|² product
    fn walk(
        weights: &[f64],
        u_index: usize,
        depth_left: u64,
        count: usize,
        product: f64,
        masses: &mut [Vec<f64>],
    ) {
        if depth_left == 0 {
            masses[count].push(product);
            return;
        }
        for (b, &w) in weights.iter().enumerate() {
            let next = count + usize::from(b == u_index);
            walk(weights, u_index, depth_left - 1, next, product * w, masses);
        }
    }
    walk(&weights, u_index, n, 0, 1.0, &mut masses);
    Ok(masses)
}

/// Eigenvalue density of F_N by explicit enumeration of the product basis.
pub fn frequency_operator_density_explicit(
    psi: &[Complex64],
    n: u64,
    u_index: usize,
) -> Result<FrequencyDistribution> {
    let rho_u = target_weight(psi, u_index)?;
    let mut masses = explicit_count_masses(psi, n, u_index)?;
    let support: Vec<f64> = (0..=n).map(|m| m as f64 / n as f64).collect();
    let density: Vec<f64> = masses
        .iter_mut()
        .map(|bucket| compensated_descending_sum(bucket))
        .collect();
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

/// Density of the coarse operator F_{NΔz}: eigenvalues z_k, masses ρ̃(k).
pub fn coarse_frequency_operator_density(
    psi: &[Complex64],
    n: u64,
    u_index: usize,
    delta_z: f64,
) -> Result<FrequencyDistribution> {
    let fine = frequency_operator_density(psi, n, u_index)?;
    let rho_u = fine.params().rho_u;
    let spec = HistogramSpec::new(rho_u, delta_z)?;
    let mut per_interval: Vec<Vec<f64>> = vec![Vec::new(); spec.intervals().len()];
    for (&z, &mass) in fine.support().iter().zip(fine.density()) {
        per_interval[spec.interval_index(z)].push(mass);
    }
    let density: Vec<f64> = per_interval
        .iter_mut()
        .map(|bucket| compensated_descending_sum(bucket))
        .collect();
    let support: Vec<f64> = spec.intervals().iter().map(|iv| iv.z_center).collect();
    Ok(FrequencyDistribution::new(
        DistributionKind::BarGraph,
        support,
        density,
        DistributionParams {
            n,
            rho_u,
            delta_z: Some(delta_z),
        },
    ))
}

/// Coarse eigenvalue of one explicit product basis state: the midpoint z_k
/// of the interval containing its target frequency m/N.
pub fn coarse_eigenvalue(spec: &HistogramSpec, n: u64, m: u64) -> f64 {
    let z = m as f64 / n as f64;
    spec.intervals()[spec.interval_index(z)].z_center
}

/// Hartle variance (Δ_N F_N)² = ρ_u ρ_¬u / N via the combinatorial identity.
pub fn hartle_variance(psi: &[Complex64], n: u64, u_index: usize) -> Result<f64> {
    let rho_u = target_weight(psi, u_index)?;
    if n == 0 {
        return Err(Error::Contract("N must be positive".into()));
    }
    Ok(rho_u * (1.0 - rho_u) / n as f64)
}

/// Hartle variance evaluated on the explicit tensor state:
/// `⟨ψ|^N (F_N − ρ_u)² |ψ⟩^N`.
pub fn hartle_variance_explicit(psi: &[Complex64], n: u64, u_index: usize) -> Result<f64> {
    let rho_u = target_weight(psi, u_index)?;
    let mut masses = explicit_count_masses(psi, n, u_index)?;
    let mut terms: Vec<f64> = masses
        .iter_mut()
        .enumerate()
        .map(|(m, bucket)| {
            let dev = m as f64 / n as f64 - rho_u;
            compensated_descending_sum(bucket) * dev * dev
        })
        .collect();
    Ok(compensated_descending_sum(&mut terms))
}
