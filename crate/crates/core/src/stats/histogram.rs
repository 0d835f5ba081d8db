//! Coarse-graining of the count density onto frequency intervals, and the
//! concentration bound that drives the large-N argument.
//!
//! The unit interval is covered by half-open intervals
//! `I_k = [0,1] ∩ [z_k − Δz/2, z_k + Δz/2)` with `z_k = ρ_u + kΔz`, k running
//! over the minimal integer set that covers [0,1]. The top interval is closed
//! at 1 so the frequency z = 1 has a home. ρ̃(k) sums the exact count density
//! over the m with m/N in I_k.

use crate::error::{Error, Result};

use super::binomial::{check_rho, exact_count_density};
use super::distribution::{DistributionKind, DistributionParams, FrequencyDistribution};
use super::log_factorial::compensated_descending_sum;

/// One covering interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    /// Integer offset k from the ρ_u-centered interval.
    pub k: i64,
    /// Midpoint z_k = ρ_u + kΔz of the unclipped interval.
    pub z_center: f64,
    /// Lower edge after clipping to \[0,1\]; always contained.
    pub lo: f64,
    /// Upper edge after clipping; contained only for the top interval.
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The interval covering {I_k} for one (ρ_u, Δz) pair.
#[derive(Debug, Clone)]
pub struct HistogramSpec {
    rho_u: f64,
    delta_z: f64,
    k_min: i64,
    intervals: Vec<Interval>,
}

impl HistogramSpec {
    pub fn new(rho_u: f64, delta_z: f64) -> Result<Self> {
        check_rho(rho_u)?;
        if !(delta_z > 0.0 && delta_z < 1.0) {
            return Err(Error::Contract(format!(
                "delta_z must lie strictly inside (0,1), got {delta_z}"
            )));
        }
        // lowest k whose interval reaches 0, highest whose interval reaches 1
        let k_min = ((0.0 - rho_u) / delta_z + 0.5).floor() as i64;
        let mut k_max = ((1.0 - rho_u) / delta_z - 0.5).ceil() as i64;
        // guard against an upper edge that lands exactly on 1 − Δz·ε rounding
        while rho_u + (k_max as f64 + 0.5) * delta_z < 1.0 {
            k_max += 1;
        }
        let intervals: Vec<Interval> = (k_min..=k_max)
            .map(|k| {
                let z_center = rho_u + k as f64 * delta_z;
                Interval {
                    k,
                    z_center,
                    lo: (z_center - delta_z / 2.0).max(0.0),
                    hi: (z_center + delta_z / 2.0).min(1.0),
                }
            })
            .collect();
        Ok(Self {
            rho_u,
            delta_z,
            k_min,
            intervals,
        })
    }

    pub fn rho_u(&self) -> f64 {
        self.rho_u
    }

    pub fn delta_z(&self) -> f64 {
        self.delta_z
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Index (into `intervals`) of the interval containing z ∈ \[0,1\].
    pub fn interval_index(&self, z: f64) -> usize {
        let k = ((z - self.rho_u) / self.delta_z + 0.5).floor() as i64;
        let idx = k - self.k_min;
        // z = 1 on an exact boundary belongs to the closed top interval
        idx.clamp(0, self.intervals.len() as i64 - 1) as usize
    }

    /// Position of k = 0 (the interval centered on ρ_u) in `intervals`.
    pub fn center_index(&self) -> usize {
        (-self.k_min) as usize
    }
}

/// Bar-graph and histogram views of one coarse-grained density.
#[derive(Debug, Clone)]
pub struct CoarseHistogram {
    pub spec: HistogramSpec,
    /// ρ̃(k) as masses at the midpoints z_k.
    pub bar: FrequencyDistribution,
    /// ρ̃(k)/width as a piecewise-constant density, reported at z_k.
    pub histogram: FrequencyDistribution,
}

impl CoarseHistogram {
    /// ρ̃(0): the coarse mass of the interval centered on ρ_u.
    pub fn center_mass(&self) -> f64 {
        self.bar.density()[self.spec.center_index()]
    }

    /// Piecewise-constant histogram value at z.
    pub fn histogram_at(&self, z: f64) -> f64 {
        self.histogram.density()[self.spec.interval_index(z)]
    }
}

/// Sums the exact count density into the covering intervals.
///
/// Interior intervals have width Δz, so ρ̃(k)/width is the paper's ρ̃(k)/Δz
/// there; the clipped edge intervals divide by their true width, which keeps
/// value × width summing to one.
pub fn coarse_histogram(n: u64, rho_u: f64, delta_z: f64) -> Result<CoarseHistogram> {
    let spec = HistogramSpec::new(rho_u, delta_z)?;
    let exact = exact_count_density(n, rho_u)?;
    let mut masses = vec![Vec::new(); spec.intervals.len()];
    for m in 0..=n {
        let z = m as f64 / n as f64;
        masses[spec.interval_index(z)].push(exact.density()[m as usize]);
    }
    let rho_tilde: Vec<f64> = masses
        .iter_mut()
        .map(|bucket| compensated_descending_sum(bucket))
        .collect();

    let support: Vec<f64> = spec.intervals.iter().map(|iv| iv.z_center).collect();
    let params = DistributionParams {
        n,
        rho_u,
        delta_z: Some(delta_z),
    };
    let bar = FrequencyDistribution::new(
        DistributionKind::BarGraph,
        support.clone(),
        rho_tilde.clone(),
        params,
    );
    let hist_density: Vec<f64> = rho_tilde
        .iter()
        .zip(&spec.intervals)
        .map(|(&mass, iv)| mass / iv.width())
        .collect();
    let histogram =
        FrequencyDistribution::new(DistributionKind::Histogram, support, hist_density, params);
    Ok(CoarseHistogram {
        spec,
        bar,
        histogram,
    })
}

/// Tail mass versus the Chebyshev bound 4ρρ̄/(Δz²N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevCheck {
    /// Σ of ρ(m:N|u) over |m/N − ρ_u| > Δz/2.
    pub tail_mass: f64,
    /// 4 ρ_u ρ_¬u / (Δz² N).
    pub bound: f64,
    pub holds: bool,
}

/// Evaluates the concentration inequality for one parameter point.
pub fn chebyshev_bound_check(n: u64, rho_u: f64, delta_z: f64) -> Result<ChebyshevCheck> {
    let exact = exact_count_density(n, rho_u)?;
    let mut tail_terms: Vec<f64> = (0..=n)
        .filter(|&m| (m as f64 / n as f64 - rho_u).abs() > delta_z / 2.0)
        .map(|m| exact.density()[m as usize])
        .collect();
    let tail_mass = compensated_descending_sum(&mut tail_terms);
    let bound = 4.0 * rho_u * (1.0 - rho_u) / (delta_z * delta_z * n as f64);
    Ok(ChebyshevCheck {
        tail_mass,
        bound,
        holds: tail_mass <= bound,
    })
}
