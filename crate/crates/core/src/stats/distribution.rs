//! Distribution container shared by the exact, asymptotic, and coarse views.

use std::fmt::Write as _;

/// What a [`FrequencyDistribution`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    /// Exact branch density over counts m.
    ExactCount,
    /// Gaussian approximation over counts m.
    GaussianCount,
    /// Gaussian density over the relative frequency z.
    GaussianFrequency,
    /// Coarse density ρ̃(k)/width on the intervals I_k, piecewise constant.
    Histogram,
    /// Coarse masses ρ̃(k) placed at the interval midpoints z_k.
    BarGraph,
    /// Branch-weight mixture of frequency posteriors over P_u.
    Estimator,
}

impl DistributionKind {
    pub fn name(self) -> &'static str {
        match self {
            DistributionKind::ExactCount => "exact_count",
            DistributionKind::GaussianCount => "gaussian_count",
            DistributionKind::GaussianFrequency => "gaussian_frequency",
            DistributionKind::Histogram => "histogram",
            DistributionKind::BarGraph => "bar_graph",
            DistributionKind::Estimator => "estimator",
        }
    }
}

/// Parameters a distribution was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionParams {
    pub n: u64,
    pub rho_u: f64,
    pub delta_z: Option<f64>,
}

/// Density values over a stated support.
///
/// Discrete kinds carry masses (summing to one); continuous kinds carry a
/// sampled density (integrating to one over the support by quadrature).
#[derive(Debug, Clone)]
pub struct FrequencyDistribution {
    kind: DistributionKind,
    support: Vec<f64>,
    density: Vec<f64>,
    params: DistributionParams,
    guard_warning: bool,
}

impl FrequencyDistribution {
    pub(crate) fn new(
        kind: DistributionKind,
        support: Vec<f64>,
        density: Vec<f64>,
        params: DistributionParams,
    ) -> Self {
        debug_assert_eq!(support.len(), density.len());
        Self {
            kind,
            support,
            density,
            params,
            guard_warning: false,
        }
    }

    pub(crate) fn with_guard_warning(mut self, warn: bool) -> Self {
        self.guard_warning = warn;
        self
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn params(&self) -> DistributionParams {
        self.params
    }

    /// True when a validity guard (e.g. Nρρ̄ ≥ 9 for the Gaussian forms) failed.
    pub fn guard_warning(&self) -> bool {
        self.guard_warning
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Sum of the density values, largest first with compensation.
    pub fn mass(&self) -> f64 {
        let mut terms = self.density.clone();
        super::log_factorial::compensated_descending_sum(&mut terms)
    }

    /// Support point carrying the largest density.
    pub fn argmax(&self) -> f64 {
        let mut best = 0;
        for i in 1..self.density.len() {
            if self.density[i] > self.density[best] {
                best = i;
            }
        }
        self.support[best]
    }

    /// Trapezoid integral of the sampled density over its support.
    pub fn trapezoid_mass(&self) -> f64 {
        let mut total = 0.0;
        for i in 1..self.support.len() {
            total += 0.5
                * (self.density[i] + self.density[i - 1])
                * (self.support[i] - self.support[i - 1]);
        }
        total
    }

    /// Trapezoid mean ∫ x·ρ(x) dx over the support.
    pub fn trapezoid_mean(&self) -> f64 {
        let mut total = 0.0;
        for i in 1..self.support.len() {
            let f0 = self.support[i - 1] * self.density[i - 1];
            let f1 = self.support[i] * self.density[i];
            total += 0.5 * (f0 + f1) * (self.support[i] - self.support[i - 1]);
        }
        total
    }

    /// CSV form: a parameter header block, then (support_value, density) rows.
    /// Values carry 17 significant digits so round-trips are bit-stable.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("kind,N,rho_u,delta_z\n");
        let delta = match self.params.delta_z {
            Some(d) => format_g17(d),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            self.kind.name(),
            self.params.n,
            format_g17(self.params.rho_u),
            delta
        );
        out.push_str("support_value,density\n");
        for (s, d) in self.support.iter().zip(&self.density) {
            let _ = writeln!(out, "{},{}", format_g17(*s), format_g17(*d));
        }
        out
    }
}

/// 17 significant digits, enough to reproduce any f64 exactly.
pub fn format_g17(x: f64) -> String {
    format!("{x:.16e}")
}
