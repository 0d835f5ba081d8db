//! Exact and asymptotic branch statistics for repeated measurements.
//!
//! The chain runs: exact count density → Gaussian approximations → interval
//! coarse-graining → frequency operator (two independent routes) → Chebyshev
//! concentration → estimator folding. All functions are pure; sweeps can be
//! evaluated concurrently and merged by key.

mod binomial;
mod distribution;
mod estimator;
mod frequency_op;
mod histogram;
mod log_factorial;

pub use binomial::{
    count_density_term, exact_count_density, gaussian_count_at, gaussian_count_density,
    relative_frequency_at, relative_frequency_density, GAUSSIAN_GUARD, MAX_EXACT_N,
};
pub use distribution::{format_g17, DistributionKind, DistributionParams, FrequencyDistribution};
pub use estimator::{estimator_distribution, mass_within, Prior, ESTIMATOR_GRID_POINTS};
pub use frequency_op::{
    coarse_eigenvalue, coarse_frequency_operator_density, frequency_operator_density,
    frequency_operator_density_explicit, hartle_variance, hartle_variance_explicit, MAX_EXPLICIT_N,
};
pub use histogram::{
    chebyshev_bound_check, coarse_histogram, ChebyshevCheck, CoarseHistogram, HistogramSpec,
    Interval,
};
pub use log_factorial::{compensated_descending_sum, ln_binomial, ln_factorial};
