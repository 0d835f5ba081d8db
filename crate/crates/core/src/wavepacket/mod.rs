//! 1-D continuum states on a grid, with the propagation and density checks.
//!
//! Propagation is sequential per run; independent runs are free to proceed
//! concurrently.

mod checks;
mod eigen;
mod grid;
mod propagate;

pub use checks::{
    continuity_residual, ehrenfest_check, nodal_exclusion, perturbation_energy, EhrenfestReport,
};
pub use eigen::{energy_expectation, stationary_state};
pub use grid::{
    single_particle_marginal, GridState, TwoParticleGridState, TWO_PARTICLE_MAX_POINTS,
};
pub use propagate::{propagate, STEP_DRIFT_LIMIT, TOTAL_DRIFT_LIMIT};
