//! The density-interpretation checks: continuity, first-order perturbation,
//! Ehrenfest trajectories, and nodal exclusion.

use crate::error::{Error, Result};
use crate::wavepacket::grid::GridState;
use crate::wavepacket::propagate::propagate;

/// Max-norm residual of `∂_t ρ + ∂_x j = 0` between two snapshots dt apart.
///
/// ∂_t ρ is the centered difference of the densities; j is evaluated from
/// both snapshots and averaged, with central differences in x. The residual
/// of a propagated pair is O(dx² + dt²).
pub fn continuity_residual(before: &GridState, after: &GridState, dt: f64) -> Result<f64> {
    if before.n_points() != after.n_points() {
        return Err(Error::ShapeMismatch("snapshot grids differ".into()));
    }
    if dt <= 0.0 {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    let n = before.n_points();
    let dx = before.dx();
    let rho_b = before.density();
    let rho_a = after.density();
    let j_b = before.current();
    let j_a = after.current();

    let mut max_residual = 0.0f64;
    for i in 1..n - 1 {
        let drho_dt = (rho_a[i] - rho_b[i]) / dt;
        let dj_dx = (j_b[i + 1] + j_a[i + 1] - j_b[i - 1] - j_a[i - 1]) / (4.0 * dx);
        max_residual = max_residual.max((drho_dt + dj_dx).abs());
    }
    Ok(max_residual)
}

/// First-order energy shift `ΔE = Σ ρ(x_i)·U(x_i)·dx` of a perturbation
/// sampled on the grid.
pub fn perturbation_energy(state: &GridState, u_pert: &[f64]) -> Result<f64> {
    if u_pert.len() != state.n_points() {
        return Err(Error::ShapeMismatch(format!(
            "perturbation length {} does not match {} grid points",
            u_pert.len(),
            state.n_points()
        )));
    }
    Ok(state
        .density()
        .iter()
        .zip(u_pert)
        .map(|(rho, u)| rho * u)
        .sum::<f64>()
        * state.dx())
}

/// Result of the Ehrenfest trajectory comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhrenfestReport {
    /// max_t |⟨x⟩(t) − (x₀ + v₀t + F t²/2m)|
    pub max_deviation: f64,
    pub x0: f64,
    pub v0: f64,
    pub steps: usize,
    pub dt: f64,
}

/// Propagates the packet in the linear potential V = −F·x and compares
/// ⟨x⟩(t) against the Newton trajectory x₀ + v₀t + F t²/(2m).
///
/// The packet's own potential is replaced by the linear one, so the theorem
/// is exact up to discretization. v₀ comes from ⟨p⟩/m of the initial state.
pub fn ehrenfest_check(
    state: &GridState,
    force_const: f64,
    t_max: f64,
    steps: usize,
) -> Result<EhrenfestReport> {
    if t_max <= 0.0 || steps == 0 {
        return Err(Error::InvalidArgument(
            "t_max and steps must be positive".into(),
        ));
    }
    let linear: Vec<f64> = state.xs().iter().map(|&x| -force_const * x).collect();
    let mut current = state.with_potential(linear);
    current.normalize()?;

    let dt = t_max / steps as f64;
    let x0 = current.mean_position();
    let v0 = current.mean_momentum() / current.mass();
    let half_accel = force_const / (2.0 * current.mass());

    let mut max_deviation = 0.0f64;
    // compare at every checkpoint, a handful of steps apart
    let checkpoint = (steps / 64).max(1);
    let mut done = 0usize;
    while done < steps {
        let batch = checkpoint.min(steps - done);
        current = propagate(&current, dt, batch)?;
        done += batch;
        let t = dt * done as f64;
        let newton = x0 + v0 * t + half_accel * t * t;
        max_deviation = max_deviation.max((current.mean_position() - newton).abs());
    }

    Ok(EhrenfestReport {
        max_deviation,
        x0,
        v0,
        steps,
        dt,
    })
}

/// Total density mass in cells where ρ < threshold: particles are not at
/// positions where the density vanishes.
pub fn nodal_exclusion(state: &GridState, threshold: f64) -> f64 {
    state
        .density()
        .iter()
        .filter(|&&rho| rho < threshold)
        .sum::<f64>()
        * state.dx()
}
