//! Crank–Nicolson time stepping between hard walls.
//!
//! One step solves `(1 + i·dt·H/2ħ) ψⁿ⁺¹ = (1 − i·dt·H/2ħ) ψⁿ` with the
//! three-point Laplacian and Dirichlet walls. The step operator is a Cayley
//! transform of the hermitian H, hence unitary in exact arithmetic: norm is
//! preserved by construction at any dt, not by step-size luck. Explicit
//! schemes are excluded for exactly that reason.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wavepacket::grid::GridState;

/// Per-step norm drift that the scheme must stay under.
pub const STEP_DRIFT_LIMIT: f64 = 1e-12;

/// Cumulative norm drift at which propagation aborts with diagnostics.
pub const TOTAL_DRIFT_LIMIT: f64 = 1e-8;

/// Propagates `steps` Crank–Nicolson steps of size `dt`.
///
/// Aborts with diagnostics if any single step drifts the norm by more than
/// 1e-12 or the cumulative drift exceeds 1e-8.
pub fn propagate(state: &GridState, dt: f64, steps: usize) -> Result<GridState> {
    if dt <= 0.0 {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    let n = state.n_points();
    let dx = state.dx();
    let hbar = state.hbar();
    let kinetic = hbar * hbar / (2.0 * state.mass() * dx * dx);

    // H = tridiag(−t_k, 2t_k + V_i, −t_k); the Cayley factor i·dt/2ħ
    let factor = Complex64::new(0.0, dt / (2.0 * hbar));
    let off = factor * (-kinetic);
    let diag: Vec<Complex64> = state
        .potential()
        .iter()
        .map(|&v| factor * (2.0 * kinetic + v))
        .collect();

    let mut psi: Vec<Complex64> = state.amplitudes().to_vec();
    let mut rhs = vec![Complex64::default(); n];
    let mut scratch_c = vec![Complex64::default(); n];
    let mut scratch_d = vec![Complex64::default(); n];

    let mut last_norm = norm_sqr(&psi, dx);
    let initial_norm = last_norm;

    for step in 1..=steps {
        // rhs = (1 − i·dt·H/2ħ)·ψ
        for i in 0..n {
            let left = if i == 0 {
                Complex64::default()
            } else {
                psi[i - 1]
            };
            let right = if i + 1 == n {
                Complex64::default()
            } else {
                psi[i + 1]
            };
            rhs[i] = (Complex64::new(1.0, 0.0) - diag[i]) * psi[i] - off * (left + right);
        }
        solve_tridiagonal(&diag, off, &rhs, &mut psi, &mut scratch_c, &mut scratch_d);

        let norm = norm_sqr(&psi, dx);
        let step_drift = (norm.sqrt() - last_norm.sqrt()).abs();
        let total_drift = (norm.sqrt() - initial_norm.sqrt()).abs();
        if step_drift > STEP_DRIFT_LIMIT || total_drift > TOTAL_DRIFT_LIMIT {
            return Err(Error::NormDrift {
                drift: step_drift.max(total_drift),
                limit: if step_drift > STEP_DRIFT_LIMIT {
                    STEP_DRIFT_LIMIT
                } else {
                    TOTAL_DRIFT_LIMIT
                },
                step,
                dt,
                n_points: n,
            });
        }
        last_norm = norm;
    }

    Ok(state.with_amplitudes(psi))
}

fn norm_sqr(psi: &[Complex64], dx: f64) -> f64 {
    psi.iter().map(|a| a.norm_sqr()).sum::<f64>() * dx
}

/// Thomas solve of (1 + diag_i) x_i + off·(x_{i−1} + x_{i+1}) = rhs_i.
///
/// The matrix is strictly diagonally dominant in modulus for the Cayley
/// coefficients, so no pivoting is needed.
fn solve_tridiagonal(
    diag: &[Complex64],
    off: Complex64,
    rhs: &[Complex64],
    out: &mut [Complex64],
    scratch_c: &mut [Complex64],
    scratch_d: &mut [Complex64],
) {
    let n = rhs.len();
    let b0 = Complex64::new(1.0, 0.0) + diag[0];
    scratch_c[0] = off / b0;
    scratch_d[0] = rhs[0] / b0;
    for i in 1..n {
        let b = Complex64::new(1.0, 0.0) + diag[i];
        let denom = b - off * scratch_c[i - 1];
        scratch_c[i] = off / denom;
        scratch_d[i] = (rhs[i] - off * scratch_d[i - 1]) / denom;
    }
    out[n - 1] = scratch_d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = scratch_d[i] - scratch_c[i] * out[i + 1];
    }
}
