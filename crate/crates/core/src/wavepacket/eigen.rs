//! Eigenstates of the finite-difference Hamiltonian.
//!
//! The discrete H is a real symmetric tridiagonal matrix. Individual
//! eigenvalues come from Sturm-sequence bisection, the matching vectors from
//! shifted inverse iteration — O(n) per solve, so fine grids cost nothing
//! compared to dense diagonalization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wavepacket::grid::GridState;

/// Tridiagonal H of a grid state: (diagonal, off-diagonal) in grid units.
fn hamiltonian(state: &GridState) -> (Vec<f64>, f64) {
    let kinetic = state.hbar() * state.hbar() / (2.0 * state.mass() * state.dx() * state.dx());
    let diag = state
        .potential()
        .iter()
        .map(|&v| 2.0 * kinetic + v)
        .collect();
    (diag, -kinetic)
}

/// Number of eigenvalues of tridiag(off, diag, off) strictly below λ.
fn sturm_count(diag: &[f64], off: f64, lambda: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    let off2 = off * off;
    for &d in &diag[1..] {
        if q == 0.0 {
            q = 1e-300;
        }
        q = d - lambda - off2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The k-th (ascending, k = 0 is the ground state) eigenvalue by bisection.
fn eigenvalue_by_bisection(diag: &[f64], off: f64, k: usize) -> f64 {
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let n = diag.len();
    for (i, &d) in diag.iter().enumerate() {
        let radius = off.abs() * if i == 0 || i + 1 == n { 1.0 } else { 2.0 };
        lo = lo.min(d - radius);
        hi = hi.max(d + radius);
    }
    let scale = hi.abs().max(lo.abs()).max(1.0);
    while hi - lo > 1e-14 * scale {
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse iteration at shift σ; returns the normalized (in Σv²·dx) vector.
fn inverse_iteration(diag: &[f64], off: f64, sigma: f64, dx: f64) -> Vec<f64> {
    let n = diag.len();
    // deterministic start with broken symmetry so no eigenvector is missed
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.3 * ((i * 2654435761) % 97) as f64 / 97.0)
        .collect();
    normalize(&mut v, dx);

    let shifted: Vec<f64> = diag.iter().map(|d| d - sigma).collect();
    let mut w = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for _ in 0..50 {
        solve_real_tridiagonal(&shifted, off, &v, &mut w, &mut c, &mut d);
        normalize(&mut w, dx);
        std::mem::swap(&mut v, &mut w);
        // residual ‖(T − σ)v‖ relative to the Gershgorin scale
        let mut res = 0.0f64;
        for i in 0..n {
            let left = if i == 0 { 0.0 } else { v[i - 1] };
            let right = if i + 1 == n { 0.0 } else { v[i + 1] };
            res = res.max((shifted[i] * v[i] + off * (left + right)).abs());
        }
        if res < 1e-11 {
            break;
        }
    }
    // fix the overall sign so results are reproducible: first sizable entry > 0
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
        if *first < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
    v
}

fn normalize(v: &mut [f64], dx: f64) {
    let norm = (v.iter().map(|x| x * x).sum::<f64>() * dx).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

fn solve_real_tridiagonal(
    diag: &[f64],
    off: f64,
    rhs: &[f64],
    out: &mut [f64],
    scratch_c: &mut [f64],
    scratch_d: &mut [f64],
) {
    let n = rhs.len();
    let guard = |x: f64| if x.abs() < 1e-300 { 1e-300 } else { x };
    let b0 = guard(diag[0]);
    scratch_c[0] = off / b0;
    scratch_d[0] = rhs[0] / b0;
    for i in 1..n {
        let denom = guard(diag[i] - off * scratch_c[i - 1]);
        scratch_c[i] = off / denom;
        scratch_d[i] = (rhs[i] - off * scratch_d[i - 1]) / denom;
    }
    out[n - 1] = scratch_d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = scratch_d[i] - scratch_c[i] * out[i + 1];
    }
}

/// The k-th stationary state of the template's potential, with its energy.
///
/// The template supplies grid, mass, ħ, and potential; its amplitudes are
/// ignored.
pub fn stationary_state(template: &GridState, k: usize) -> Result<(GridState, f64)> {
    if k >= template.n_points() {
        return Err(Error::InvalidArgument(format!(
            "excitation index {k} needs more than {} grid points",
            template.n_points()
        )));
    }
    let (diag, off) = hamiltonian(template);
    let shift = eigenvalue_by_bisection(&diag, off, k);
    let v = inverse_iteration(&diag, off, shift, template.dx());
    let amplitudes: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let state = template.with_amplitudes(amplitudes);
    // the bisection value carries ~1e-14·‖H‖ of noise, which the 1/dx²
    // kinetic scale turns into too much; the Rayleigh quotient of the
    // converged vector is quadratically closer
    let energy = energy_expectation(&state);
    Ok((state, energy))
}

/// Rayleigh quotient ⟨ψ|H|ψ⟩ of a normalized grid state.
pub fn energy_expectation(state: &GridState) -> f64 {
    let (diag, off) = hamiltonian(state);
    let psi = state.amplitudes();
    let n = psi.len();
    let mut total = 0.0;
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
        total += (psi[i].conj() * (diag[i] * psi[i] + off * (left + right))).re;
    }
    total * state.dx()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic_template(n: usize, half_width: f64) -> GridState {
        GridState::gaussian(-half_width, half_width, n, 0.0, 1.0, 0.0, 1.0, |x| {
            0.5 * x * x
        })
        .unwrap()
    }

    #[test]
    fn harmonic_spectrum_matches_k_plus_half() {
        let template = harmonic_template(2048, 10.0);
        for k in 0..4 {
            let (_, energy) = stationary_state(&template, k).unwrap();
            let expect = k as f64 + 0.5;
            assert!(
                (energy - expect).abs() < 1e-4,
                "E_{k} = {energy}, expected ≈ {expect}"
            );
        }
    }

    #[test]
    fn ground_state_matches_analytic_gaussian() {
        let template = harmonic_template(2048, 10.0);
        let (ground, energy) = stationary_state(&template, 0).unwrap();
        // |⟨x²⟩ − 1/(2mω)| small and Rayleigh quotient consistent
        assert!((ground.position_variance() - 0.5).abs() < 1e-5);
        assert!((energy_expectation(&ground) - energy).abs() < 1e-9);
    }

    #[test]
    fn first_excited_state_is_odd_with_a_node() {
        let template = harmonic_template(2048, 10.0);
        let (state, _) = stationary_state(&template, 1).unwrap();
        let n = state.n_points();
        let amps = state.amplitudes();
        // odd parity: ψ(x) = −ψ(−x) on the mirror-symmetric grid
        for i in 0..n / 2 {
            let a = amps[i].re;
            let b = amps[n - 1 - i].re;
            assert!((a + b).abs() < 1e-7, "parity broken at {i}: {a} vs {b}");
        }
    }

    #[test]
    fn eigenstate_density_is_stationary_under_propagation() {
        let template = harmonic_template(1024, 10.0);
        let (ground, _) = stationary_state(&template, 0).unwrap();
        let out = crate::wavepacket::propagate(&ground, 1e-3, 1000).unwrap();
        let drift: f64 = ground
            .density()
            .iter()
            .zip(out.density())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(drift <= 1e-8, "density drifted by {drift:e}");
    }
}
