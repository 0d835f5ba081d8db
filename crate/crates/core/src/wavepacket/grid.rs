//! Discretized 1-D states between hard walls.
//!
//! The walls sit at x_min and x_max where ψ vanishes; only the n_points
//! interior values are stored, at x_i = x_min + (i+1)·dx with
//! dx = (x_max − x_min)/(n_points + 1). Quadrature is the plain Riemann sum
//! Σ f(x_i)·dx, consistent with the norm convention Σ|ψ|²·dx = 1.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stats::format_g17;

/// One particle on a grid with mass, potential, and ħ.
#[derive(Debug, Clone)]
pub struct GridState {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    dx: f64,
    amplitudes: Vec<Complex64>,
    mass: f64,
    hbar: f64,
    potential: Vec<f64>,
}

impl GridState {
    /// Builds and normalizes a grid state; ħ = m = 1 unless stated otherwise.
    pub fn new(
        x_min: f64,
        x_max: f64,
        amplitudes: Vec<Complex64>,
        mass: f64,
        hbar: f64,
        potential: Vec<f64>,
    ) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(Error::InvalidArgument("x_max must exceed x_min".into()));
        }
        if mass <= 0.0 || hbar <= 0.0 {
            return Err(Error::InvalidArgument("mass and ħ must be positive".into()));
        }
        let n_points = amplitudes.len();
        if n_points < 3 {
            return Err(Error::InvalidArgument("need at least 3 grid points".into()));
        }
        if potential.len() != n_points {
            return Err(Error::ShapeMismatch(format!(
                "potential length {} does not match {} grid points",
                potential.len(),
                n_points
            )));
        }
        let dx = (x_max - x_min) / (n_points + 1) as f64;
        let mut state = Self {
            x_min,
            x_max,
            n_points,
            dx,
            amplitudes,
            mass,
            hbar,
            potential,
        };
        state.normalize()?;
        Ok(state)
    }

    /// Gaussian packet `exp(−(x−x₀)²/(4σ²) + ik₀x)` on the given potential.
    #[allow(clippy::too_many_arguments)]
    pub fn gaussian(
        x_min: f64,
        x_max: f64,
        n_points: usize,
        center: f64,
        sigma: f64,
        k0: f64,
        mass: f64,
        potential: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let dx = (x_max - x_min) / (n_points + 1) as f64;
        let xs: Vec<f64> = (0..n_points).map(|i| x_min + (i + 1) as f64 * dx).collect();
        let amplitudes = xs
            .iter()
            .map(|&x| {
                let envelope = (-(x - center).powi(2) / (4.0 * sigma * sigma)).exp();
                Complex64::from_polar(envelope, k0 * x)
            })
            .collect();
        let pot = xs.iter().map(|&x| potential(x)).collect();
        Self::new(x_min, x_max, amplitudes, mass, 1.0, pot)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Interior grid coordinate x_i.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Density ρ(x_i) = |ψ(x_i)|².
    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Σ|ψ|²·dx
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dx
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        for a in &mut self.amplitudes {
            *a *= inv;
        }
        Ok(())
    }

    /// First moment ⟨x⟩ = Σ x·ρ·dx.
    pub fn mean_position(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| self.x(i) * a.norm_sqr())
            .sum::<f64>()
            * self.dx
    }

    /// Variance ⟨x²⟩ − ⟨x⟩².
    pub fn position_variance(&self) -> f64 {
        let mean = self.mean_position();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| (self.x(i) - mean).powi(2) * a.norm_sqr())
            .sum::<f64>()
            * self.dx
    }

    /// ⟨p⟩ = Σ ψ*·(−iħ ∂ψ/∂x)·dx with central differences and wall values 0.
    pub fn mean_momentum(&self) -> f64 {
        let n = self.n_points;
        let mut total = 0.0;
        for i in 0..n {
            let left = if i == 0 {
                Complex64::default()
            } else {
                self.amplitudes[i - 1]
            };
            let right = if i + 1 == n {
                Complex64::default()
            } else {
                self.amplitudes[i + 1]
            };
            let dpsi = (right - left) / (2.0 * self.dx);
            total += (self.amplitudes[i].conj() * dpsi).im;
        }
        self.hbar * total * self.dx
    }

    /// Probability current j = (ħ/m)·Im(ψ* ∂ψ/∂x), central differences.
    pub fn current(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|i| {
                let left = if i == 0 {
                    Complex64::default()
                } else {
                    self.amplitudes[i - 1]
                };
                let right = if i + 1 == n {
                    Complex64::default()
                } else {
                    self.amplitudes[i + 1]
                };
                let dpsi = (right - left) / (2.0 * self.dx);
                self.hbar / self.mass * (self.amplitudes[i].conj() * dpsi).im
            })
            .collect()
    }

    /// Density mass in the two outermost cells at each wall; preconditions
    /// keep packets far enough from the walls that this stays negligible.
    pub fn edge_mass(&self) -> f64 {
        let n = self.n_points;
        let picks = [0, 1, n - 2, n - 1];
        picks
            .iter()
            .map(|&i| self.amplitudes[i].norm_sqr())
            .sum::<f64>()
            * self.dx
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.n_points);
        Self {
            amplitudes,
            potential: self.potential.clone(),
            ..*self
        }
    }

    pub(crate) fn with_potential(&self, potential: Vec<f64>) -> Self {
        debug_assert_eq!(potential.len(), self.n_points);
        Self {
            amplitudes: self.amplitudes.clone(),
            potential,
            ..*self
        }
    }

    /// CSV rows (x, Re ψ, Im ψ, ρ) with a header, 17 significant digits.
    pub fn snapshot_csv(&self) -> String {
        let mut out = String::from("x,re_psi,im_psi,rho\n");
        for (i, a) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format_g17(self.x(i)),
                format_g17(a.re),
                format_g17(a.im),
                format_g17(a.norm_sqr())
            );
        }
        out
    }
}

/// Two identical particles on a shared grid; amplitudes indexed (x₁, x₂)
/// row-major.
#[derive(Debug, Clone)]
pub struct TwoParticleGridState {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    dx: f64,
    amplitudes: Vec<Complex64>,
}

/// Two-particle grids stay small; the marginal only needs to be demonstrative.
pub const TWO_PARTICLE_MAX_POINTS: usize = 256;

impl TwoParticleGridState {
    pub fn new(
        x_min: f64,
        x_max: f64,
        n_points: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if n_points > TWO_PARTICLE_MAX_POINTS {
            return Err(Error::Capacity {
                requested: n_points,
                cap: TWO_PARTICLE_MAX_POINTS,
            });
        }
        if amplitudes.len() != n_points * n_points {
            return Err(Error::ShapeMismatch(format!(
                "need {}² amplitudes, got {}",
                n_points,
                amplitudes.len()
            )));
        }
        let dx = (x_max - x_min) / (n_points + 1) as f64;
        let mut state = Self {
            x_min,
            x_max,
            n_points,
            dx,
            amplitudes,
        };
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        for a in &mut state.amplitudes {
            *a /= norm;
        }
        Ok(state)
    }

    /// Product state φ(x₁)·φ(x₂) from a single-particle state.
    pub fn product(phi: &GridState) -> Result<Self> {
        let n = phi.n_points();
        let mut amps = Vec::with_capacity(n * n);
        for a in phi.amplitudes() {
            for b in phi.amplitudes() {
                amps.push(a * b);
            }
        }
        Self::new(phi.x_min(), phi.x_max(), n, amps)
    }

    /// Symmetrized two-mode state (φ_a(x₁)φ_b(x₂) + φ_b(x₁)φ_a(x₂))/√2·….
    pub fn symmetrized(phi_a: &GridState, phi_b: &GridState) -> Result<Self> {
        if phi_a.n_points() != phi_b.n_points() {
            return Err(Error::ShapeMismatch("grids differ".into()));
        }
        let n = phi_a.n_points();
        let (a, b) = (phi_a.amplitudes(), phi_b.amplitudes());
        let mut amps = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                amps.push(a[i] * b[j] + b[i] * a[j]);
            }
        }
        Self::new(phi_a.x_min(), phi_a.x_max(), n, amps)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.dx
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ΣΣ|Ψ|²·dx²
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dx * self.dx
    }

    /// Swaps the particle coordinates: Ψ(x₂, x₁).
    pub fn transposed(&self) -> Self {
        let n = self.n_points;
        let mut amps = vec![Complex64::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                amps[j * n + i] = self.amplitudes[i * n + j];
            }
        }
        Self {
            x_min: self.x_min,
            x_max: self.x_max,
            n_points: self.n_points,
            dx: self.dx,
            amplitudes: amps,
        }
    }
}

/// Single-particle density of two identical particles:
/// `ρ(x) = 2·Σ_{x₂} |Ψ(x, x₂)|²·dx`. Integrates to the particle number 2.
pub fn single_particle_marginal(state: &TwoParticleGridState) -> Vec<f64> {
    let n = state.n_points();
    (0..n)
        .map(|i| {
            2.0 * state.amplitudes()[i * n..(i + 1) * n]
                .iter()
                .map(|a| a.norm_sqr())
                .sum::<f64>()
                * state.dx()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_normalized_on_grid() {
        let g = GridState::gaussian(-10.0, 10.0, 512, 0.0, 1.0, 0.0, 1.0, |_| 0.0).unwrap();
        assert!((g.norm_sqr() - 1.0).abs() <= 1e-12);
        assert!(g.mean_position().abs() < 1e-10);
        assert!((g.position_variance() - 1.0).abs() < 1e-6);
        assert!(g.edge_mass() < 1e-20);
    }

    #[test]
    fn momentum_kick_shows_up_in_mean_momentum() {
        let g = GridState::gaussian(-12.0, 12.0, 1024, 0.0, 1.0, 0.7, 1.0, |_| 0.0).unwrap();
        assert!((g.mean_momentum() - 0.7).abs() < 1e-4);
    }

    #[test]
    fn product_state_marginal_is_twice_single_density() {
        let phi = GridState::gaussian(-8.0, 8.0, 128, 0.0, 1.0, 0.0, 1.0, |_| 0.0).unwrap();
        let two = TwoParticleGridState::product(&phi).unwrap();
        let marginal = single_particle_marginal(&two);
        for (i, a) in phi.amplitudes().iter().enumerate() {
            assert!((marginal[i] - 2.0 * a.norm_sqr()).abs() < 1e-10);
        }
        let total: f64 = marginal.iter().sum::<f64>() * two.dx();
        assert!((total - 2.0).abs() < 1e-8);
    }

    #[test]
    fn symmetrized_marginal_integrates_to_two_and_is_exchange_invariant() {
        let a = GridState::gaussian(-8.0, 8.0, 96, -1.5, 0.7, 0.0, 1.0, |_| 0.0).unwrap();
        let b = GridState::gaussian(-8.0, 8.0, 96, 1.5, 0.7, 0.0, 1.0, |_| 0.0).unwrap();
        let two = TwoParticleGridState::symmetrized(&a, &b).unwrap();
        let marginal = single_particle_marginal(&two);
        let total: f64 = marginal.iter().sum::<f64>() * two.dx();
        assert!((total - 2.0).abs() < 1e-8, "marginal mass {total}");
        // |Ψ|² is exchange symmetric, so both particle axes give one marginal
        let swapped = single_particle_marginal(&two.transposed());
        for (m1, m2) in marginal.iter().zip(&swapped) {
            assert!((m1 - m2).abs() < 1e-12);
        }
    }

    #[test]
    fn two_particle_cap() {
        let amps = vec![Complex64::new(1.0, 0.0); 300 * 300];
        assert!(matches!(
            TwoParticleGridState::new(-1.0, 1.0, 300, amps),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn snapshot_csv_shape() {
        let g = GridState::gaussian(-5.0, 5.0, 8, 0.0, 1.0, 0.0, 1.0, |_| 0.0).unwrap();
        let csv = g.snapshot_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,re_psi,im_psi,rho");
        assert_eq!(lines.len(), 9);
    }
}
