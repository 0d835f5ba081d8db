//! Environment-assisted invariance of equal-weight entangled states.
//!
//! For the Schmidt state `|Ψ⟩ = c₁|1⟩|ε₁⟩ + c₂|2⟩|ε₂⟩` with c₂ = c₁e^{iφ},
//! swapping the system states while counter-rotating the environment,
//!
//! ```text
//! U_e|Ψ⟩ = c₁e^{iφ}|2⟩|ε₂⟩ + c₂e^{−iφ}|1⟩|ε₁⟩,
//! ```
//!
//! returns the state exactly when |c₁| = |c₂|. The check below reports the
//! norm distance ‖U_e|Ψ⟩ − |Ψ⟩‖, which is zero only in the equal-weight
//! case — the caller interprets a nonzero distance.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{OperatorMatrix, StateVector};
use crate::tolerance;

/// Amplitude pair, environment basis states, and the swap unitary U_e.
#[derive(Debug, Clone)]
pub struct EnvarianceSetup {
    c1: Complex64,
    c2: Complex64,
    phase: f64,
    env_basis: (Vec<Complex64>, Vec<Complex64>),
    swap_unitary: OperatorMatrix,
}

impl EnvarianceSetup {
    /// Builds the swap from the amplitudes and two orthonormal environment
    /// states. The amplitude pair is normalized; φ is taken from arg(c₂/c₁).
    pub fn new(
        c1: Complex64,
        c2: Complex64,
        eps1: Vec<Complex64>,
        eps2: Vec<Complex64>,
    ) -> Result<Self> {
        if eps1.len() != eps2.len() || eps1.len() < 2 {
            return Err(Error::ShapeMismatch(
                "environment states must share a dimension ≥ 2".into(),
            ));
        }
        let norm = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let (c1, c2) = (c1 / norm, c2 / norm);
        let n1: f64 = eps1.iter().map(|a| a.norm_sqr()).sum();
        let n2: f64 = eps2.iter().map(|a| a.norm_sqr()).sum();
        let cross: Complex64 = eps1.iter().zip(&eps2).map(|(a, b)| a.conj() * b).sum();
        if (n1 - 1.0).abs() > tolerance::EQUALITY
            || (n2 - 1.0).abs() > tolerance::EQUALITY
            || cross.norm() > tolerance::EQUALITY
        {
            return Err(Error::Contract(
                "environment states must be orthonormal".into(),
            ));
        }

        let phase = if c1.norm() > 0.0 && c2.norm() > 0.0 {
            (c2 / c1).arg()
        } else {
            0.0
        };

        let env_dim = eps1.len();
        // U_env = e^{iφ}|ε₂⟩⟨ε₁| + e^{−iφ}|ε₁⟩⟨ε₂| + (1 − |ε₁⟩⟨ε₁| − |ε₂⟩⟨ε₂|)
        let mut u_env = DMatrix::<Complex64>::identity(env_dim, env_dim);
        for i in 0..env_dim {
            for j in 0..env_dim {
                u_env[(i, j)] -= eps1[i] * eps1[j].conj() + eps2[i] * eps2[j].conj();
                u_env[(i, j)] += Complex64::from_polar(1.0, phase) * eps2[i] * eps1[j].conj();
                u_env[(i, j)] += Complex64::from_polar(1.0, -phase) * eps1[i] * eps2[j].conj();
            }
        }
        let u_sys = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::default(),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::default(),
            ],
        );
        let swap_unitary = OperatorMatrix::new(u_sys.kronecker(&u_env))?;
        if !swap_unitary.is_unitary() {
            return Err(Error::NotUnitary {
                max_deviation: crate::hilbert::unitarity_deviation(swap_unitary.entries()),
            });
        }

        Ok(Self {
            c1,
            c2,
            phase,
            env_basis: (eps1, eps2),
            swap_unitary,
        })
    }

    /// Convenience constructor with the canonical environment basis
    /// e₀, e₁ of the given dimension.
    pub fn with_canonical_environment(
        c1: Complex64,
        c2: Complex64,
        env_dim: usize,
    ) -> Result<Self> {
        let mut eps1 = vec![Complex64::default(); env_dim];
        let mut eps2 = vec![Complex64::default(); env_dim];
        eps1[0] = Complex64::new(1.0, 0.0);
        eps2[1] = Complex64::new(1.0, 0.0);
        Self::new(c1, c2, eps1, eps2)
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn swap_unitary(&self) -> &OperatorMatrix {
        &self.swap_unitary
    }

    /// The Schmidt state c₁|1⟩|ε₁⟩ + c₂|2⟩|ε₂⟩ on system ⊗ environment.
    pub fn schmidt_state(&self) -> Result<StateVector> {
        let env_dim = self.env_basis.0.len();
        let mut amps = vec![Complex64::default(); 2 * env_dim];
        for (i, &e) in self.env_basis.0.iter().enumerate() {
            amps[i] += self.c1 * e;
        }
        for (i, &e) in self.env_basis.1.iter().enumerate() {
            amps[env_dim + i] += self.c2 * e;
        }
        StateVector::new(vec![2, env_dim], 1, amps)
    }
}

/// Norm distance ‖U_e|Ψ⟩ − |Ψ⟩‖.
///
/// At most 1e-10 when |c₁| = |c₂| (the envariance claim); strictly positive
/// otherwise, and the caller decides what to make of the distance.
pub fn envariance_check(setup: &EnvarianceSetup) -> Result<f64> {
    let psi = setup.schmidt_state()?;
    let swapped = setup.swap_unitary().apply_vec(psi.amplitudes())?;
    let dist2: f64 = psi
        .amplitudes()
        .iter()
        .zip(&swapped)
        .map(|(a, b)| (b - a).norm_sqr())
        .sum();
    Ok(dist2.sqrt())
}
