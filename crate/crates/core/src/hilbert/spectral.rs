//! Spectral decomposition of hermitian operators and unitary time evolution.
//!
//! Evolution uses the eigendecomposition directly, `exp(−iHt) = V e^{−iλt} V†`,
//! so the propagator is unitary up to rounding in the factorization rather
//! than up to a series truncation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{OperatorMatrix, StateVector};
use crate::tolerance;

/// Eigenvalues (ascending), orthonormal eigenvectors, and degeneracy blocks
/// of a hermitian operator.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    degeneracy_blocks: Vec<Vec<usize>>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are the eigenvectors, ordered with the eigenvalues.
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Index groups whose eigenvalues agree within the decomposition tolerance.
    pub fn degeneracy_blocks(&self) -> &[Vec<usize>] {
        &self.degeneracy_blocks
    }

    /// Reconstructs V Λ V†.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let lambda = DMatrix::from_diagonal(&DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        &self.eigenvectors * lambda * self.eigenvectors.adjoint()
    }
}

/// Diagonalizes a hermitian operator.
///
/// Eigenvalues come out ascending; runs of consecutive eigenvalues whose
/// gaps stay below `degeneracy_tol` are grouped into one block.
pub fn spectral(a: &OperatorMatrix, degeneracy_tol: f64) -> Result<SpectralDecomposition> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian {
            max_deviation: super::operator::hermiticity_deviation(a.entries()),
        });
    }
    let eig = a.entries().clone().symmetric_eigen();
    let dim = a.dim();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eig.eigenvectors.column(i));
    }

    let mut degeneracy_blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..dim {
        match degeneracy_blocks.last_mut() {
            Some(block)
                if eigenvalues[i] - eigenvalues[*block.last().unwrap()] < degeneracy_tol =>
            {
                block.push(i);
            }
            _ => degeneracy_blocks.push(vec![i]),
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        degeneracy_blocks,
    })
}

/// Evolves a state under a hermitian generator: `exp(−i h t) · ψ` with ħ = 1.
pub fn evolve(state: &StateVector, h: &OperatorMatrix, t: f64) -> Result<StateVector> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian {
            max_deviation: super::operator::hermiticity_deviation(h.entries()),
        });
    }
    if h.dim() != state.len() {
        return Err(Error::ShapeMismatch(format!(
            "generator dim {} does not match state length {}",
            h.dim(),
            state.len()
        )));
    }
    let dec = spectral(h, tolerance::DEGENERACY)?;
    let v = dec.eigenvectors();
    let psi = DVector::from_column_slice(state.amplitudes());
    let mut coeffs = v.adjoint() * psi;
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, -dec.eigenvalues()[k] * t);
    }
    let out = v * coeffs;
    Ok(state.with_amplitudes(out.data.into()))
}
