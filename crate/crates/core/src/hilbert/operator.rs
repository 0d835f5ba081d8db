//! Dense complex operators with cached hermiticity and unitarity checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

/// Square complex matrix acting on state vectors.
///
/// Hermiticity and unitarity are checked once at construction and cached;
/// the flags use the deviations `max|M − M†|` and `max|M·M† − 1|`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    hermitian: bool,
    unitary: bool,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "operator must be square, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let hermitian = hermiticity_deviation(&entries) <= tolerance::EQUALITY;
        let unitary = unitarity_deviation(&entries) <= tolerance::UNITARITY;
        Ok(Self {
            entries,
            hermitian,
            unitary,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
            hermitian: true,
            unitary: true,
        }
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(values: &[f64]) -> Self {
        let entries = DMatrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::default()
            }
        });
        Self {
            entries,
            hermitian: true,
            unitary: values
                .iter()
                .all(|v| (v.abs() - 1.0).abs() <= tolerance::UNITARITY),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
            hermitian: true,
            unitary: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
            unitary: self.unitary,
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!(
                "operator dims differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Self::new(&self.entries * &other.entries)
    }

    /// Applies the operator to a bare amplitude vector.
    pub fn apply_vec(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        if amplitudes.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "operator dim {} does not match vector length {}",
                self.dim(),
                amplitudes.len()
            )));
        }
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        Ok((&self.entries * v).data.into())
    }
}

pub fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}

pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let prod = m * m.adjoint();
    let mut max = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let expect = if i == j { 1.0 } else { 0.0 };
            max = max.max((prod[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_flag_detects_adjoint_symmetry() {
        let h = OperatorMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(2.0, 0.0)],
        ))
        .unwrap();
        assert!(h.is_hermitian());
        assert!(!h.is_unitary());

        let skew = OperatorMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        assert!(!skew.is_hermitian());
    }

    #[test]
    fn unitary_flag_on_phase_matrix() {
        let u = OperatorMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ))
        .unwrap();
        assert!(u.is_unitary());
        assert!(!u.is_hermitian());
    }

    #[test]
    fn identity_is_both() {
        let i = OperatorMatrix::identity(5);
        assert!(i.is_hermitian());
        assert!(i.is_unitary());
    }

    #[test]
    fn non_square_rejected() {
        let err = OperatorMatrix::new(DMatrix::zeros(2, 3)).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }
}
