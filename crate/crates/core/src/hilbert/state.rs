//! Normalized state vectors over a finite product basis.
//!
//! A state carries a discrete component index j (spin-like) and a list of
//! factor dimensions. Amplitudes are stored flat with j slowest, then the
//! factors in declared order, row-major. Two states at zero norm distance
//! are the same physical state and compare as equal.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

/// Normalized complex amplitude array over `component_count × Π dims` basis states.
#[derive(Debug, Clone)]
pub struct StateVector {
    dims: Vec<usize>,
    component_count: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them.
    ///
    /// The amplitude length must equal `component_count × Π dims`; a zero
    /// vector cannot be normalized and is rejected.
    pub fn new(
        dims: Vec<usize>,
        component_count: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if component_count == 0 || dims.contains(&0) {
            return Err(Error::InvalidArgument(
                "factor dimensions and component count must be positive".into(),
            ));
        }
        let expected = component_count * dims.iter().product::<usize>();
        if amplitudes.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "amplitude length {} does not match component_count × Π dims = {}",
                amplitudes.len(),
                expected
            )));
        }
        let mut state = Self {
            dims,
            component_count,
            amplitudes,
        };
        state.normalize()?;
        Ok(state)
    }

    /// Single-factor state without a component index.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        Self::new(vec![dim], 1, amplitudes)
    }

    /// Basis state `e_index` of a single factor of dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::default(); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amplitudes)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Total length of the amplitude array.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        if (norm - 1.0).abs() > f64::EPSILON {
            let inv = 1.0 / norm;
            for a in &mut self.amplitudes {
                *a *= inv;
            }
        }
        Ok(())
    }

    /// Density ρ over basis slots with the component index summed out,
    /// `ρ(x) = Σ_j |ψ_j(x)|²`.
    pub fn density(&self) -> Vec<f64> {
        let slots = self.len() / self.component_count;
        let mut rho = vec![0.0; slots];
        for (i, a) in self.amplitudes.iter().enumerate() {
            rho[i % slots] += a.norm_sqr();
        }
        rho
    }

    /// Norm distance ‖a − b‖; requires identical shape.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        let d2: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(d2.sqrt())
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims || self.component_count != other.component_count {
            return Err(Error::ShapeMismatch(format!(
                "state shapes differ: {:?}×{} vs {:?}×{}",
                self.dims, self.component_count, other.dims, other.component_count
            )));
        }
        Ok(())
    }

    /// Replaces the amplitudes without renormalizing; length must match.
    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.len());
        Self {
            dims: self.dims.clone(),
            component_count: self.component_count,
            amplitudes,
        }
    }
}

/// States at zero norm distance belong to the same equivalence class.
impl PartialEq for StateVector {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.component_count == other.component_count
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                == 0.0
    }
}

/// Inner product ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.check_same_shape(b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Tensor product a ⊗ b.
///
/// Result dims are `a.dims ++ b.dims` and the component index combines
/// mixed-radix, a's slowest: `j = j_a · b.component_count + j_b`. When both
/// component counts are 1 (the common case) this is the plain outer product.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let total = a.len() * b.len();
    if total > tolerance::DIMENSION_CAP {
        return Err(Error::Capacity {
            requested: total,
            cap: tolerance::DIMENSION_CAP,
        });
    }

    let a_slots = a.len() / a.component_count;
    let b_slots = b.len() / b.component_count;
    let slots = a_slots * b_slots;

    let mut amplitudes = vec![Complex64::default(); total];
    for (ia, &va) in a.amplitudes.iter().enumerate() {
        let (ja, xa) = (ia / a_slots, ia % a_slots);
        for (ib, &vb) in b.amplitudes.iter().enumerate() {
            let (jb, xb) = (ib / b_slots, ib % b_slots);
            let j = ja * b.component_count + jb;
            let x = xa * b_slots + xb;
            amplitudes[j * slots + x] = va * vb;
        }
    }

    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    StateVector::new(dims, a.component_count * b.component_count, amplitudes)
}
