//! Labeled tensor factors for measurement chains.
//!
//! A composite state tracks which factor plays which role: the prepared
//! systems, one detector slot per planned measurement, optional observer
//! slots, and an optional dephasing environment. Detector and observer
//! slots have dimension R+1: digit 0 is the blank "nothing registered"
//! state |M_φ⟩, digit b+1 records outcome b.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{OperatorMatrix, StateVector};

/// What a tensor factor represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// The k-th prepared system (dimension = outcome count).
    System { index: usize },
    /// Detector memory for the k-th measurement (dimension = outcomes + 1).
    DetectorSlot { index: usize },
    /// Observer memory copying the k-th record (dimension = outcomes + 1).
    ObserverSlot { index: usize },
    /// Dephasing environment of some number of qubits.
    Environment,
}

/// One labeled tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub role: Role,
    pub dim: usize,
}

/// A state vector over labeled factors.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeState {
    factors: Vec<Factor>,
    state: StateVector,
}

/// Support off the expected digit below this squared-amplitude mass counts
/// as numerically absent.
const SUPPORT_TOL: f64 = 1e-20;

impl CompositeState {
    pub fn new(factors: Vec<Factor>, state: StateVector) -> Result<Self> {
        let expected: usize = factors.iter().map(|f| f.dim).product();
        if state.component_count() != 1 || state.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "factor dims multiply to {expected}, state holds {} amplitudes",
                state.len()
            )));
        }
        if factors
            .iter()
            .filter(|f| f.role == Role::Environment)
            .count()
            > 1
        {
            return Err(Error::Contract("at most one environment factor".into()));
        }
        Ok(Self { factors, state })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.state.amplitudes()
    }

    pub fn len(&self) -> usize {
        self.state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.is_empty()
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        Self {
            factors: self.factors.clone(),
            state: self.state.with_amplitudes(amplitudes),
        }
    }

    /// Position of the factor with the given role.
    pub fn find_factor(&self, role: Role) -> Option<usize> {
        self.factors.iter().position(|f| f.role == role)
    }

    /// Stride of factor `pos`: amplitudes one digit apart at that factor.
    pub fn stride(&self, pos: usize) -> usize {
        self.factors[pos + 1..].iter().map(|f| f.dim).product()
    }

    /// Digit of `index` at factor `pos`.
    pub fn digit(&self, index: usize, pos: usize) -> usize {
        index / self.stride(pos) % self.factors[pos].dim
    }

    /// Squared-amplitude mass carried by each digit of factor `pos`.
    pub fn digit_masses(&self, pos: usize) -> Vec<f64> {
        let stride = self.stride(pos);
        let dim = self.factors[pos].dim;
        let mut masses = vec![0.0; dim];
        for (i, a) in self.amplitudes().iter().enumerate() {
            masses[i / stride % dim] += a.norm_sqr();
        }
        masses
    }

    /// True when factor `pos` is numerically in the basis state `digit`.
    pub fn factor_in_basis_state(&self, pos: usize, digit: usize) -> bool {
        let masses = self.digit_masses(pos);
        masses
            .iter()
            .enumerate()
            .filter(|(d, _)| *d != digit)
            .map(|(_, m)| m)
            .sum::<f64>()
            <= SUPPORT_TOL
    }

    /// Applies a dense operator to one factor.
    pub fn apply_to_factor(&self, op: &OperatorMatrix, pos: usize) -> Result<Self> {
        let dim = self.factors[pos].dim;
        if op.dim() != dim {
            return Err(Error::ShapeMismatch(format!(
                "operator dim {} does not match factor dim {dim}",
                op.dim()
            )));
        }
        let stride = self.stride(pos);
        let amps = self.amplitudes();
        let mut out = vec![Complex64::default(); amps.len()];
        let block = dim * stride;
        let m = op.entries();
        for outer in (0..amps.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for row in 0..dim {
                    let mut acc = Complex64::default();
                    for col in 0..dim {
                        acc += m[(row, col)] * amps[base + col * stride];
                    }
                    out[base + row * stride] = acc;
                }
            }
        }
        Ok(self.with_amplitudes(out))
    }

    /// Appends an environment of `n_qubits` two-level systems, each in |+⟩.
    pub fn with_environment(&self, n_qubits: u32) -> Result<Self> {
        if self.find_factor(Role::Environment).is_some() {
            return Err(Error::Contract("environment factor already present".into()));
        }
        let env_dim = 1usize << n_qubits;
        let total = self.len() * env_dim;
        if total > crate::tolerance::DIMENSION_CAP {
            return Err(Error::Capacity {
                requested: total,
                cap: crate::tolerance::DIMENSION_CAP,
            });
        }
        let scale = (env_dim as f64).sqrt().recip();
        let mut amps = Vec::with_capacity(total);
        for a in self.amplitudes() {
            for _ in 0..env_dim {
                amps.push(a * scale);
            }
        }
        let mut factors = self.factors.clone();
        factors.push(Factor {
            role: Role::Environment,
            dim: env_dim,
        });
        let dims: Vec<usize> = factors.iter().map(|f| f.dim).collect();
        CompositeState::new(factors, StateVector::new(dims, 1, amps)?)
    }

    /// Reduced density matrix of one factor, all others traced out.
    pub fn reduced_density(&self, pos: usize) -> DMatrix<Complex64> {
        let dim = self.factors[pos].dim;
        let stride = self.stride(pos);
        let amps = self.amplitudes();
        let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
        let block = dim * stride;
        for outer in (0..amps.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for i in 0..dim {
                    let ai = amps[base + i * stride];
                    if ai == Complex64::default() {
                        continue;
                    }
                    for j in 0..dim {
                        rho[(i, j)] += ai * amps[base + j * stride].conj();
                    }
                }
            }
        }
        rho
    }
}

/// Builds the chain-ready composite for `n` planned measurements: systems
/// 0..n each prepared in ψ (coefficients over the B basis), one blank
/// detector slot per system, and optionally one blank observer slot each.
pub fn prepare_chain(
    psi: &StateVector,
    outcome_count: usize,
    n_measurements: usize,
    with_observers: bool,
) -> Result<CompositeState> {
    if psi.len() != outcome_count || psi.component_count() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "system state must have {outcome_count} amplitudes, got {}",
            psi.len()
        )));
    }
    if n_measurements == 0 {
        return Err(Error::Contract("at least one measurement required".into()));
    }
    let slot_dim = outcome_count + 1;
    let total = psi
        .len()
        .checked_pow(n_measurements as u32)
        .and_then(|s| {
            slot_dim
                .checked_pow((n_measurements * (1 + usize::from(with_observers))) as u32)
                .and_then(|d| s.checked_mul(d))
        })
        .ok_or(Error::Capacity {
            requested: usize::MAX,
            cap: crate::tolerance::DIMENSION_CAP,
        })?;
    if total > crate::tolerance::DIMENSION_CAP {
        return Err(Error::Capacity {
            requested: total,
            cap: crate::tolerance::DIMENSION_CAP,
        });
    }

    let mut factors = Vec::new();
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n_measurements {
        factors.push(Factor {
            role: Role::System { index: k },
            dim: outcome_count,
        });
        amps = outer(&amps, psi.amplitudes());
    }
    let blank = {
        let mut v = vec![Complex64::default(); slot_dim];
        v[0] = Complex64::new(1.0, 0.0);
        v
    };
    for k in 0..n_measurements {
        factors.push(Factor {
            role: Role::DetectorSlot { index: k },
            dim: slot_dim,
        });
        amps = outer(&amps, &blank);
    }
    if with_observers {
        for k in 0..n_measurements {
            factors.push(Factor {
                role: Role::ObserverSlot { index: k },
                dim: slot_dim,
            });
            amps = outer(&amps, &blank);
        }
    }
    let dims: Vec<usize> = factors.iter().map(|f| f.dim).collect();
    CompositeState::new(factors, StateVector::new(dims, 1, amps)?)
}

fn outer(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level_psi() -> StateVector {
        StateVector::from_amplitudes(vec![c(0.3f64.sqrt(), 0.0), c(0.7f64.sqrt(), 0.0)]).unwrap()
    }

    #[test]
    fn prepare_chain_shapes() {
        let state = prepare_chain(&two_level_psi(), 2, 3, false).unwrap();
        assert_eq!(state.factors().len(), 6);
        assert_eq!(state.len(), 2 * 2 * 2 * 27);
        let withobs = prepare_chain(&two_level_psi(), 2, 2, true).unwrap();
        assert_eq!(withobs.factors().len(), 6);
        assert_eq!(withobs.len(), 4 * 9 * 9);
    }

    #[test]
    fn blank_slots_detected() {
        let state = prepare_chain(&two_level_psi(), 2, 1, false).unwrap();
        let slot = state.find_factor(Role::DetectorSlot { index: 0 }).unwrap();
        assert!(state.factor_in_basis_state(slot, 0));
        assert!(!state.factor_in_basis_state(slot, 1));
        let sys = state.find_factor(Role::System { index: 0 }).unwrap();
        let masses = state.digit_masses(sys);
        assert!((masses[0] - 0.3).abs() < 1e-12);
        assert!((masses[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn environment_appends_uniform_qubits() {
        let state = prepare_chain(&two_level_psi(), 2, 1, false).unwrap();
        let with_env = state.with_environment(3).unwrap();
        assert_eq!(with_env.len(), state.len() * 8);
        let env_pos = with_env.find_factor(Role::Environment).unwrap();
        let masses = with_env.digit_masses(env_pos);
        for m in masses {
            assert!((m - 0.125).abs() < 1e-12);
        }
        assert!((with_env.state().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_of_prepared_system() {
        let state = prepare_chain(&two_level_psi(), 2, 1, false).unwrap();
        let sys = state.find_factor(Role::System { index: 0 }).unwrap();
        let rho = state.reduced_density(sys);
        assert!((rho[(0, 0)].re - 0.3).abs() < 1e-12);
        assert!((rho[(1, 1)].re - 0.7).abs() < 1e-12);
        // pure product state: off-diagonals survive
        assert!((rho[(0, 1)].norm() - (0.3f64 * 0.7).sqrt()).abs() < 1e-12);
        let trace = (rho[(0, 0)] + rho[(1, 1)]).re;
        assert!((trace - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_to_factor_matches_direct_kron_action() {
        // flip the system of a 2×3 composite and compare against a hand-built result
        let psi = StateVector::from_amplitudes(vec![
            c(0.2, 0.1),
            c(0.5, -0.3),
            c(0.4, 0.0),
            c(0.1, 0.6),
            c(0.3, 0.2),
            c(0.05, -0.15),
        ])
        .unwrap();
        let factors = vec![
            Factor {
                role: Role::System { index: 0 },
                dim: 2,
            },
            Factor {
                role: Role::DetectorSlot { index: 0 },
                dim: 3,
            },
        ];
        let amps: Vec<Complex64> = psi.amplitudes().to_vec();
        let state = CompositeState::new(
            factors,
            StateVector::new(vec![2, 3], 1, amps.clone()).unwrap(),
        )
        .unwrap();
        let flip = OperatorMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let flipped = state.apply_to_factor(&flip, 0).unwrap();
        for i in 0..3 {
            assert!((flipped.amplitudes()[i] - state.amplitudes()[i + 3]).norm() < 1e-15);
            assert!((flipped.amplitudes()[i + 3] - state.amplitudes()[i]).norm() < 1e-15);
        }
    }
}
