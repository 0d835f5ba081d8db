//! Decomposition of a post-measurement state into branches.
//!
//! A branch is the projection of the composite state onto one complete
//! detector record sequence, renormalized. Its weight — the squared norm of
//! the projection — is the density the observer distribution assigns to
//! that sequence. The interference matrix holds the pairwise magnitudes of
//! the environment-overlap factors; branching counts as decohered once every
//! off-diagonal entry sits below the stated tolerance.
//!
//! Branches store only their support (a chain of N two-outcome measurements
//! has 2^N branches over one shared amplitude array — materializing each as
//! a dense vector would square the memory); [`BranchEnsemble::branch_state`]
//! rebuilds any single branch densely on demand.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::measurement::composite::{CompositeState, Factor, Role};
use crate::measurement::setup::MeasurementSetup;

/// One branch: its record labels, weight, and support.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Outcome index recorded by each detector slot, in slot order.
    pub labels: Vec<usize>,
    /// Squared norm of the projection onto this record sequence.
    pub weight: f64,
    /// Unnormalized amplitudes, keyed by (non-environment row, env vector).
    rows: Vec<(usize, Vec<Complex64>)>,
}

impl Branch {
    /// Maps the outcome indices to the B-eigenvalues a given arrangement reports.
    pub fn b_eigenvalues(&self, setup: &MeasurementSetup) -> Vec<f64> {
        self.labels.iter().map(|&b| setup.b_eigenvalue(b)).collect()
    }
}

/// The branches of one state together with their residual interference.
#[derive(Debug, Clone)]
pub struct BranchEnsemble {
    pub branches: Vec<Branch>,
    /// Symmetric matrix of environment-overlap magnitudes; 1 on the diagonal.
    pub interference: Vec<Vec<f64>>,
    /// Tolerance the off-diagonals were compared against.
    pub interference_tol: f64,
    /// True when every off-diagonal overlap is at or below the tolerance.
    pub decohered: bool,
    factors: Vec<Factor>,
    env_layout: EnvLayout,
}

#[derive(Debug, Clone, Copy)]
struct EnvLayout {
    present: bool,
    stride: usize,
    dim: usize,
}

impl BranchEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum()
    }

    pub fn max_offdiagonal_interference(&self) -> f64 {
        let n = self.branches.len();
        let mut max = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                max = max.max(self.interference[i][j]);
            }
        }
        max
    }

    /// Weight of the branch with the given record sequence, if present.
    pub fn weight_of(&self, labels: &[usize]) -> Option<f64> {
        self.branches
            .iter()
            .find(|b| b.labels == labels)
            .map(|b| b.weight)
    }

    /// Materializes one branch as a dense, renormalized composite state.
    pub fn branch_state(&self, index: usize) -> Result<CompositeState> {
        let branch = &self.branches[index];
        let total: usize = self.factors.iter().map(|f| f.dim).product();
        let mut amps = vec![Complex64::default(); total];
        let scale = branch.weight.sqrt().recip();
        for (row_id, row) in &branch.rows {
            for (env_idx, &a) in row.iter().enumerate() {
                amps[self.env_layout.expand(*row_id, env_idx)] = a * scale;
            }
        }
        let dims: Vec<usize> = self.factors.iter().map(|f| f.dim).collect();
        CompositeState::new(self.factors.clone(), StateVector::new(dims, 1, amps)?)
    }
}

impl EnvLayout {
    /// Collapses a full amplitude index to (row id without env, env digit).
    fn split(self, idx: usize) -> (usize, usize) {
        if !self.present {
            return (idx, 0);
        }
        let env_idx = idx / self.stride % self.dim;
        let high = idx / (self.stride * self.dim);
        (high * self.stride + idx % self.stride, env_idx)
    }

    /// Inverse of [`Self::split`].
    fn expand(self, row_id: usize, env_idx: usize) -> usize {
        if !self.present {
            return row_id;
        }
        let high = row_id / self.stride;
        let low = row_id % self.stride;
        (high * self.dim + env_idx) * self.stride + low
    }
}

/// Splits a state into branches along its detector record sequences.
///
/// Every detector slot must carry a definite record on the support of the
/// state; unrecorded (blank) support is a contract violation. Off-diagonal
/// interference above the tolerance flags the ensemble as not yet
/// decohered — that is a finding, not an error.
pub fn extract_branches(state: &CompositeState, interference_tol: f64) -> Result<BranchEnsemble> {
    let det_strides: Vec<(usize, usize)> = state
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, f)| matches!(f.role, Role::DetectorSlot { .. }))
        .map(|(pos, f)| (state.stride(pos), f.dim))
        .collect();
    if det_strides.is_empty() {
        return Err(Error::Contract("state has no detector slots".into()));
    }
    let env_layout = match state.find_factor(Role::Environment) {
        Some(pos) => EnvLayout {
            present: true,
            stride: state.stride(pos),
            dim: state.factors()[pos].dim,
        },
        None => EnvLayout {
            present: false,
            stride: 1,
            dim: 1,
        },
    };

    // Group amplitudes by record sequence; within each group collect the
    // (non-env basis state) → (env amplitude vector) rows of the support.
    let amps = state.amplitudes();
    let mut sectors: BTreeMap<Vec<usize>, BTreeMap<usize, Vec<Complex64>>> = BTreeMap::new();
    for (idx, &a) in amps.iter().enumerate() {
        if a == Complex64::default() {
            continue;
        }
        let labels: Vec<usize> = det_strides
            .iter()
            .map(|&(stride, dim)| idx / stride % dim)
            .collect();
        if labels.contains(&0) {
            return Err(Error::Contract(
                "a detector slot has unrecorded support; measure before branching".into(),
            ));
        }
        let (row_id, env_idx) = env_layout.split(idx);
        sectors
            .entry(labels.iter().map(|&d| d - 1).collect())
            .or_default()
            .entry(row_id)
            .or_insert_with(|| vec![Complex64::default(); env_layout.dim])[env_idx] = a;
    }

    let mut branches = Vec::with_capacity(sectors.len());
    for (labels, table) in sectors {
        let weight: f64 = table
            .values()
            .flat_map(|row| row.iter().map(|a| a.norm_sqr()))
            .sum();
        branches.push(Branch {
            labels,
            weight,
            rows: table.into_iter().collect(),
        });
    }

    // Pairwise environment-overlap magnitudes: ‖B_i B_j†‖_F / √(w_i w_j),
    // which for product branches is exactly |⟨E_i|E_j⟩|.
    let n = branches.len();
    let mut interference = vec![vec![0.0; n]; n];
    for i in 0..n {
        interference[i][i] = 1.0;
        for j in i + 1..n {
            let mut frob = 0.0;
            for (_, row_i) in &branches[i].rows {
                for (_, row_j) in &branches[j].rows {
                    let dot: Complex64 = row_i.iter().zip(row_j).map(|(a, b)| a.conj() * b).sum();
                    frob += dot.norm_sqr();
                }
            }
            let overlap = frob.sqrt() / (branches[i].weight * branches[j].weight).sqrt();
            interference[i][j] = overlap;
            interference[j][i] = overlap;
        }
    }

    let decohered = (0..n).all(|i| (i + 1..n).all(|j| interference[i][j] <= interference_tol));

    Ok(BranchEnsemble {
        branches,
        interference,
        interference_tol,
        decohered,
        factors: state.factors().to_vec(),
        env_layout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::chain::{decohere, dephasing_envelope, measure};
    use crate::measurement::composite::prepare_chain;
    use crate::measurement::setup::build_position_detector;
    use crate::tolerance;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn psi(weights: &[f64]) -> StateVector {
        StateVector::from_amplitudes(weights.iter().map(|w| c(w.sqrt(), 0.0)).collect()).unwrap()
    }

    #[test]
    fn weights_follow_born_rule() {
        let setup = build_position_detector(2, 1).unwrap();
        let state = prepare_chain(&psi(&[0.3, 0.7]), 2, 1, false).unwrap();
        let measured = measure(&state, &setup).unwrap();
        let ensemble = extract_branches(&measured, tolerance::INTERFERENCE).unwrap();
        assert_eq!(ensemble.branches.len(), 2);
        assert!((ensemble.weight_of(&[0]).unwrap() - 0.3).abs() < 1e-12);
        assert!((ensemble.weight_of(&[1]).unwrap() - 0.7).abs() < 1e-12);
        assert!((ensemble.total_weight() - 1.0).abs() < 1e-10);
        // without an environment the branches still overlap fully
        assert!((ensemble.max_offdiagonal_interference() - 1.0).abs() < 1e-12);
        assert!(!ensemble.decohered);
    }

    #[test]
    fn weights_sum_to_one_on_random_five_level() {
        let amps = vec![
            c(0.21, -0.33),
            c(-0.4, 0.12),
            c(0.05, 0.48),
            c(0.33, 0.02),
            c(-0.19, -0.27),
        ];
        let sys = StateVector::from_amplitudes(amps).unwrap();
        let setup = build_position_detector(5, 1).unwrap();
        let state = prepare_chain(&sys, 5, 1, false).unwrap();
        let measured = measure(&state, &setup).unwrap();
        let ensemble = extract_branches(&measured, tolerance::INTERFERENCE).unwrap();
        assert_eq!(ensemble.branches.len(), 5);
        assert!((ensemble.total_weight() - 1.0).abs() < 1e-10);
        for branch in &ensemble.branches {
            let expect = sys.amplitudes()[branch.labels[0]].norm_sqr();
            assert!((branch.weight - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn unmeasured_state_rejected() {
        let state = prepare_chain(&psi(&[0.5, 0.5]), 2, 1, false).unwrap();
        assert!(matches!(
            extract_branches(&state, 1e-3),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn branch_states_are_products_with_unit_norm() {
        let setup = build_position_detector(2, 1).unwrap();
        let state = prepare_chain(&psi(&[0.3, 0.7]), 2, 2, false).unwrap();
        let twice = measure(&measure(&state, &setup).unwrap(), &setup).unwrap();
        let ensemble = extract_branches(&twice, tolerance::INTERFERENCE).unwrap();
        assert_eq!(ensemble.branches.len(), 4);
        for (i, branch) in ensemble.branches.iter().enumerate() {
            // weight of (b1, b2) = |c_b1|²·|c_b2|²
            let expect: f64 = branch
                .labels
                .iter()
                .map(|&b| if b == 0 { 0.3 } else { 0.7 })
                .product();
            assert!((branch.weight - expect).abs() < 1e-12);
            let dense = ensemble.branch_state(i).unwrap();
            assert!((dense.state().norm() - 1.0).abs() < 1e-12);
            // the materialized branch has definite records everywhere
            for k in 0..2 {
                let slot = dense.find_factor(Role::DetectorSlot { index: k }).unwrap();
                assert!(dense.factor_in_basis_state(slot, branch.labels[k] + 1));
            }
        }
        // labels come out in lexicographic order
        let labels: Vec<&[usize]> = ensemble.branches.iter().map(|b| &b.labels[..]).collect();
        assert_eq!(labels, [&[0, 0][..], &[0, 1], &[1, 0], &[1, 1]]);
    }

    #[test]
    fn interference_decays_on_the_dephasing_envelope() {
        let setup = build_position_detector(2, 1).unwrap();
        let state = prepare_chain(&psi(&[0.3, 0.7]), 2, 1, false).unwrap();
        let measured = measure(&state, &setup).unwrap();
        let (g, t, n) = (0.8, 0.6, 6u32);
        let dephased = decohere(&measured.with_environment(n).unwrap(), n, g, t).unwrap();
        let ensemble = extract_branches(&dephased, tolerance::INTERFERENCE).unwrap();
        let expect = dephasing_envelope(1, g, t, n);
        let got = ensemble.interference[0][1];
        assert!(
            (got - expect).abs() < 1e-12,
            "overlap {got} vs envelope {expect}"
        );
        // weights are untouched by dephasing
        assert!((ensemble.weight_of(&[0]).unwrap() - 0.3).abs() < 1e-10);
        assert!((ensemble.weight_of(&[1]).unwrap() - 0.7).abs() < 1e-10);
    }

    #[test]
    fn large_bath_crosses_the_decoherence_threshold() {
        let setup = build_position_detector(2, 1).unwrap();
        let state = prepare_chain(&psi(&[0.3, 0.7]), 2, 1, false).unwrap();
        let measured = measure(&state, &setup).unwrap();
        // cos(1.2)^16 ≈ 9e-8: comfortably past the default threshold
        let n = 16u32;
        let (g, t) = (1.2, 1.0);
        let dephased = decohere(&measured.with_environment(n).unwrap(), n, g, t).unwrap();
        let ensemble = extract_branches(&dephased, tolerance::INTERFERENCE).unwrap();
        assert!(
            ensemble.decohered,
            "interference {:e}",
            ensemble.max_offdiagonal_interference()
        );
        assert!(ensemble.max_offdiagonal_interference() <= 1e-3);
    }
}
