//! The measurement, observation, and decoherence transitions.
//!
//! Each transition is one fixed unitary. Measurement entangles the next
//! prepared system with its detector slot,
//!
//! ```text
//! (Σ_b c_b |b⟩) |M_φ⟩  →  Σ_b c_b |b⟩′ |M_b⟩,
//! ```
//!
//! observation copies each record into the observer slot without touching
//! the detector, and decoherence couples every record digit to a bath of
//! environment qubits through a diagonal dephasing Hamiltonian
//! `H = g · L̂ ⊗ Σ_k σ_z^(k)`, where L̂ sums the record digits. Because the
//! bath starts in |+⟩^⊗n, two branches whose record digits differ by ΔL
//! keep an environment overlap of exactly cos(g·t·ΔL)^n — the closed form
//! the tests check the simulation against.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measurement::composite::{CompositeState, Role};
use crate::measurement::setup::MeasurementSetup;

/// Entangles the lowest-index blank detector slot with its system.
///
/// The entangling unitary is the permutation (b, blank) ↔ (b, record b) on
/// the system⊗slot pair; everything else is left alone, so linearity and
/// norm conservation hold exactly.
pub fn measure(state: &CompositeState, setup: &MeasurementSetup) -> Result<CompositeState> {
    let r = setup.outcome_count();
    let mut target = None;
    for (pos, factor) in state.factors().iter().enumerate() {
        if let Role::DetectorSlot { index } = factor.role {
            if state.factor_in_basis_state(pos, 0) {
                target = Some((index, pos));
                break;
            }
        }
    }
    let (k, slot_pos) = target
        .ok_or_else(|| Error::Contract("no detector slot in the ready state |M_φ⟩".into()))?;
    let sys_pos = state
        .find_factor(Role::System { index: k })
        .ok_or_else(|| Error::Contract(format!("no system factor paired with slot {k}")))?;

    if state.factors()[slot_pos].dim != r + 1 || state.factors()[sys_pos].dim != r {
        return Err(Error::ShapeMismatch(format!(
            "system/slot dims {}/{} do not match setup outcomes {r}",
            state.factors()[sys_pos].dim,
            state.factors()[slot_pos].dim
        )));
    }

    let sys_stride = state.stride(sys_pos);
    let slot_stride = state.stride(slot_pos);
    let slot_dim = r + 1;
    let mut amps = state.amplitudes().to_vec();
    for idx in 0..amps.len() {
        let slot_digit = idx / slot_stride % slot_dim;
        if slot_digit != 0 {
            continue;
        }
        let b = idx / sys_stride % r;
        amps.swap(idx, idx + (b + 1) * slot_stride);
    }
    let measured = state.with_amplitudes(amps);
    match setup.post_kick() {
        Some(kick) => measured.apply_to_factor(kick, sys_pos),
        None => Ok(measured),
    }
}

/// Copies every recorded detector slot into its observer slot.
///
/// The copy is the permutation (M_b, O_φ) ↔ (M_b, O_b) per slot pair; the
/// detector digits are controls only, so the detector state is untouched.
pub fn observe(state: &CompositeState) -> Result<CompositeState> {
    let slot_dim_of = |pos: usize| state.factors()[pos].dim;
    let mut pairs = Vec::new();
    for (pos, factor) in state.factors().iter().enumerate() {
        if let Role::DetectorSlot { index } = factor.role {
            if state.factor_in_basis_state(pos, 0) {
                continue; // nothing recorded yet
            }
            if let Some(obs_pos) = state.find_factor(Role::ObserverSlot { index }) {
                if !state.factor_in_basis_state(obs_pos, 0) {
                    return Err(Error::Contract(format!(
                        "observer slot {index} is not in the ready state |O_φ⟩"
                    )));
                }
                if slot_dim_of(obs_pos) != slot_dim_of(pos) {
                    return Err(Error::ShapeMismatch(
                        "observer and detector slot dims differ".into(),
                    ));
                }
                pairs.push((pos, obs_pos));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::Contract(
            "no recorded detector slot with a ready observer slot".into(),
        ));
    }

    let mut amps = state.amplitudes().to_vec();
    for (det_pos, obs_pos) in pairs {
        let det_stride = state.stride(det_pos);
        let obs_stride = state.stride(obs_pos);
        let dim = slot_dim_of(det_pos);
        for idx in 0..amps.len() {
            let d = idx / det_stride % dim;
            if d == 0 {
                continue;
            }
            let o = idx / obs_stride % dim;
            if o == 0 {
                amps.swap(idx, idx + d * obs_stride);
            }
        }
    }
    Ok(state.with_amplitudes(amps))
}

/// Dephases the record digits against `env_qubits` bath qubits for time `t`
/// at coupling strength `coupling`.
///
/// The evolution is diagonal: an amplitude whose record digits sum to L and
/// whose env bits hold z zeros and (n−z) ones picks up the phase
/// `exp(−i·coupling·t·L·(2z−n))`.
pub fn decohere(
    state: &CompositeState,
    env_qubits: u32,
    coupling: f64,
    t: f64,
) -> Result<CompositeState> {
    if env_qubits == 0 {
        return Ok(state.clone());
    }
    let env_pos = state
        .find_factor(Role::Environment)
        .ok_or_else(|| Error::Contract("no environment factor present".into()))?;
    let env_dim = state.factors()[env_pos].dim;
    if env_dim != 1usize << env_qubits {
        return Err(Error::ShapeMismatch(format!(
            "environment dim {env_dim} does not match 2^{env_qubits}"
        )));
    }
    if coupling == 0.0 || t == 0.0 {
        return Ok(state.clone());
    }

    let record_positions: Vec<(usize, usize, usize)> = state
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            matches!(
                f.role,
                Role::DetectorSlot { .. } | Role::ObserverSlot { .. }
            )
        })
        .map(|(pos, f)| (state.stride(pos), f.dim, pos))
        .collect();
    let env_stride = state.stride(env_pos);

    let mut amps = state.amplitudes().to_vec();
    for (idx, amp) in amps.iter_mut().enumerate() {
        let label: usize = record_positions
            .iter()
            .map(|&(stride, dim, _)| idx / stride % dim)
            .sum();
        if label == 0 {
            continue;
        }
        let bits = idx / env_stride % env_dim;
        let sz_sum = env_qubits as i64 - 2 * bits.count_ones() as i64;
        let phase = -coupling * t * label as f64 * sz_sum as f64;
        *amp *= Complex64::from_polar(1.0, phase);
    }
    Ok(state.with_amplitudes(amps))
}

/// Closed-form environment overlap between two branches whose summed record
/// digits differ by `delta_label`: `cos(coupling·t·Δ)^n`.
pub fn dephasing_envelope(delta_label: i64, coupling: f64, t: f64, env_qubits: u32) -> f64 {
    (coupling * t * delta_label as f64)
        .cos()
        .powi(env_qubits as i32)
        .abs()
}
