//! End-to-end measurement narratives: transport, entanglement, observation,
//! dephasing, and branch bookkeeping across the full chain.

use num_complex::Complex64;

use everett_core::hilbert::{spectral, OperatorMatrix, StateVector};
use everett_core::measurement::{
    build_position_detector, decohere, dephasing_envelope, extract_branches, measure, observe,
    prepare_chain, transport_state, Role,
};
use everett_core::tolerance;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn psi_from_weights(weights: &[f64]) -> StateVector {
    StateVector::from_amplitudes(weights.iter().map(|w| c(w.sqrt(), 0.0)).collect()).unwrap()
}

#[test]
fn full_chain_keeps_branch_weights_at_every_stage() {
    let psi = StateVector::from_amplitudes(vec![c(0.4, 0.3), c(-0.5, 0.2), c(0.1, -0.67)]).unwrap();
    let expected: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let setup = build_position_detector(3, 1).unwrap();

    let measured = measure(&prepare_chain(&psi, 3, 1, true).unwrap(), &setup).unwrap();
    let after_measure = extract_branches(&measured, tolerance::INTERFERENCE).unwrap();

    let observed = observe(&measured).unwrap();
    let after_observe = extract_branches(&observed, tolerance::INTERFERENCE).unwrap();

    let dephased = decohere(&observed.with_environment(8).unwrap(), 8, 0.9, 0.7).unwrap();
    let after_decohere = extract_branches(&dephased, tolerance::INTERFERENCE).unwrap();

    for ensemble in [&after_measure, &after_observe, &after_decohere] {
        assert!((ensemble.total_weight() - 1.0).abs() <= 1e-10);
        for branch in &ensemble.branches {
            let want = expected[branch.labels[0]];
            assert!(
                (branch.weight - want).abs() <= 1e-10,
                "weight drifted: {} vs {want}",
                branch.weight
            );
        }
    }

    // the observer copy doubles the record-label separation, so branch pairs
    // (i, j) decohere on the envelope with ΔL = 2(j − i)
    for i in 0..3 {
        for j in i + 1..3 {
            let delta = 2 * (j - i) as i64;
            let envelope = dephasing_envelope(delta, 0.9, 0.7, 8);
            assert!(
                (after_decohere.interference[i][j] - envelope).abs() < 1e-12,
                "pair ({i},{j}): {} vs envelope {envelope}",
                after_decohere.interference[i][j]
            );
        }
    }
}

#[test]
fn observation_after_eigenstate_measurement_yields_a_product_record() {
    let setup = build_position_detector(2, 1).unwrap();
    let psi = StateVector::basis_state(2, 1).unwrap();
    let observed =
        observe(&measure(&prepare_chain(&psi, 2, 1, true).unwrap(), &setup).unwrap()).unwrap();
    // every factor is definite: |b=1⟩′ |M_1⟩ |O_1⟩
    let sys = observed.find_factor(Role::System { index: 0 }).unwrap();
    let det = observed
        .find_factor(Role::DetectorSlot { index: 0 })
        .unwrap();
    let obs = observed
        .find_factor(Role::ObserverSlot { index: 0 })
        .unwrap();
    assert!(observed.factor_in_basis_state(sys, 1));
    assert!(observed.factor_in_basis_state(det, 2));
    assert!(observed.factor_in_basis_state(obs, 2));
}

#[test]
fn post_measurement_kick_changes_the_system_but_not_the_weights() {
    let kick = OperatorMatrix::new(nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)],
    ))
    .unwrap();
    let setup = build_position_detector(2, 1)
        .unwrap()
        .with_post_kick(kick)
        .unwrap();
    let psi = psi_from_weights(&[0.3, 0.7]);
    let measured = measure(&prepare_chain(&psi, 2, 1, false).unwrap(), &setup).unwrap();
    let ensemble = extract_branches(&measured, tolerance::INTERFERENCE).unwrap();
    assert!((ensemble.weight_of(&[0]).unwrap() - 0.3).abs() <= 1e-10);
    assert!((ensemble.weight_of(&[1]).unwrap() - 0.7).abs() <= 1e-10);
    // the kick flipped each branch's system state relative to its record
    for (i, branch) in ensemble.branches.iter().enumerate() {
        let dense = ensemble.branch_state(i).unwrap();
        let sys = dense.find_factor(Role::System { index: 0 }).unwrap();
        assert!(dense.factor_in_basis_state(sys, 1 - branch.labels[0]));
    }
}

#[test]
fn degenerate_recorders_transport_and_spectra() {
    // five recorders, two inside states each: Y has 6 blocks, A matches
    let setup = build_position_detector(5, 2).unwrap();
    let spec_y = spectral(setup.y_op(), 1e-9).unwrap();
    let spec_a = spectral(setup.a_op(), 1e-9).unwrap();
    assert_eq!(spec_y.degeneracy_blocks().len(), 6);
    assert_eq!(spec_a.degeneracy_blocks().len(), 6);
    for (a, y) in spec_a.eigenvalues().iter().zip(spec_y.eigenvalues()) {
        assert!((a - y).abs() <= 1e-9);
    }

    let psi = psi_from_weights(&[0.1, 0.2, 0.3, 0.25, 0.15]);
    let transported = transport_state(&setup, &psi).unwrap();
    let (weights, outside) = setup.recorder_weights(&transported).unwrap();
    for (b, w) in weights.iter().enumerate() {
        assert!((w - psi.amplitudes()[b].norm_sqr()).abs() <= 1e-12);
    }
    assert!(outside <= 1e-15);
}

#[test]
fn branch_count_follows_the_sequence_lattice() {
    let psi = psi_from_weights(&[0.2, 0.5, 0.3]);
    let setup = build_position_detector(3, 1).unwrap();
    let mut state = prepare_chain(&psi, 3, 3, false).unwrap();
    for _ in 0..3 {
        state = measure(&state, &setup).unwrap();
    }
    let ensemble = extract_branches(&state, tolerance::INTERFERENCE).unwrap();
    assert_eq!(ensemble.branches.len(), 27);
    let heaviest = ensemble
        .branches
        .iter()
        .max_by(|a, b| a.weight.partial_cmp(&b.weight).unwrap())
        .unwrap();
    assert_eq!(heaviest.labels, vec![1, 1, 1]);
    assert!((heaviest.weight - 0.125).abs() <= 1e-12);
}
