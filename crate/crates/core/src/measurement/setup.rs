//! Position-detector model: the transport unitary U, the pointer operator Y,
//! and the measured operator A = U†YU.
//!
//! The detector is an array of particle recorders. Y assigns one degenerate
//! eigenvalue to the states inside each recorder and a distinct value to the
//! outside. The incoming eigenstates of the measured quantity B are spread
//! over space; U transports the eigenstate carrying value b into recorder b,
//! so U maps the eigenvectors of A onto eigenvectors of Y with the same
//! eigenvalue.
//!
//! Concretely, with R recorders of s states each plus one outside state:
//! recorder b occupies rows b·s..(b+1)·s, its internal orthonormal family is
//! a size-s discrete Fourier basis, and the incoming A/B eigenbasis is a
//! full discrete Fourier basis over the inside subspace (a stand-in for the
//! spread-out wavefunctions a real apparatus would see). U is the product of
//! the two basis changes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{OperatorMatrix, StateVector};

/// Y-eigenvalue assigned to the outside of every recorder.
pub const OUTSIDE_Y_EIGENVALUE: f64 = -1.0;

/// B-eigenvalue reported when no recorder fires.
pub const OUTSIDE_B_EIGENVALUE: f64 = -1.0;

/// One recorder: its Y block, its label, and the B-eigenvalue it reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RecorderEntry {
    /// Recorder label, also the outcome index.
    pub label: usize,
    pub y_eigenvalue: f64,
    pub b_eigenvalue: f64,
    /// Rows of this recorder's block in the detector basis.
    pub block: Vec<usize>,
}

/// The operators of one measurement arrangement.
#[derive(Debug, Clone)]
pub struct MeasurementSetup {
    recorder_count: usize,
    states_per_recorder: usize,
    y_op: OperatorMatrix,
    transport: OperatorMatrix,
    a_op: OperatorMatrix,
    b_op: OperatorMatrix,
    b_basis: DMatrix<Complex64>,
    recorder_map: Vec<RecorderEntry>,
    post_kick: Option<OperatorMatrix>,
}

fn dft(dim: usize) -> DMatrix<Complex64> {
    let scale = (dim as f64).sqrt().recip();
    DMatrix::from_fn(dim, dim, |row, col| {
        Complex64::from_polar(
            scale,
            2.0 * std::f64::consts::PI * (row * col % dim) as f64 / dim as f64,
        )
    })
}

/// Builds a detector with `recorder_count` recorders of `states_per_recorder`
/// inside states each, plus one outside state.
pub fn build_position_detector(
    recorder_count: usize,
    states_per_recorder: usize,
) -> Result<MeasurementSetup> {
    if recorder_count == 0 || states_per_recorder == 0 {
        return Err(Error::InvalidArgument(
            "recorder_count and states_per_recorder must be ≥ 1".into(),
        ));
    }
    let inside = recorder_count * states_per_recorder;
    let dim = inside + 1;
    if dim > 1 << 12 {
        return Err(Error::Capacity {
            requested: dim,
            cap: 1 << 12,
        });
    }

    // Y: eigenvalue b+1 on recorder b's block, OUTSIDE on the last row
    let mut y_values = Vec::with_capacity(dim);
    for b in 0..recorder_count {
        y_values.extend(std::iter::repeat_n((b + 1) as f64, states_per_recorder));
    }
    y_values.push(OUTSIDE_Y_EIGENVALUE);
    let y_op = OperatorMatrix::diagonal(&y_values);

    // B eigenvalues in the same block layout
    let mut b_values = Vec::with_capacity(dim);
    for b in 0..recorder_count {
        b_values.extend(std::iter::repeat_n(b as f64, states_per_recorder));
    }
    b_values.push(OUTSIDE_B_EIGENVALUE);

    // recorder-internal Fourier family: block-diagonal, outside untouched
    let mut v_y = DMatrix::<Complex64>::zeros(dim, dim);
    let block_dft = dft(states_per_recorder);
    for b in 0..recorder_count {
        let base = b * states_per_recorder;
        for i in 0..states_per_recorder {
            for j in 0..states_per_recorder {
                v_y[(base + i, base + j)] = block_dft[(i, j)];
            }
        }
    }
    v_y[(inside, inside)] = Complex64::new(1.0, 0.0);

    // incoming A/B eigenbasis: Fourier over the whole inside subspace
    let mut b_basis = DMatrix::<Complex64>::zeros(dim, dim);
    let inside_dft = dft(inside);
    for i in 0..inside {
        for j in 0..inside {
            b_basis[(i, j)] = inside_dft[(i, j)];
        }
    }
    b_basis[(inside, inside)] = Complex64::new(1.0, 0.0);

    let transport = OperatorMatrix::new(&v_y * b_basis.adjoint())?;
    debug_assert!(transport.is_unitary());

    let a_op =
        OperatorMatrix::new(transport.entries().adjoint() * y_op.entries() * transport.entries())?;
    let b_diag = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(b_values[i], 0.0)
        } else {
            Complex64::default()
        }
    });
    let b_op = OperatorMatrix::new(&b_basis * b_diag * b_basis.adjoint())?;

    let recorder_map = (0..recorder_count)
        .map(|b| RecorderEntry {
            label: b,
            y_eigenvalue: (b + 1) as f64,
            b_eigenvalue: b as f64,
            block: (b * states_per_recorder..(b + 1) * states_per_recorder).collect(),
        })
        .collect();

    Ok(MeasurementSetup {
        recorder_count,
        states_per_recorder,
        y_op,
        transport,
        a_op,
        b_op,
        b_basis,
        recorder_map,
        post_kick: None,
    })
}

impl MeasurementSetup {
    /// Number of distinct measurable values (one per recorder).
    pub fn outcome_count(&self) -> usize {
        self.recorder_count
    }

    pub fn states_per_recorder(&self) -> usize {
        self.states_per_recorder
    }

    /// Dimension of the transport-level Hilbert space, R·s + 1.
    pub fn detector_dim(&self) -> usize {
        self.recorder_count * self.states_per_recorder + 1
    }

    /// Detector/observer slot dimension in chain composites: blank + records.
    pub fn slot_dim(&self) -> usize {
        self.recorder_count + 1
    }

    pub fn y_op(&self) -> &OperatorMatrix {
        &self.y_op
    }

    pub fn transport(&self) -> &OperatorMatrix {
        &self.transport
    }

    /// A = U†YU, the operator actually measured by the arrangement.
    pub fn a_op(&self) -> &OperatorMatrix {
        &self.a_op
    }

    pub fn b_op(&self) -> &OperatorMatrix {
        &self.b_op
    }

    pub fn recorder_map(&self) -> &[RecorderEntry] {
        &self.recorder_map
    }

    pub fn b_eigenvalue(&self, outcome: usize) -> f64 {
        self.recorder_map[outcome].b_eigenvalue
    }

    /// The j-th A-eigenvector destined for recorder b.
    pub fn a_eigenvector(&self, recorder: usize, j: usize) -> Vec<Complex64> {
        let col = recorder * self.states_per_recorder + j;
        self.b_basis.column(col).iter().copied().collect()
    }

    /// Optional unitary applied to the system after each measurement,
    /// realizing |b⟩′ = K|b⟩. Defaults to none (non-demolition).
    pub fn post_kick(&self) -> Option<&OperatorMatrix> {
        self.post_kick.as_ref()
    }

    pub fn with_post_kick(mut self, kick: OperatorMatrix) -> Result<Self> {
        if kick.dim() != self.recorder_count {
            return Err(Error::ShapeMismatch(format!(
                "kick dim {} does not match outcome count {}",
                kick.dim(),
                self.recorder_count
            )));
        }
        if !kick.is_unitary() {
            return Err(Error::NotUnitary {
                max_deviation: crate::hilbert::unitarity_deviation(kick.entries()),
            });
        }
        self.post_kick = Some(kick);
        Ok(self)
    }

    /// Squared-norm weight inside each recorder block plus the outside state.
    pub fn recorder_weights(&self, transported: &StateVector) -> Result<(Vec<f64>, f64)> {
        if transported.len() != self.detector_dim() {
            return Err(Error::ShapeMismatch(format!(
                "state length {} does not match detector dim {}",
                transported.len(),
                self.detector_dim()
            )));
        }
        let amps = transported.amplitudes();
        let weights = self
            .recorder_map
            .iter()
            .map(|entry| entry.block.iter().map(|&row| amps[row].norm_sqr()).sum())
            .collect();
        let outside = amps[self.detector_dim() - 1].norm_sqr();
        Ok((weights, outside))
    }
}

/// Sends Σ_b c_b |b⟩ through the transport unitary: the result is
/// Σ_b c_b |y_b⟩ with each term supported inside its recorder block.
///
/// `psi` holds the coefficients c_b over the relevant B eigenstates, one per
/// recorder; states outside that span are not handled by this arrangement.
pub fn transport_state(setup: &MeasurementSetup, psi: &StateVector) -> Result<StateVector> {
    if psi.component_count() != 1 || psi.len() != setup.outcome_count() {
        return Err(Error::Contract(format!(
            "state must supply one coefficient per recorder ({}), got {}",
            setup.outcome_count(),
            psi.len()
        )));
    }
    let dim = setup.detector_dim();
    let s = setup.states_per_recorder;
    let mut out = vec![Complex64::default(); dim];
    // U(Σ c_b |a_{b,0}⟩) = Σ c_b w_{b,0}: column b·s of the recorder family
    for (b, &c_b) in psi.amplitudes().iter().enumerate() {
        let scale = (s as f64).sqrt().recip();
        for k in 0..s {
            out[b * s + k] += c_b * Complex64::new(scale, 0.0);
        }
    }
    StateVector::from_amplitudes(out)
}
