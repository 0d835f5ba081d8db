// Range validations use the !(x > 0.0) form so NaN parameters fail them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for unitary measurement chains and branch statistics.
//!
//! The crate is organized around four subsystems:
//!
//! - [`hilbert`] — normalized state vectors, dense operators, spectral
//!   decomposition, and unitary evolution.
//! - [`measurement`] — position-detector models, detector/observer
//!   entanglement, environment dephasing, and branch decomposition.
//! - [`stats`] — exact and asymptotic branch-count distributions, coarse
//!   frequency operators, concentration bounds, and the frequency estimator.
//! - [`wavepacket`] — 1-D grid propagation and the density-interpretation
//!   checks (continuity, perturbation, Ehrenfest, nodal exclusion,
//!   two-particle marginal).

pub mod error;
pub mod hilbert;
pub mod measurement;
pub mod stats;
pub mod tolerance;
pub mod wavepacket;

pub use error::{Error, Result};
