//! Finite-dimensional complex linear algebra with strict normalization and
//! unitarity contracts.
//!
//! Everything downstream builds on three pieces: [`StateVector`] (a
//! normalized amplitude array over a product basis), [`OperatorMatrix`]
//! (dense operators with cached hermiticity/unitarity flags), and
//! [`SpectralDecomposition`]. All values are immutable after construction
//! and every operation is pure.

mod operator;
mod spectral;
mod state;

pub use operator::{hermiticity_deviation, unitarity_deviation, OperatorMatrix};
pub use spectral::{evolve, spectral, SpectralDecomposition};
pub use state::{inner, tensor, StateVector};
