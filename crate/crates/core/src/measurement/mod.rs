//! The measurement chain: transport into recorders, detector and observer
//! entanglement, environment dephasing, branch decomposition, and the
//! envariance computation.
//!
//! All operations are pure functions on immutable values; concurrent
//! experiment instances share nothing.

mod branches;
mod chain;
mod composite;
mod envariance;
mod setup;

pub use branches::{extract_branches, Branch, BranchEnsemble};
pub use chain::{decohere, dephasing_envelope, measure, observe};
pub use composite::{prepare_chain, CompositeState, Factor, Role};
pub use envariance::{envariance_check, EnvarianceSetup};
pub use setup::{
    build_position_detector, transport_state, MeasurementSetup, RecorderEntry,
    OUTSIDE_B_EIGENVALUE, OUTSIDE_Y_EIGENVALUE,
};
