//! Global numerical tolerances.
//!
//! Equality of states is judged at a tighter tolerance than unitarity or
//! spectral reconstruction, which accumulate rounding through matrix
//! factorizations. Operations that take an explicit tolerance parameter
//! default to these values.

/// Squared-norm equality and normalization checks.
pub const EQUALITY: f64 = 1e-12;

/// Unitarity and hermiticity of operator matrices, spectral reconstruction.
pub const UNITARITY: f64 = 1e-10;

/// Grouping of near-equal eigenvalues into degeneracy blocks.
pub const DEGENERACY: f64 = 1e-9;

/// Off-diagonal branch interference below which branching counts as decohered.
pub const INTERFERENCE: f64 = 1e-3;

/// Largest total amplitude-array length `tensor` will produce.
pub const DIMENSION_CAP: usize = 1 << 22;
