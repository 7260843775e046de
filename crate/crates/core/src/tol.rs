//! Default tolerances shared across the crate.

/// Max absolute asymmetry accepted for a covariance matrix.
pub const SYMMETRY: f64 = 1e-10;

/// Min Hermitian eigenvalue of `cov + i*Omega` accepted as physical.
pub const PSD: f64 = 1e-9;

/// Max entry of `S*Omega*S^T - Omega` for a symplectic matrix.
pub const SYMPLECTIC: f64 = 1e-9;

/// A mode whose thermal parameter is within this of 1 is treated as decoupled.
pub const DECOUPLED: f64 = 1e-9;

/// Correlations carried by a decoupled mode above this are reported as inconsistent.
pub const DECOUPLED_CORRELATION: f64 = 1e-6;

/// Ribbon membership boundary tolerance.
pub const RIBBON: f64 = 1e-9;

/// Margin by which a target measure must exceed the resource measure.
pub const FEASIBILITY: f64 = 1e-9;

/// Eigenvalue floor for symmetric inverse square roots.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// PSD threshold and absolute tolerance of the V-parameter bisection.
pub const V_PSD: f64 = 1e-10;
pub const V_BISECTION: f64 = 1e-10;
