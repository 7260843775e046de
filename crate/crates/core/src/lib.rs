//! Correlation measures for Gaussian states of continuous-variable systems.
//!
//! - [`maxcorr`]: quantum maximal correlation of two-mode states.
//! - [`gaussian_maxcorr`]: maximal correlation restricted to homodyne
//!   (hermitian, linear) observables, for arbitrary bipartitions.
//! - [`ribbon`]: maximal-correlation ribbon membership, quantum and Gaussian.
//! - [`catalog`]: named state families and local-transformation verdicts.
//!
//! Everything works at the level of first and second moments in `xpxp`
//! ordering, with the vacuum covariance equal to the identity.

// `!(x > a)` is used on purpose so that NaN lands in the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod gaussian_maxcorr;
pub mod gaussian_ops;
pub mod linalg;
pub mod maxcorr;
pub mod phase_space;
pub mod ribbon;
pub mod sampling;
pub mod standard_form;
pub mod tol;
pub mod verify;

pub use catalog::{
    ca_state, cc_ca_comparison, cc_state, lossy_retrieval, lst_infeasibility, tmsv_state,
    werner_mu, FamilyComparison, FeasibilityVerdict, Measure, Verdict,
};
pub use error::{Error, Result};
pub use gaussian_maxcorr::{gaussian_maximal_correlation, v_parameter, GaussianCorrelationReport};
pub use gaussian_ops::{
    apply_channel, apply_unitary, lossy_channel, rotation, squeeze, GaussianChannel,
    GaussianUnitary,
};
pub use maxcorr::{maximal_correlation, CorrelationReport};
pub use phase_space::{symplectic_form, GaussianState, ModePartition, PhysicalityCheck};
pub use ribbon::{in_gaussian_ribbon, in_ribbon, RibbonVerdict, ThetaPoint};
pub use standard_form::{bipartite_standard_form, local_standard_form, StandardFormResult};
