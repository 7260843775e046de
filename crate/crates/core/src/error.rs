use thiserror::Error;

/// Errors raised by state construction and the correlation measures.
///
/// Structural problems (wrong shapes, bad indices, malformed documents) are
/// kept apart from domain problems (a well-formed but unphysical state).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("covariance matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("state is unphysical: min eigenvalue of cov + i*Omega is {min_eigenvalue:.6e}")]
    Unphysical { min_eigenvalue: f64 },

    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("invalid mode partition: {0}")]
    Partition(String),

    #[error("matrix is not symplectic (max deviation {deviation:.3e})")]
    NotSymplectic { deviation: f64 },

    #[error("invalid Gaussian channel: min eigenvalue of Y + i*Omega - i*X*Omega*X^T is {min_eigenvalue:.6e}")]
    InvalidChannel { min_eigenvalue: f64 },

    #[error("parameter {name} = {value} out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error(
        "mode {mode} has a pure vacuum marginal but carries correlations of size {correlation:.3e}"
    )]
    DecoupledInconsistent { mode: usize, correlation: f64 },

    #[error("singular marginal covariance block")]
    SingularBlock,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for malformed input (shape, index, parse) as opposed to
    /// well-formed input that fails a physical or parameter constraint.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Shape(_)
                | Error::NonFinite(_)
                | Error::ModeOutOfRange { .. }
                | Error::Partition(_)
                | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
