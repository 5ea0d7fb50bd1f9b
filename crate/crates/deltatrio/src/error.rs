//! Crate-wide error type.

/// Errors produced by the numerical pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An input parameter violates its domain (non-positive mass, angle out
    /// of range, degenerate kernel angle, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A kernel evaluated to a non-finite value while assembling a matrix.
    #[error("non-finite kernel value for {label} at nodes (p, q) = ({p:.6e}, {q:.6e})")]
    NonFiniteKernel { label: String, p: f64, q: f64 },

    /// Adaptive integration exhausted its subdivision budget.
    #[error("integration did not converge: {context} (best estimate {best:.17e}, error estimate {err_estimate:.3e})")]
    IntegrationDidNotConverge {
        context: String,
        best: f64,
        err_estimate: f64,
    },

    /// A double integral kept growing under refinement.
    #[error("integral appears divergent: {0}")]
    DivergentIntegral(String),

    /// The symmetric eigensolver failed to converge (should not happen for
    /// finite symmetric input).
    #[error("eigensolver did not converge for {label} (dimension {n})")]
    EigenDidNotConverge { label: String, n: usize },

    /// Root bracketing failed; carries a diagnostic scan description.
    #[error("root bracketing failed: {0}")]
    BracketFailure(String),

    /// The 2-D grid oracle's iterative solver failed to converge.
    #[error("grid oracle did not converge: {0}")]
    OracleDidNotConverge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
