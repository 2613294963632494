use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectral parameter {mu} coincides with threshold {threshold}")]
    Threshold { mu: f64, threshold: f64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("{count} eigenvalues within {radius:e} of {center}; refusing to pick one")]
    Degenerate {
        center: f64,
        radius: f64,
        count: usize,
    },

    #[error("banded factorization broke down at shift {shift} after {attempts} attempts")]
    Breakdown { shift: f64, attempts: usize },

    #[error("QR iteration stalled at active index {index} after {iterations} iterations")]
    NoConvergence {
        index: usize,
        iterations: usize,
        /// Eigenvalues that did deflate before the failure.
        partial: Vec<Complex64>,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
