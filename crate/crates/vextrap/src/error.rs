//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by construction, evaluation, solving, and file I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    /// A sequence or scale-family index outside the available range.
    #[error("index {index} out of range [0, {max}] ({context})")]
    Range {
        index: usize,
        max: usize,
        context: &'static str,
    },

    /// A pivot fell below the singularity threshold during elimination.
    #[error("linear system numerically singular: pivot {pivot:.3e} below threshold {threshold:.3e} at elimination step {step}")]
    SingularSystem {
        step: usize,
        pivot: f64,
        threshold: f64,
    },

    /// Scale-family parameters violate the construction rules.
    #[error("invalid scale family at index {index}: {reason}")]
    InvalidScale { index: usize, reason: String },

    /// Malformed input file.
    #[error("parse error at {path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    /// A ratio estimator hit a zero denominator.
    #[error("zero denominator in ratio at index {m}")]
    ZeroDenominator { m: usize },

    /// A normalized-determinant row factor vanished.
    #[error("degenerate normalization: weighted difference of scale {i} vanishes at index {m}")]
    DegenerateNormalization { i: usize, m: usize },

    /// A scale index below the smallest admissible value for the operation.
    #[error("scale index {i} must be at least {min} here")]
    Index { i: usize, min: usize },

    /// An asymptotic profile that cannot support the requested quantity.
    #[error("degenerate profile: {reason}")]
    DegenerateProfile { reason: String },

    /// Too few data points for a measurement.
    #[error("insufficient data: need at least {need} points, got {got}")]
    InsufficientData { need: usize, got: usize },

    /// A value that must be positive is not.
    #[error("error values must be positive: value {value} at index {n}")]
    NonpositiveError { n: usize, value: f64 },

    /// Configuration or command-line input rejected before any computation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// File-system failure with the path that caused it.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
