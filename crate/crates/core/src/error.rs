use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed caller input: bad bitstring, index out of range, length mismatch.
    #[error("invalid input: {0}")]
    Input(String),

    /// A numerical contract was violated (e.g. non-Hermitian generator).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Operation precondition not met (e.g. state is not pseudo-pure at |00>).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a pseudo-pure state: {reason} (population spread {spread:e})")]
    NotPseudoPure { reason: String, spread: f64 },

    #[error("no root found after {starts} starts (best residual norm {best_residual:e})")]
    NoSolution { starts: usize, best_residual: f64 },

    #[error("relative error undefined: reference matrix is identically zero")]
    UndefinedMetric,

    #[error("tomography protocol incomplete: design matrix rank {rank} < {needed}")]
    ProtocolIncomplete { rank: usize, needed: usize },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("compile error at line {line}: {message}")]
    Compile { line: usize, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
