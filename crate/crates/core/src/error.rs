//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by exact kernels, generators, the learner and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must live on the same hypercube do not.
    #[error("dimension mismatch: expected n={expected}, got n={found}")]
    DimensionMismatch { expected: u32, found: u32 },

    /// An exact path was asked to exceed its configured size cap.
    /// Maps to exit code 3 in the CLI.
    #[error("{what}: n={requested} exceeds the exact-path cap of {limit}")]
    SizeCap {
        what: &'static str,
        limit: u32,
        requested: u32,
    },

    /// An operation that requires a unate input got a function with a
    /// mixed (non-monotone) coordinate.
    #[error("input is not unate: coordinate {coord} is mixed")]
    NotUnate { coord: u32 },

    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The regression solver did not reach its optimality tolerance.
    #[error("solver did not converge: {0}")]
    NotConverged(String),

    /// Serialization of a spec whose terms have no interchange form.
    #[error("spec contains truth-table terms, which the JSON interchange format does not carry")]
    UnsupportedTerm,

    /// Malformed input file.
    #[error("bad file format: {0}")]
    BadFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code the CLI maps this error to (2 = config/usage, 3 = resource cap).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeCap { .. } => 3,
            _ => 2,
        }
    }
}
