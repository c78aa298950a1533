use thiserror::Error;

/// Broad classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data.
    InvalidInput,
    /// Well-formed input outside the domain of an operation.
    Domain,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a numerically exceptional pair: {0}")]
    NotExceptionalPair(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("no zero-type rotation exists for this list")]
    NoZeroTypeRotation,

    #[error("member {index} restricts with degree {degree} outside {{-1, 0}}; rotate first")]
    RotateFirst { index: usize, degree: String },

    #[error("forbidden pair (O(D), O(D+e+K)) at positions {first} and {second} on a surface with K^2 = 1")]
    ForbiddenPair { first: usize, second: usize },

    #[error("iteration cap of {0} reached without convergence")]
    IterationCap(usize),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch { .. } | Error::InvalidInput(_) => ErrorKind::InvalidInput,
            Error::Stage { source, .. } => source.kind(),
            _ => ErrorKind::Domain,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
