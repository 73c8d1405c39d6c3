use thiserror::Error;

use crate::numfield::Backend;

#[derive(Debug, Clone, Error, PartialEq)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix of shape ({rows}, {cols}) is not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("{op} is not supported on the {backend} backend")]
    BackendUnsupported { op: &'static str, backend: Backend },
    #[error("{0} did not converge")]
    ConvergenceFailure(&'static str),
    #[error("zero matrix has no full-rank factorization")]
    ZeroMatrix,
    #[error("rank decision ambiguous: {0}")]
    RankDecisionAmbiguous(String),
    #[error("Gram matrix is singular: the full-rank factorization has the wrong rank")]
    SingularGram,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is nilpotent: the core part is empty")]
    NilpotentInput,
    #[error("index {index} exceeds 1: group/core inverse does not exist")]
    IndexTooLarge { index: usize },
    #[error("system is inconsistent: {0}")]
    Inconsistent(String),
    #[error("algorithm {alg} is not available for {op}")]
    UnsupportedAlgorithm { op: &'static str, alg: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("full-rank chain exceeded depth {0}")]
    ChainDepthExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Failures caused by floating-point decisions rather than by the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure(_)
                | Error::RankDecisionAmbiguous(_)
                | Error::SingularGram
                | Error::ChainDepthExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
