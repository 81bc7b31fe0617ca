use thiserror::Error;

use crate::group::Side;

/// Errors raised by the modspace toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group factors must be a non-empty list of integers >= 2, got {0:?}")]
    InvalidFactors(Vec<usize>),

    #[error("element {residues:?} is not valid for factors {factors:?}")]
    InvalidElement { residues: Vec<usize>, factors: Vec<usize> },

    #[error("group mismatch: {left:?} vs {right:?}")]
    GroupMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("expected an object on the {expected} side, found {found}")]
    SideMismatch { expected: Side, found: Side },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("spaces live in different fiber contexts")]
    ContextMismatch,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("generator set is empty")]
    EmptyGenerators,

    #[error("group order {order} exceeds the dense-oracle limit {limit}")]
    SizeGuard { order: usize, limit: usize },

    #[error("sequence is not Cauchy at tolerance {tol:e}: final consecutive distance {last:e}")]
    NotCauchy { tol: f64, last: f64 },
}

impl Error {
    /// True for failures of numerical guards (size caps, non-convergent input),
    /// as opposed to malformed input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. } | Error::NotCauchy { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
