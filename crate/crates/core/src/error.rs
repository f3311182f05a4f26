//! Structured errors for degenerate geometry and spectral-structure violations.

use thiserror::Error;

/// Library-wide error type. Degeneracies carry the offending index where the
/// operation contract names one; nothing is ever perturbed or retried silently.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate span: the {count} selected points at index {index} are linearly dependent")]
    DegenerateSpan { index: i64, count: usize },

    #[error("degenerate intersection at vertex index {index}: expected rank {expected}, got {got}")]
    DegenerateIntersection { index: i64, expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("genericity failure at window index {index}")]
    GenericityFailure { index: i64 },

    #[error("no n-periodic coefficient array over Q: {0}")]
    NonPeriodic(String),

    #[error("division by zero evaluating {0}")]
    DivisionByZero(String),

    #[error("polygon is not corrugated (rank condition fails at index {index})")]
    NotCorrugated { index: i64 },

    #[error("polygon is not ({q},{r};{l})-corrugated at index {index}")]
    NotPartiallyCorrugated { q: usize, r: usize, l: usize, index: i64 },

    #[error("random generation exhausted {0} retries without a generic instance")]
    ExhaustedRetries(usize),

    #[error("Lax variant incompatible with polygon: {0}")]
    VariantMismatch(String),

    #[error("spectral structure mismatch: unexpected monomial k^{kexp} lambda^{lexp}")]
    StructureMismatch { kexp: u32, lexp: i64 },

    #[error("discriminant of the spectral function vanishes identically")]
    ZeroDiscriminant,

    #[error("non-simple branching: {0}")]
    NonSimpleBranching(String),

    #[error("lift normalization failed: {0}")]
    NormalizationFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
