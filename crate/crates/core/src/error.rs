//! Error taxonomy shared across the engine.

use thiserror::Error;

/// Errors surfaced by the mutation engine and search layers.
///
/// `InvariantViolation` deserves a note: it reports a failure of a
/// mathematical identity that provably holds for correct inputs
/// (sign-coherence, tropical duality, Laurent divisibility). Seeing one
/// means the engine itself is wrong, so the offending mutation history
/// is attached for reproduction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("direction {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("integer overflow during exact arithmetic")]
    Overflow,

    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,

    #[error("matrix is not unimodular (det = {det})")]
    NonUnimodular { det: i64 },

    #[error("exact division failed: {dividend} is not divisible by {divisor}")]
    InexactDivision { dividend: String, divisor: String },

    #[error("malformed permutation: {0}")]
    BadPermutation(String),

    #[error("seeds have different roots")]
    RootMismatch,

    #[error("variable set is not contained in the witness cluster: {0}")]
    VariableSetNotInCluster(String),

    #[error("operation requires symbolic cluster tracking")]
    SymbolicDataRequired,

    #[error("invariant violation after history {history:?}: {detail}")]
    InvariantViolation { detail: String, history: Vec<usize> },

    #[error("invalid seed data: {0}")]
    InvalidSeed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for invariant reports raised while mutating a seed.
    pub fn invariant(detail: impl Into<String>, history: &[usize]) -> Self {
        Error::InvariantViolation {
            detail: detail.into(),
            // reported 1-based to match the CLI word syntax
            history: history.iter().map(|k| k + 1).collect(),
        }
    }
}
