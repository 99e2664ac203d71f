use alloc::string::String;

/// Errors reported by the aggregation and ranking routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A score was NaN or infinite; `index` names the offending position.
    #[error("non-finite {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Distance computations require tie-free rankings.
    #[error("ranking contains ties; resolve them with a strict tie policy first")]
    TiedRanks,

    /// All ranks tied in one input, so the tau denominator vanishes.
    #[error("degenerate ranking: all ranks tied")]
    DegenerateRanking,

    #[error("need at least {min} systems, got {got}")]
    TooFewSystems { got: usize, min: usize },

    /// Exact Kemeny solvers refuse instances beyond their size limit.
    #[error("{got} systems exceeds the exact-solver limit of {limit}; use branch-and-bound or Borda")]
    TooManySystems { got: usize, limit: usize },

    #[error("mean aggregation undefined across mixed-direction metrics")]
    MixedDirections,

    /// Guard in the approximation-ratio computation; Borda satisfies
    /// unanimity, so this cannot trigger for well-formed inputs.
    #[error("unanimity violated: exact objective is zero but the approximate objective is not")]
    UnanimityViolated,

    /// Validation failure with formatted context (shape, parameter range,
    /// out-of-range index, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
