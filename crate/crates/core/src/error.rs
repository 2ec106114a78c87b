use thiserror::Error;

/// Errors raised by the reasoning operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("atom `{0}` has no value in the valuation")]
    MissingAtom(String),

    /// Every elementary event with positive weight yields an inconsistent theory.
    #[error("the sources are contradictory: no consistent combination has positive probability")]
    ContradictorySources,

    #[error("{m} rules exceed the enumeration cap of {cap}")]
    SizeLimit { m: usize, cap: usize },

    #[error("gave up after {limit} consecutive rejected samples (sources are nearly contradictory)")]
    RejectionLimit { limit: u64 },

    #[error("atom `{0}` uses the reserved `__q` prefix")]
    ReservedAtom(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid enumeration cap: {0}")]
    InvalidCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
