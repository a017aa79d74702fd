use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes surfaced by the calculator. Every variant carries the datum
/// that triggered it so callers can report something actionable.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// A membership search exhausted its node budget. Neither `true` nor
    /// `false` was established.
    #[error("search budget exhausted after {explored} nodes (budget {budget})")]
    BudgetExceeded { explored: u64, budget: u64 },

    /// An operation that needs a finite group was handed an infinite one.
    #[error("{operation} requires a finite group, but the group has free rank {free_rank}")]
    NotFinite { operation: &'static str, free_rank: usize },

    /// The group order exceeds the configured enumeration limit.
    #[error("group order {order} exceeds the size limit {limit}")]
    SizeLimit { order: u64, limit: u64 },

    /// The requested operation is not decidable for this set representation.
    #[error("{operation} is not supported for this representation: {detail}")]
    UnsupportedRepresentation { operation: &'static str, detail: String },

    /// An operation specific to the violated regime of the exactness
    /// condition was invoked while the condition holds.
    #[error("{operation} requires a violated exactness condition, but the condition is satisfied")]
    ConditionNotViolated { operation: &'static str },

    /// An internal consistency guarantee failed; report this as a bug.
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),

    /// Malformed input data.
    #[error("invalid input: {0}")]
    Validation(String),
}
