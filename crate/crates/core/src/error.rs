use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Invalid` covers malformed descriptors and precondition violations;
/// `Capacity` covers every budget/overflow condition (enumeration domains,
/// coordinate arithmetic, join expansion); `ExactBudget` is the dedicated
/// signal that the exact subcover solver refused an instance rather than
/// silently falling back to the greedy answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error(
        "exact subcover search over budget: {free} free elements remain after reduction \
         (limit {limit}); rerun in greedy mode or shrink the scanned range"
    )]
    ExactBudget { free: usize, limit: usize },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    /// True for the error classes that mean "the request was too large",
    /// as opposed to "the request was malformed".
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_) | Error::ExactBudget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
