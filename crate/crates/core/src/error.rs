use alloc::string::String;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{func}: argument out of domain: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A probability vector or distribution parameter is invalid.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Histogram or sample violates its structural invariants.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// The estimator needs at least `required` observations.
    #[error("{estimator} needs n >= {required}, got n = {n}")]
    SampleTooSmall {
        estimator: &'static str,
        required: u64,
        n: u64,
    },

    /// A sampled symbol has zero mass under the model.
    #[error("symbol {symbol} has zero probability under the model")]
    ModelMismatch { symbol: u64 },

    /// An exhaustive enumeration would exceed its size cap.
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
