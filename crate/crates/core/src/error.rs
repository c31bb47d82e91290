use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource bound exceeded: {0}")]
    Resource(String),

    #[error("element is not rational: {0}")]
    NotRational(String),

    #[error("degenerate quadratic form: {0}")]
    Degenerate(String),

    /// `2k + sig(D)` is odd; the Weil-representation Euler characteristic formula does not apply.
    #[error("parity violation: 2k + sig(D) = {0} is odd")]
    Parity(i64),

    #[error("weight-one dimension unknown for {0} (even signature)")]
    WeightOneUnknown(String),

    #[error("consistency check failed: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
