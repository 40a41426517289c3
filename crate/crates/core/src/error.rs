use alloc::string::String;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("non-finite amplitude at basis index {index}")]
    NonFinite { index: usize },
    #[error("distribution is invalid: {0}")]
    InvalidDistribution(String),
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("unsupported settings: {0}")]
    UnsupportedSettings(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("parse error: {0}")]
    Parse(String),
}
