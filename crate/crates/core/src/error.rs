use thiserror::Error;

/// Errors raised by the kernels and their planners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("particle {index} lies outside the domain")]
    OutOfDomain { index: usize },

    #[error("singular translation: source and target centers coincide")]
    SingularTranslation,

    #[error("plan references source box {source_box} which has no expansion")]
    PlanConsistency { source_box: usize },

    #[error("malformed chip spec: {0}")]
    ChipSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
