use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiceError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A uniform sum cannot exist because the side count is even.
    #[error("impossible for even n = {n}: no real weighting gives a uniform sum")]
    EvenSides { n: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = DiceError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> DiceError {
    DiceError::InvalidInput(msg.into())
}
