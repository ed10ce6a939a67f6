use thiserror::Error;

use crate::model::Decision;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    #[error("sensing decision `{}` has zero probability", .0.as_str())]
    DegenerateDecision(Decision),

    #[error("linear system is singular: {0}")]
    Singular(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
