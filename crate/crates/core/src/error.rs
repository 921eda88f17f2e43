use thiserror::Error;

use crate::numbers::NumberError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("state space too large: {0} states exceeds the cap of {1}")]
    StateSpace(usize, usize),
    #[error("graph too large for exhaustive enumeration: {0} vertices (limit {1})")]
    GraphTooLarge(usize, usize),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
