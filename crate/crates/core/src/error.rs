use thiserror::Error;

use crate::lang::{LexError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid machine parameters: {0}")]
    Params(String),

    #[error("capacity exceeded: {what} needs {needed} words but only {available} are available")]
    Capacity {
        what: &'static str,
        needed: usize,
        available: usize,
    },

    #[error("value {value} does not fit in a {width}-bit word")]
    WordOverflow { value: u64, width: u32 },

    #[error(transparent)]
    Lex(#[from] LexError),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("the language has no programs of length {0}")]
    EmptyLanguage(usize),

    #[error("refusing to enumerate {count} programs of length {length}; the limit is {limit}")]
    TooManyToEnumerate {
        length: usize,
        count: String,
        limit: u64,
    },

    #[error("malformed program: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
