use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("word of length {len} is too short (need at least {need})")]
    WordTooShort { len: usize, need: usize },
    #[error("empty period")]
    EmptyPeriod,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("unliftable diagram at cell {cell}, time {time}: {msg}")]
    Unliftable { cell: usize, time: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
