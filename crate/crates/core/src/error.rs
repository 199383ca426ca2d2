use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

/// A 1-based position inside an SMT-LIB source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl Location {
    pub fn new(line: usize, col: usize) -> Self {
        Self { line, col }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("{loc}: lexical error: {msg}")]
    Lex { loc: Location, msg: String },
    #[error("{loc}: parse error: {msg}")]
    Parse { loc: Location, msg: String },
    #[error("{loc}: sort error: {msg}")]
    Sort { loc: Location, msg: String },
    #[error("{loc}: unsupported: {msg}")]
    Unsupported { loc: Location, msg: String },
    #[error("{0}")]
    Command(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Source location, for errors raised while reading a script.
    pub fn location(&self) -> Option<Location> {
        match self {
            Error::Lex { loc, .. }
            | Error::Parse { loc, .. }
            | Error::Sort { loc, .. }
            | Error::Unsupported { loc, .. } => Some(*loc),
            _ => None,
        }
    }

    /// Attach a location to an error coming out of the arithmetic layer.
    pub(crate) fn at(self, loc: Location) -> Error {
        match self {
            Error::SortMismatch(msg) => Error::Sort { loc, msg },
            Error::InvalidInput(msg) => Error::Parse { loc, msg },
            Error::NotPrime(p) => Error::Sort {
                loc,
                msg: format!("field order index {p} is not prime"),
            },
            other => other,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
