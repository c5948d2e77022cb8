use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} outside alphabet of rank {rank}")]
    Alphabet { index: usize, rank: usize },

    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("empty relator at line {line}")]
    EmptyRelator { line: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("not a homomorphism: relator {index} (`{relator}`) maps to a nontrivial element")]
    NotAHomomorphism { index: usize, relator: String },

    #[error("word `{0}` is not in the kernel of the retraction")]
    NotInKernel(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("coset table is not closed")]
    TableNotClosed,

    #[error("tower steps are not nested normal subgroups: {0}")]
    NotNested(String),

    #[error("{what} cap exceeded (limit {limit})")]
    CapExceeded { what: &'static str, limit: u64 },

    #[error("time cap of {0:?} exceeded")]
    TimeCap(Duration),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::TimeCap(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
