use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed oracle answer to {query}: {reason}")]
    Malformed { query: String, reason: String },

    #[error("no base transition factor from {a} to {b}: a prime of {a} does not divide {b}")]
    MissingTransitionFactor { a: u64, b: u64 },

    #[error("{0} is not a best approximant of the represented number")]
    NotAnApproximant(String),

    #[error("non-integral continued fraction step at term {term}: {num} is not divisible by {den}")]
    NonIntegralStep { term: u64, num: String, den: String },

    #[error("conversion from {from} to {to} is blocked: {reason}")]
    Blocked { from: String, to: String, reason: String },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn malformed(query: impl ToString, reason: impl Into<String>) -> Self {
        Error::Malformed { query: query.to_string(), reason: reason.into() }
    }
}
