use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parameter triple (alpha, beta, r) must not be (0, 0, 0)")]
    DegenerateParams,
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("series domain error: {0}")]
    SeriesDomain(String),
    #[error("enumeration size {n} exceeds the guard {limit}")]
    EnumerationTooLarge { n: usize, limit: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence within {0} terms")]
    NonConvergence(usize),
    #[error("cannot parse {0:?} as a rational (expected p/q or an integer)")]
    ParseRational(String),
    #[error("unknown {what}: {name:?}")]
    Unknown { what: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
