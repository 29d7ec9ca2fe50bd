use thiserror::Error;

use crate::problem::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {}", join_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    #[error("precedence violated: passenger {passenger} is dropped at floor {destination} before being picked up at floor {call}")]
    PrecedenceViolated {
        passenger: usize,
        call: usize,
        destination: usize,
    },

    #[error("instance too large for exhaustive search: {floors} floors exceeds limit of {max}")]
    TooLarge { floors: usize, max: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("mismatched gene sets between parents")]
    MismatchedGenes,

    #[error("sequence of length {len} is too short, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("position has {got} components, expected {expected}")]
    PositionLength { expected: usize, got: usize },
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
