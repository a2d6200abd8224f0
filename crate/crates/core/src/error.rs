use thiserror::Error;

use crate::operator::WViolation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("polynomial of degree {degree} cannot be represented at degree {target}")]
    DegreeTooHigh { degree: usize, target: usize },

    #[error("weight coefficient {index} is not strictly positive")]
    NonPositiveWeight { index: usize },

    #[error("weight coefficient {index} is not finite")]
    NonFiniteWeight { index: usize },

    #[error("{0}")]
    WViolation(WViolation),

    #[error("invalid node sequence: {0}")]
    InvalidNodes(String),

    #[error("operator degree must be at least {min}, got {n}")]
    DegreeTooSmall { n: usize, min: usize },

    #[error("sample {index} of the weight function is not strictly positive")]
    NonPositiveSample { index: usize },

    #[error("both sides of the ratio vanish at the endpoint x = {0}")]
    DegeneratePoint(f64),

    #[error("function '{0}' has no second derivative")]
    MissingSecondDerivative(String),
}

pub type Result<T> = std::result::Result<T, Error>;

