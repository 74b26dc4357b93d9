use thiserror::Error;

/// Errors raised while building or combining measures, generators and copulas.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("invalid copula: {0}")]
    InvalidCopula(String),

    #[error("candidate {index} is not a copula for the joint: {reason}")]
    InvalidCandidate { index: usize, reason: String },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("quadrature did not converge: order {order} gave {value}, order {coarse_order} gave {coarse_value}")]
    NonConvergence {
        order: usize,
        value: f64,
        coarse_order: usize,
        coarse_value: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
