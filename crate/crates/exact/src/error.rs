use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is singular over the rational-function field")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("negative exponent applied to a zero base (component {0})")]
    ZeroBaseNegativeExponent(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational literal '{0}'")]
    BadRational(String),
}
