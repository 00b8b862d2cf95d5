use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("qudit {0} is acted on by the active part of the circuit")]
    TargetNotIdle(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("trigonometric sum {value} is not within {tolerance} of an integer")]
    IntegralityFailure { value: f64, tolerance: f64 },
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("the single-wall reduction only holds for noiseless rules")]
    NoisyRuleRejected,
    #[error("subleading transfer eigenvalue {0} has modulus >= 1")]
    DivergentEigenvalue(f64),
    #[error("channel is not trace preserving (residual {0:e})")]
    NotTracePreserving(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid indices: {0}")]
    InvalidIndices(String),
    #[error("combinatorial blowup: {0}")]
    CombinatorialBlowup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
