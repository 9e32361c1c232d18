use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable `{0}` has no value in the point")]
    MissingVariable(String),
    #[error("strict inequalities are not supported by this operation")]
    StrictNotSupported,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("size limit of {limit} exceeded while {during}")]
    SizeLimit { limit: usize, during: &'static str },
    #[error("all coefficients of the equation are zero")]
    AllZeroCoefficients,
    #[error("witness point is not in the relation: {0}")]
    WitnessNotInRelation(String),
    #[error("the unary relation excludes no interval of positive length inside (0,1)")]
    NoExcludedInterval,
    #[error("exclusion condition violated: {0}")]
    ConditionViolated(String),
    #[error("invalid exclusion parameters: {0}")]
    InvalidParams(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
