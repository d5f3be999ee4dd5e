use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u32),
    #[error("operands live over different fields (p = {0} vs p = {1})")]
    FieldMismatch(u32, u32),
    #[error("operands have different modes ({0} vs {1})")]
    ModeMismatch(crate::Mode, crate::Mode),
    #[error("constant terms are not allowed in nonunital mode")]
    ConstantInNonunital,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("blade index {index} out of range for {n} generators")]
    BladeOutOfRange { index: u32, n: u32 },
    #[error("variable x{0} has no assigned value")]
    UnassignedVariable(u32),
    #[error("malformed word: {0}")]
    Malformed(String),
    #[error("polynomial is not homogeneous of multidegree {0}")]
    ComponentMismatch(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
