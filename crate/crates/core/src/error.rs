use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("element {elem} is not in a field of order {order}")]
    NotInField { elem: u32, order: u32 },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field of order {0} is not a quadratic extension")]
    NotExtension(u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("infeasible: {what} needs {needed} steps, budget is {budget}")]
    Infeasible {
        what: String,
        needed: u128,
        budget: u128,
    },
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
