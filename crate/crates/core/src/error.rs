use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("function is not absolutely continuous: jump at node x = {0}")]
    NotAbsolutelyContinuous(f64),

    #[error("plateau index i_n = {i} out of range for n = {n} (need 1 <= i_n < n)")]
    PlateauIndex { n: usize, i: i64 },

    #[error("undefined functional: T_n = {0} vanishes")]
    UndefinedFunctional(f64),

    #[error("selection exhausted at k = {k}: no admissible index up to scan cap {cap}")]
    SelectionExhausted { k: usize, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
