use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial kinds do not match")]
    KindMismatch,
    #[error("multiplicative shift requires a q-base")]
    MissingQBase,
    #[error("polynomial is not divisible; remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("polynomial is not in the image of the sinusoidal coordinate: {0}")]
    NotInEtaImage(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("degree {requested} exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("N = {n} is smaller than max(D) = {max}")]
    NTooSmall { n: i64, max: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
