use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown code `{0}` (expected one of: five, five_qubit, steane)")]
    UnknownCode(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("instance too large for exact enumeration: {0}")]
    TooLarge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Dimension { expected, actual })
    }
}
