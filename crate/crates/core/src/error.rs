use thiserror::Error;

/// Errors raised by the constructors and checked operations of this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic 2 is not supported (q must be odd)")]
    EvenCharacteristic,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime power")]
    NotPrimePower(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field order {0} exceeds the supported bound")]
    FieldTooLarge(u64),
    #[error("no default modulus is known for q = {0}")]
    NoDefaultModulus(u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("group order bound exceeded: q = {q} > {guard}")]
    GroupGuard { q: u32, guard: u32 },
    #[error("element is not in the group")]
    NotInGroup,
    #[error("integrality violated: {0}")]
    Integrality(String),
    #[error("character table failed validation: {0}")]
    CharTable(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
