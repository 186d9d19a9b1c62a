use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid characteristic {0}: must be an odd prime")]
    InvalidCharacteristic(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular Möbius transformation")]
    SingularTransform,
    #[error("curve model is singular (f is not squarefree)")]
    SingularCurve,
    #[error("shape mismatch: expected {expected}x{expected}, got {got}x{got}")]
    ShapeError { expected: usize, got: usize },
    #[error("family method unavailable: p = {p} divides 2g+1 = {two_g_plus_one}")]
    MethodUnavailable { p: u32, two_g_plus_one: u32 },
    #[error("field of size {q} too small for genus {g} (need q > 2g+1)")]
    FieldTooSmall { q: u32, g: usize },
    #[error("oracle regime exceeded: {0}")]
    OracleTooLarge(String),
    #[error("p-rank {value} out of range for genus {g}")]
    InvalidPRank { value: usize, g: usize },
    #[error("empty sample")]
    EmptySample,
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("invalid range {lo}..={hi}")]
    InvalidRange { lo: u32, hi: u32 },
    #[error("nothing to do: {0}")]
    NothingToDo(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
