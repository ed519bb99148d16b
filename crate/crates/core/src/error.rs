use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("exponent overflow")]
    Overflow,
    #[error("ideal is not zero-dimensional: no power of {0} lies in the leading-term ideal")]
    NotZeroDimensional(String),
    #[error("ideal is not supported at the origin: {0} is not nilpotent modulo the ideal")]
    NotSupportedAtOrigin(String),
    #[error("cutoff {cutoff} is below the threshold {threshold} where S_(>=N) lies in the ideal")]
    CutoffTooSmall { cutoff: i64, threshold: i64 },
    #[error("non-negative part is unstable: cutoff {cutoff} gives {first}, cutoff {next} gives {second}")]
    CutoffUnstable {
        cutoff: i64,
        next: i64,
        first: usize,
        second: usize,
    },
    #[error("I_M is not contained in I_R: generator {0} does not reduce to zero")]
    NotASubideal(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown gallery entry `{name}`; available: {available}")]
    UnknownGalleryEntry { name: String, available: String },
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
