use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("descriptor parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("bank contention at step {step}: banks {bank_a} and {bank_b} both target write bank {target}")]
    Contention {
        step: u64,
        bank_a: u64,
        bank_b: u64,
        target: u64,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("enumeration limit exceeded: {0}")]
    TooLarge(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
