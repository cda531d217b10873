use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group type: {0}")]
    InvalidGroup(String),
    #[error("group order {order} exceeds the supported bound {bound}")]
    OrderTooLarge { order: u64, bound: u64 },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("{d} does not divide {n}")]
    InvalidDivisor { n: u64, d: u64 },
    #[error("invalid set size m={m} for group of order {n}")]
    InvalidSize { n: u64, m: u64 },
    #[error("invalid fold count h={h}: {reason}")]
    InvalidFold { h: u64, reason: String },
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("search refused: estimated {estimate} orbits exceeds budget {budget}")]
    BudgetExceeded { estimate: u64, budget: u64 },
    #[error("empty search space: {0}")]
    EmptySearchSpace(String),
    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
    #[error("theorem claim {claim} failed at {point}: expected {expected}, observed {observed}")]
    TheoremFailure {
        claim: String,
        point: String,
        expected: String,
        observed: String,
    },
    #[error("malformed record on line {line}: {msg}")]
    MalformedRecord { line: usize, msg: String },
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
