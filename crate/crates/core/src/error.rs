use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("prime {prime} is ramified for {what}")]
    RamifiedPrime { prime: String, what: String },

    #[error("{value} is not in K(S,2): odd valuation at {prime}")]
    NotInSelmer { value: String, prime: String },

    #[error("prime {prime} divides the discriminant of {cubic}")]
    BadPrime { prime: String, cubic: String },

    #[error("cubic {0} is reducible")]
    Reducible(String),

    #[error("cubic #{index} ({cubic}) is reducible")]
    ReducibleCubic { index: usize, cubic: String },

    #[error("cubic #{index} ({cubic}) is listed twice")]
    DuplicateCubic { index: usize, cubic: String },

    #[error("oracle has no answer for prime {0}")]
    UnknownPrime(String),

    #[error("oracle answered 'ramified' at {0}")]
    RamifiedAnswer(String),

    #[error("prime {0} listed twice")]
    DuplicatePrime(String),

    #[error("curve model is singular (discriminant 0)")]
    BadModel,

    #[error("bad reduction outside S: discriminant cofactor {0}")]
    SIncomplete(String),

    #[error("search for {what} exhausted the norm cap {cap}")]
    SearchExhausted { what: String, cap: u64 },

    #[error("{op}: need {needed} bits of {quantity} at {prime}, oracle gave {available}")]
    PrecisionInsufficient { op: String, prime: String, quantity: String, needed: u32, available: u32 },

    #[error("trace parities {0} match no cubic of the family")]
    NoSignatureMatch(String),

    #[error("inconsistent data: {0}")]
    InconsistentData(String),

    #[error("not trivial mod 2^{level}: {reason}")]
    NotTrivialModLevel { level: u32, reason: String },

    #[error("valuation of F(1) at {prime} is {valuation}, below {k}")]
    ValuationTooLow { prime: String, valuation: u32, k: u32 },

    #[error("{op}: exact answer required at {prime}")]
    ExactnessRequired { op: String, prime: String },

    #[error("test set too small: {0}")]
    InsufficientTestSet(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), msg: e.to_string() }
    }
}
