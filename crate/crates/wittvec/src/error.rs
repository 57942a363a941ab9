use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {0} is not divisible by p")]
    NotDivisible(String),
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("capability missing: {0}")]
    CapabilityMissing(&'static str),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("not integral: {0}")]
    NotIntegral(String),
    #[error("integrality violation in {0}")]
    IntegralityViolation(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("length-zero input")]
    LengthZero,
    #[error("depth {requested} exceeds available depth {available}")]
    DepthExceeded { requested: usize, available: usize },
    #[error("zero depth")]
    ZeroDepth,
    #[error("insufficient depth: need {need}, have {have}")]
    InsufficientDepth { need: usize, have: usize },
    #[error("incoherent sequence at level {0}")]
    Incoherent(usize),
    #[error("no p-th root at component {0}")]
    NoRoot(usize),
    #[error("rescaling infeasible at working precision")]
    RescaleInfeasible,
    #[error("b = {0} is outside the supported range")]
    BOutOfRange(String),
    #[error("ring is not finitely enumerable mod p^2")]
    NotEnumerable,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("root sequence check failed at index {0}")]
    RootSequence(usize),
    #[error("expansion index {0} is beyond the supported cap")]
    BeyondCap(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
