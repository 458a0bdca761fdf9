use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {position}: {message}\n  {input}\n  {marker}^")]
    Syntax { message: String, position: usize, input: String, marker: String },
    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("coefficient not in field: {0}")]
    NotInField(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("missing image for variable `{0}`")]
    MissingImage(String),
    #[error("operation requires positive characteristic")]
    CharacteristicZero,
    #[error("{0} is not a power of the characteristic {1}")]
    NotCharacteristicPower(u64, u64),
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("relations generate the unit ideal (zero ring)")]
    ZeroRing,
    #[error("closure not reached within degree bound {0}: possibly infinite length or bound too small")]
    DegreeBound(u32),
    #[error("search limit exceeded: {0}")]
    SearchLimit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("time budget exhausted")]
    BudgetExhausted,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
