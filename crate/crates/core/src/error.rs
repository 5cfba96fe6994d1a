use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live over different variable tables")]
    TableMismatch,
    #[error("not divisible (remainder witness: {remainder})")]
    NotDivisible { remainder: String },
    #[error("exact division by a multi-term nilpotent divisor is not supported")]
    UnsupportedDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parity mismatch for variable {var}")]
    ParityMismatch { var: String },
    #[error("no value assigned to variable {var}")]
    MissingAssignment { var: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate variable label {0}")]
    DuplicateLabel(String),
    #[error("localized elements use different denominators")]
    BaseMismatch,
    #[error("element is not a polynomial (denominator exponent {exponent})")]
    NotPolynomial { exponent: u32 },

    #[error("format mismatch: {0}")]
    FormatMismatch(String),
    #[error("matrix is not parity-homogeneous")]
    NotHomogeneous,
    #[error("matrix is not of q-block shape (A B; B A)")]
    NotQShaped,
    #[error("odd entry at ({row}, {col}) in an even determinant")]
    OddEntry { row: usize, col: usize },
    #[error("block is not invertible: {0}")]
    NonInvertible(String),
    #[error("exponential series did not terminate within {bound} terms")]
    NonTerminating { bound: usize },

    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("family {0} carries no preserved form")]
    NoForm(String),

    #[error("empty arena: at least one copy count must be positive")]
    EmptyArena,
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("polynomial is not homogeneous per copy")]
    Inhomogeneous,

    #[error("insufficient copies: {0}")]
    InsufficientCopies(String),
    #[error("wrong arena: {0}")]
    WrongArena(String),
    #[error("sign convention could not be resolved: {0}")]
    Convention(String),
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("polynomiality violation: {0}")]
    PolynomialityViolation(String),
    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
