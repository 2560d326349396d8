use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("insufficient profinite precision: {0}")]
    InsufficientPrecision(String),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("not rank one (rank {0})")]
    NotRankOne(usize),

    #[error("missing symbol `{0}` in specialization")]
    MissingSymbol(String),

    #[error("non-reciprocal polynomial: {0}")]
    NonReciprocal(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate specialization: {0}")]
    DegenerateSpecialization(String),

    #[error("seminorm has full kernel")]
    FullKernel,

    #[error("missing class label on orbit record {0}")]
    MissingLabel(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
