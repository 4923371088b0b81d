use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undeclared identifier `{0}`")]
    UndeclaredIdentifier(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent must be an integer literal (at offset {0})")]
    NonIntegerExponent(usize),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("`{0}` is not a coordinate")]
    NotACoordinate(String),
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("form degree {0} exceeds the supported maximum of 2")]
    DegreeOverflow(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("expression is not linear in the fiber coordinates: {0}")]
    NonlinearFiber(String),
    #[error("gauge matrix is singular")]
    SingularGauge,
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("name `{0}` conflicts with an existing symbol")]
    NameConflict(String),
}

pub type Result<T> = std::result::Result<T, Error>;
