use thiserror::Error;

use crate::laws::LawReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus not prime: {0}")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^32")]
    ModulusTooLarge(u64),
    #[error("unassigned parameter: {0}")]
    Unassigned(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("retry budget exhausted after {0} attempts")]
    RetryBudget(usize),
    #[error("expression parse error at offset {pos}: {msg}")]
    ExprParse { pos: usize, msg: String },
    #[error("grade table not associative: ({a}{b}){c} != {a}({b}{c})")]
    NonAssociative { a: String, b: String, c: String },
    #[error("invalid grade table: {0}")]
    GradeTable(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("missing bilinear family `{0}`")]
    MissingFamily(String),
    #[error("missing operator family `{0}`")]
    MissingOperator(String),
    #[error("missing {0}")]
    Missing(String),
    #[error("requires commutative grading: {p}{q} and {q}{p} differ")]
    NonCommutativeGrading { p: String, q: String },
    #[error("grading is not a {0}")]
    Grading(&'static str),
    #[error("hypothesis violated: {0}")]
    Hypothesis(Box<LawReport>),
    #[error("hypothesis violated: {0}")]
    HypothesisText(String),
    #[error("Atkinson characterization requires λ ≠ 0")]
    ZeroWeight,
    #[error("construction requires weight 0, got {0}")]
    NonZeroWeight(String),
    #[error("postcondition failed (implementation bug): {0}")]
    Postcondition(Box<LawReport>),
    #[error("search budget exceeded: {0} candidates")]
    Budget(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("parametric bundle needs an assignment for {0}")]
    Parametric(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
