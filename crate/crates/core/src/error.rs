use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch in `{form}`: expected {expected} arguments, found {found}")]
    Arity {
        form: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate variety name `{0}`")]
    DuplicateVariety(String),
    #[error("variety `{0}` has an empty body; write `free` for the free magma")]
    EmptyVariety(String),
    #[error("unknown variety `{0}`")]
    UnknownVariety(String),
    #[error("empty support")]
    EmptySupport,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("monomial {monomial} does not have multidegree {expected}")]
    WrongMultiDegree { monomial: String, expected: String },
    #[error("basis verification failed: {0}")]
    BasisRejected(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
