use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not a Fibonacci composition: {0:?}")]
    NotFibonacci(Vec<usize>),
    #[error("vanishing parameter at index {0}")]
    ZeroAt(usize),
    #[error("A_{0} vanishes, specialization is not totally positive")]
    VanishingA(usize),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("unknown builtin '{name}'; known: {known}")]
    UnknownBuiltin { name: String, known: String },
    #[error("requires {0}")]
    Requires(String),
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(String, String),
    #[error("malformed: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
