use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is singular to working precision (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("collocation matrix is not invertible (pivot {pivot:e})")]
    NonInvertibleCollocation { pivot: f64 },

    #[error("size {size} exceeds the cap of {cap}")]
    SizeExceeded { size: usize, cap: usize },

    #[error("value {value} lies outside the domain [0, {upper}]")]
    DomainError { value: f64, upper: f64 },

    #[error("kernel function takes a negative value {value:e} at interpolation node {node}")]
    NegativePhiAtNode { node: f64, value: f64 },

    #[error("node {0} appears more than once")]
    DuplicateNode(usize),

    #[error("node index {index} out of range for {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
