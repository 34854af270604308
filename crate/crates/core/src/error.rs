use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {re}+{im}i is not strictly inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },
    #[error("point {re}+{im}i lies outside the closed unit disk")]
    OutsideClosedDisk { re: f64, im: f64 },
    #[error("front constant has modulus {modulus}, expected 1")]
    NonUnimodular { modulus: f64 },
    #[error("evaluation point is within {distance:e} of the pole of factor {index}")]
    PoleProximity { index: usize, distance: f64 },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("divisor subset is empty")]
    EmptySubset,
    #[error("zeros {first} and {second} coincide")]
    DuplicateZeros { first: usize, second: usize },
    #[error("sample grids differ in size ({left} vs {right})")]
    GridMismatch { left: usize, right: usize },
    #[error("grid size {size} must be a power of two and at least {min}")]
    InvalidGrid { size: usize, min: usize },
    #[error("function is not in the model space (relative residual {residual:e})")]
    NotInModelSpace { residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Gram matrix condition estimate {condition:e} exceeds the solve limit")]
    IllConditionedGram { condition: f64 },
    #[error("operation not available for {0} basis")]
    BasisMismatch(&'static str),
    #[error("matrix is not a truncated Toeplitz operator (residual {residual:e})")]
    NotTto { residual: f64 },
    #[error("constraint system is degenerate: {0}")]
    DegenerateConstraints(&'static str),
    #[error("separation constant {delta:e} is below the required {required:e}")]
    SeparationTooSmall { delta: f64, required: f64 },
    #[error("instance generation exhausted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("matrix has non-finite entries or is not square")]
    MalformedMatrix,
}

pub type Result<T> = core::result::Result<T, Error>;
