use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coframe mismatch: {0}")]
    CoframeMismatch(String),
    #[error("invalid coframe: {0}")]
    InvalidCoframe(String),
    #[error("degree {degree} out of range for dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constants are not antisymmetric at ({i}, {j}, {k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("action matrices do not commute: {0} and {1}")]
    NonCommutingAction(usize, usize),
    #[error("expected an odd-dimensional algebra, got dimension {0}")]
    EvenDimension(usize),
    #[error("expected an even dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix is not antisymmetric")]
    NotSkew,
    #[error("form is degenerate")]
    Degenerate,
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("not an almost complex structure (J^2 != -1)")]
    NotComplexStructure,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("search bound exceeded: {0}")]
    SearchExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
    #[error("profile derivative check failed at s = {at}: analytic {analytic}, finite difference {fd}")]
    ProfileDerivative { at: f64, analytic: f64, fd: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
