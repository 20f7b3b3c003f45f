use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not normal (commutator norm {commutator:.3e} exceeds {allowed:.3e})")]
    NotNormal { commutator: f64, allowed: f64 },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("conjugator is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },
    #[error("polynomial must vanish at zero, constant term is {constant}")]
    NonzeroConstant { constant: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("box set is disconnected: {0}")]
    Disconnected(String),
    #[error("polynomial fit error {error:.3e} exceeds {target:.3e} at degree cap {max_degree}")]
    DegreeCapExceeded { max_degree: usize, error: f64, target: f64 },
    #[error("block {block} misses required box ({re}, {im}); raise the Kahan order")]
    MissingBox { block: usize, re: i64, im: i64 },
    #[error("no Kahan order up to {cap} meets tolerance {tolerance} at level {level}")]
    LadderExhausted { level: usize, tolerance: f64, cap: usize },
    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    PolyDegreeCap { degree: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
