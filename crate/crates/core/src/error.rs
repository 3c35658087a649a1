use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix data length {len} does not match {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("spectral norm {norm} exceeds 1")]
    NormTooLarge { norm: f64 },
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid Pauli term: {0}")]
    InvalidPauli(String),
    #[error("Pauli sum has no terms")]
    EmptySum,
    #[error("empty list of encodings")]
    EmptyList,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid projector: {0}")]
    InvalidProjector(String),
    #[error("bad interval: {0}")]
    BadInterval(String),
    #[error("polynomial range violation: {0}")]
    RangeViolation(String),
    #[error("polynomial exceeds 1 in magnitude on [-1,1] (max {max:.6})")]
    PolyNotBounded { max: f64 },
    #[error("chebyshev encoding requires an exact (0-accurate) input encoding")]
    InexactInput,
    #[error("cost ledger overflow")]
    CostOverflow,
    #[error("grid point {0} outside (-1,1)")]
    GridOutOfRange(f64),
    #[error("scale too small: spectral norm / alpha = {ratio}")]
    ScaleTooSmall { ratio: f64 },
    #[error("at least one observable is required")]
    EmptyObservables,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
