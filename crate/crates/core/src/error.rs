use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NonConforming: {0}")]
    NonConforming(String),
    #[error("ZeroArea: triangle {0} is degenerate")]
    ZeroArea(usize),
    #[error("InconsistentLabel: {0}")]
    InconsistentLabel(String),
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
    #[error("UnknownDomain: {0}")]
    UnknownDomain(String),
    #[error("InvalidBoundarySpec: {0}")]
    InvalidBoundarySpec(String),
    #[error("SingularElementMatrix: triangle {tri} (condition estimate {cond:e})")]
    SingularElementMatrix { tri: usize, cond: f64 },
    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
    #[error("PointOutsideTriangle: ({x}, {y}) not in triangle {tri}")]
    PointOutsideTriangle { tri: usize, x: f64, y: f64 },
    #[error("UnsupportedDegree: {0}")]
    UnsupportedDegree(usize),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("SingularShift: shift {0} is (numerically) an eigenvalue")]
    SingularShift(f64),
    #[error("NoConvergence: residuals {residuals:?} after Krylov dimension {dim}")]
    NoConvergence { dim: usize, residuals: Vec<f64> },
    #[error("InconsistentPair: {0}")]
    InconsistentPair(String),
    #[error("AllZeroEstimator")]
    AllZeroEstimator,
    #[error("InsufficientData: {0}")]
    InsufficientData(String),
    #[error("NonPositiveError: {0} levels with lambda <= reference")]
    NonPositiveError(usize),
    #[error("NonPositiveEigenvalue: {0}")]
    NonPositiveEigenvalue(f64),
    #[error("level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Strips any level annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLevel { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
