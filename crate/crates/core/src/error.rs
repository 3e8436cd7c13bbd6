use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix has {entries} entries, expected {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, entries: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("unsupported dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("unsupported qubit count {0} (only 1 and 2 are supported)")]
    UnsupportedQubits(usize),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite")]
    NotPositive,

    #[error("trace {trace} outside the allowed range")]
    TraceOutOfRange { trace: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid Pauli label {0:?}")]
    InvalidLabel(String),

    #[error("the identity Pauli is not allowed here")]
    IdentityPauli,

    #[error("Pauli label {0:?} is not diagonal (contains X or Y)")]
    NotDiagonal(String),

    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("mixture probabilities sum to {sum}, expected 1")]
    ProbabilitySum { sum: f64 },

    #[error("Kraus operators increase trace (max deviation {deviation:e})")]
    TraceIncreasing { deviation: f64 },

    #[error("channel is not trace preserving")]
    NotTracePreserving,

    #[error("channel needs at least one Kraus operator")]
    EmptyKraus,

    #[error("inconsistent benchmarking inputs: radicand {radicand} is negative")]
    NegativeRadicand { radicand: f64 },

    #[error("decay fit failed: {0}")]
    FitFailure(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("gate {0:?} is not a known native gate")]
    UnknownGate(String),

    #[error("backend spec has no entry for gate {0:?}")]
    MissingGate(String),

    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("schema error in {}: {message}", path.display())]
    Schema { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch { expected: expected.to_string(), found: found.to_string() }
    }
}
