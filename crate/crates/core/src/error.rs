use thiserror::Error;

use crate::encodings::Scheme;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation from identity {0:.3e})")]
    NotUnitary(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported matrix dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("bit error rate {0} outside [0, 1/2]")]
    NoiseOutOfRange(f64),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("basis label {label} is not part of the {scheme} scheme")]
    UnknownBasis { scheme: Scheme, label: u8 },

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error(
        "QKD discrimination POVM is undefined at zero noise (the two ancilla states coincide)"
    )]
    DegenerateNoise,

    #[error("incompatible symmetry: {0}")]
    IncompatibleSymmetry(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no sign change on [{lo}, {hi}] (values {f_lo:.3e}, {f_hi:.3e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
