use std::path::PathBuf;

/// Unified error type for the library.
///
/// Numeric payloads are carried as `f64` regardless of the working scalar so
/// the type stays object-safe and printable without dragging the generic
/// parameter through every signature.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Declared model data contradicts the discretized model (nonpositive
    /// control profile, declared bounds below measured ones, ...).
    #[error("model violation: {0}")]
    Model(String),

    #[error("gain condition failed: rho = {rho} does not exceed threshold {threshold}")]
    GainCondition { rho: f64, threshold: f64 },

    #[error(
        "prox root-find did not converge after {iterations} iterations \
         (bracket [{lo:e}, {hi:e}], width {width:e})"
    )]
    ProxNoConvergence {
        iterations: usize,
        lo: f64,
        hi: f64,
        width: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot read config {path}: {source}")]
    ConfigIo {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot parse config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for failures of the arithmetic itself (blow-up, non-convergence),
    /// as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::ProxNoConvergence { .. })
    }
}
