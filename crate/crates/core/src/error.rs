use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quantum number: {0}")]
    QuantumNumber(String),

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("r = {r} is outside the domain: {reason}")]
    Domain { r: f64, reason: String },

    #[error("potential is not finite at node {index} (r = {r}): {value}")]
    NonFinitePotential { index: usize, r: f64, value: f64 },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not symmetric: relative asymmetry {asymmetry:e} at row {row}")]
    Asymmetric { row: usize, asymmetry: f64 },

    #[error("energy {energy:e} is below the zero-mode threshold {threshold:e}")]
    BelowZeroModeThreshold { energy: f64, threshold: f64 },

    #[error("vector is not an eigenvector: residual {residual:e} exceeds {tolerance:e}")]
    NotAnEigenvector { residual: f64, tolerance: f64 },

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter { name, reason: reason.into() }
}
