//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite data in {context}{}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    NonFinite {
        context: &'static str,
        step: Option<u64>,
    },

    #[error("energy increased by {delta:.3e} at step {step}; the step size is unstable")]
    Unstable { step: u64, delta: f64 },

    #[error("modulus bound violated at step {step}: max|u| = {value:.6}")]
    BoundViolated { step: u64, value: f64 },

    #[error("winding undefined: |u| = {modulus:.3} <= 0.3 at loop sample {index}")]
    IllDefinedWinding { index: usize, modulus: f64 },

    #[error("singular configuration: defect points coincide")]
    SingularConfiguration,

    #[error("boojum alternation violated: merged boojum number {tau} outside -1..=1")]
    AlternationViolation { tau: i64 },

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("restarts exhausted after {0} attempts")]
    RestartsExhausted(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Error {
        Error::Config(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Error {
        Error::Shape(msg.into())
    }
}
