use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration failed after {steps} steps at t = {t:.6e}, state = {state:?}")]
    Integration { steps: usize, t: f64, state: Vec<f64> },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no smooth front at c = {c}: orbit classified as {classification}")]
    NoFront { c: f64, classification: String },

    #[error("spectral parameter lies on a Fredholm border (root with |Re z| = {re:.3e})")]
    OnFredholmBorder { re: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
