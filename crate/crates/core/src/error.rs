use thiserror::Error;

/// Errors raised by curve construction, quadrature and the spectral solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("curve is not closed: closure defect {defect:.3e} exceeds {limit:.3e}")]
    NotClosed { defect: f64, limit: f64 },

    #[error("closure projection failed after {iterations} iterations (residual defect {defect:.3e})")]
    NotClosable { iterations: usize, defect: f64 },

    #[error("eigen iteration did not converge in {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no bound state resolved: largest eigenvalue {lambda:.6e} < 1 at kappa {kappa:.3e}; grid too coarse")]
    NoBoundState { kappa: f64, lambda: f64 },

    #[error("zero chord at sample {index} with negative exponent")]
    SingularChord { index: usize },

    #[error("evaluation point within {distance:.3e} of the curve")]
    PointOnCurve { distance: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
