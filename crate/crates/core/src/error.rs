use thiserror::Error;

/// Errors raised by the solvers, checkers and the scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("characteristic blew up after t = {time}")]
    BlowUp { time: f64 },

    #[error("generator {generator} reaches a caustic at t = {caustic:.6} (requested t = {requested}); reduce t or increase k")]
    Horizon {
        generator: usize,
        caustic: f64,
        requested: f64,
    },

    #[error("dual domain is empty")]
    EmptyDualDomain,

    #[error("query point lies outside the convex hull of the data points")]
    Infeasible,

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("unstable scheme: {0}")]
    Stability(String),

    #[error("orientation error: expected p_minus >= p_plus, got {p_minus} < {p_plus}")]
    Orientation { p_minus: f64, p_plus: f64 },

    #[error("capability missing: {0}")]
    Capability(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
