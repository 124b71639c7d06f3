use thiserror::Error;

/// Errors raised by the estimation and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge: achieved error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("coefficient index {j} exceeds the sample horizon {n}")]
    IndexBeyondHorizon { j: usize, n: usize },

    #[error("frequency {frequency} aliases on a grid with {points_per_period} points per period")]
    Aliasing {
        frequency: usize,
        points_per_period: usize,
    },

    #[error("horizon n = {n} is too small: {reason}")]
    HorizonTooSmall { n: usize, reason: &'static str },

    #[error("jump index {k} requested but only {available} arrivals are available")]
    MissingArrival { k: usize, available: usize },

    #[error("signal `{0}` carries no derivative norm")]
    MissingDerivativeNorm(String),

    #[error("unknown catalogue signal `{0}`")]
    UnknownSignal(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}
