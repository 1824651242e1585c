//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the kernels, functionals, solvers and the command line layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A kernel was evaluated at a point where it is pointwise singular.
    #[error("singular evaluation: {0}")]
    Singular(String),
    /// The vacuum convention (zero momentum wherever the density vanishes) is violated.
    #[error("vacuum convention violated: {0}")]
    Vacuum(String),
    /// The time integrator hit the density floor or produced non-finite values.
    #[error("numerical blow-up at t = {t}: {reason}")]
    BlowUp {
        /// Time at which the abort happened.
        t: f64,
        /// Human readable cause.
        reason: String,
    },
    /// An iterative method failed to reach its tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        /// Number of iterations performed.
        iterations: usize,
        /// Final residual.
        residual: f64,
    },
    /// A configuration file could not be parsed or validated.
    #[error("configuration error: {0}")]
    Config(String),
    /// Writing an output artifact failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
