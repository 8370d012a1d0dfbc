use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or iteration failed to converge within its budget.
    #[error("convergence failure in {context}: last term magnitude {last_term:e}")]
    Convergence { context: String, last_term: f64 },

    /// A transform was evaluated too close to an atom of the measure.
    #[error("evaluation point {z} is within {dist:e} of spectrum atom {atom}")]
    Pole { z: f64, atom: f64, dist: f64 },

    /// Truncated-matrix computation did not stabilize under dimension doubling.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// The eigensolver failed to converge.
    #[error("eigensolver failed to converge after {iterations} iterations")]
    Eigen { iterations: usize },

    /// A simulated path exceeded the event budget.
    #[error("simulated path exceeded {0} events; check parameters")]
    Runaway(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
