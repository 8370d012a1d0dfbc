//! Spectral analysis of the infinite-server Markov queue observed over an
//! exponentially distributed window, with finite-capacity variants,
//! matrix-based cross-checks, and Monte Carlo simulation.

pub mod error;
pub mod finite;
pub mod measure;
pub mod oracle;
pub mod quad;
pub mod scaled;
pub mod series;
pub mod sim;
pub mod special;
pub mod spectral;
pub mod transient;
pub mod tridiag;

pub use error::{Error, Result};
pub use measure::{DiscreteMeasure, MomentSet, MomentSource, Pmf, PmfMethod};

/// Parameters of the observed queue: arrival rate `rho`, observer rate
/// `sigma` (service rate is 1), and an optional server-count cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueParams {
    pub rho: f64,
    pub sigma: f64,
    pub capacity: Option<usize>,
}

impl QueueParams {
    pub fn new(rho: f64, sigma: f64, capacity: Option<usize>) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::domain(format!("rho must be positive, got {rho}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        Ok(QueueParams { rho, sigma, capacity })
    }

    pub fn infinite(rho: f64, sigma: f64) -> Result<Self> {
        Self::new(rho, sigma, None)
    }

    pub fn finite(rho: f64, sigma: f64, capacity: usize) -> Result<Self> {
        Self::new(rho, sigma, Some(capacity))
    }
}
