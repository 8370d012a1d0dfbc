//! Discrete measures, probability mass functions, and moment bundles.

use crate::error::{Error, Result};

/// A finite list of (location, mass) atoms with truncation metadata.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, f64)>,
    tail_bound: f64,
    truncation_index: usize,
    is_probability: bool,
}

impl DiscreteMeasure {
    /// A probability measure: checks ordering, positivity, and that
    /// masses plus tail account for total mass one.
    pub fn probability(atoms: Vec<(f64, f64)>, tail_bound: f64, truncation_index: usize) -> Result<Self> {
        let m = DiscreteMeasure {
            atoms,
            tail_bound,
            truncation_index,
            is_probability: true,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.tail_bound < 0.0 {
            return Err(Error::domain("negative tail bound"));
        }
        for w in self.atoms.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::domain(format!(
                    "atom locations must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(x, mass) in &self.atoms {
            if !(mass > 0.0) || !x.is_finite() {
                return Err(Error::domain(format!("invalid atom ({x}, {mass})")));
            }
        }
        if self.is_probability {
            let total = self.total_mass() + self.tail_bound;
            if (total - 1.0).abs() > 1e-10 {
                return Err(Error::domain(format!(
                    "probability measure mass {total} deviates from 1"
                )));
            }
        }
        Ok(())
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn truncation_index(&self) -> usize {
        self.truncation_index
    }

    pub fn is_probability(&self) -> bool {
        self.is_probability
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, m)| m).sum()
    }

    /// Plain atom summation of `f` against the stored atoms (the tail mass
    /// is not included).
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(x, m)| m * f(x)).sum()
    }
}

/// Which computation path produced a pmf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfMethod {
    Spectral,
    ClosedForm,
    GfExtraction,
    Oracle,
    Simulation,
}

impl PmfMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PmfMethod::Spectral => "spectral",
            PmfMethod::ClosedForm => "closed_form",
            PmfMethod::GfExtraction => "gf_extraction",
            PmfMethod::Oracle => "oracle",
            PmfMethod::Simulation => "simulation",
        }
    }
}

/// A pmf on `{0, 1, ..., kmax}` with a bound on the mass beyond `kmax`.
#[derive(Debug, Clone)]
pub struct Pmf {
    values: Vec<f64>,
    tail_bound: f64,
    method: PmfMethod,
    complete: bool,
}

impl Pmf {
    pub fn new(values: Vec<f64>, tail_bound: f64, method: PmfMethod, complete: bool) -> Result<Self> {
        for &v in &values {
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(Error::domain(format!("pmf value {v} outside [0,1]")));
            }
        }
        let p = Pmf {
            values,
            tail_bound,
            method,
            complete,
        };
        if complete {
            let total = p.total() + p.tail_bound;
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::domain(format!(
                    "complete pmf sums to {total}, expected 1"
                )));
            }
        }
        Ok(p)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn method(&self) -> PmfMethod {
        self.method
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().enumerate().map(|(k, &p)| k as f64 * p).sum()
    }

    /// Total variation distance against another pmf, padding the shorter
    /// support with zeros.
    pub fn tv_distance(&self, other: &[f64]) -> f64 {
        let n = self.values.len().max(other.len());
        let mut s = 0.0;
        for k in 0..n {
            let a = self.values.get(k).copied().unwrap_or(0.0);
            let b = other.get(k).copied().unwrap_or(0.0);
            s += (a - b).abs();
        }
        0.5 * s
    }
}

/// Source of a closed-form moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    ClosedForm,
    GfDerivative,
}

/// Mean and optional second moment of one random variable.
#[derive(Debug, Clone, Copy)]
pub struct MomentSet {
    pub mean: f64,
    pub second_moment: Option<f64>,
    pub source: MomentSource,
}

impl MomentSet {
    pub fn mean_only(mean: f64, source: MomentSource) -> Self {
        MomentSet {
            mean,
            second_moment: None,
            source,
        }
    }

    pub fn with_second(mean: f64, second: f64, source: MomentSource) -> Result<Self> {
        if second < mean * mean - 1e-9 {
            return Err(Error::domain(format!(
                "second moment {second} below mean^2 {}",
                mean * mean
            )));
        }
        Ok(MomentSet {
            mean,
            second_moment: Some(second),
            source,
        })
    }

    pub fn variance(&self) -> Option<f64> {
        self.second_moment.map(|m2| m2 - self.mean * self.mean)
    }
}
