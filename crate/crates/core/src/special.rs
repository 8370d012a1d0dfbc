//! Charlier polynomials, the Kummer function, and the Poisson measure.

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::scaled::ScaledReal;
use crate::series::{ln_gamma, sum_fast_series};

/// Which member of a two-initial-condition recurrence family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyKind {
    First,
    Second,
}

/// Parameter of the Charlier family / Poisson measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharlierParams {
    a: f64,
}

impl CharlierParams {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::domain(format!(
                "Charlier parameter must be finite and positive, got {a}"
            )));
        }
        Ok(CharlierParams { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

const RESCALE_LIMIT: f64 = 1.3407807929942597e154; // 2^512
const RESCALE_STEP: i64 = 512;

/// Run the shared three-term recurrence `next = (coef(i)*cur - i*prev)/a`
/// style loop in overflow-safe form. `step(i, cur, prev)` produces the next
/// value; the pair is rescaled by powers of two as needed.
pub(crate) fn run_recurrence(
    mut prev: f64,
    mut cur: f64,
    start: u64,
    end: u64,
    mut step: impl FnMut(u64, f64, f64) -> f64,
) -> ScaledReal {
    let mut exp_offset: i64 = 0;
    for i in start..end {
        let next = step(i, cur, prev);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > RESCALE_LIMIT {
            cur /= RESCALE_LIMIT;
            prev /= RESCALE_LIMIT;
            exp_offset += RESCALE_STEP;
        } else if mag > 0.0 && mag < 1.0 / RESCALE_LIMIT {
            cur *= RESCALE_LIMIT;
            prev *= RESCALE_LIMIT;
            exp_offset -= RESCALE_STEP;
        }
    }
    ScaledReal::new(cur, exp_offset)
}

/// Charlier polynomial `C_n(x;a)` (first kind) or `C*_n(x;a)` (second kind)
/// by forward recurrence `a C_{n+1} + (x-n-a) C_n + n C_{n-1} = 0`.
pub fn charlier(n: u64, x: f64, params: CharlierParams, kind: PolyKind) -> Result<ScaledReal> {
    if !x.is_finite() {
        return Err(Error::domain(format!("non-finite Charlier argument {x}")));
    }
    // The forward recurrence is stable only while the degree stays at or
    // below the argument. For integer arguments below the degree, evaluate
    // the symmetric partner C_x(n;a) instead.
    if kind == PolyKind::First && x >= 0.0 && x == x.floor() && x < n as f64 && x < 2f64.powi(53) {
        return charlier(x as u64, n as f64, params, kind);
    }
    let a = params.a;
    let step = move |i: u64, cur: f64, prev: f64| {
        let i = i as f64;
        ((i + a - x) * cur - i * prev) / a
    };
    Ok(match kind {
        PolyKind::First => run_recurrence(0.0, 1.0, 0, n, step),
        PolyKind::Second => {
            if n == 0 {
                ScaledReal::ZERO
            } else {
                run_recurrence(0.0, -1.0 / a, 1, n, step)
            }
        }
    })
}

/// Exponential generating function `sum_n C_n(x;a) z^n/n! = e^z (1-z/a)^x`.
pub fn charlier_egf(x: f64, params: CharlierParams, z: f64) -> Result<f64> {
    let a = params.a;
    if !x.is_finite() || !z.is_finite() {
        return Err(Error::domain("non-finite argument to charlier_egf"));
    }
    let base = 1.0 - z / a;
    let is_nonneg_int = x >= 0.0 && x == x.floor();
    if is_nonneg_int {
        Ok(z.exp() * base.powi(x as i32))
    } else {
        if z >= a {
            return Err(Error::domain(format!(
                "charlier_egf needs z < a for non-integer x (z={z}, a={a})"
            )));
        }
        Ok(z.exp() * base.powf(x))
    }
}

/// Kummer confluent hypergeometric function `Phi(alpha,beta;z)` by series.
pub fn kummer_phi(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    if beta <= 0.0 && beta == beta.floor() {
        return Err(Error::domain(format!(
            "Kummer function undefined for nonpositive integer beta={beta}"
        )));
    }
    let mut term = 1.0f64;
    sum_fast_series(
        |n| {
            if n > 0 {
                let n = (n - 1) as f64;
                term *= (alpha + n) / (beta + n) * z / (n + 1.0);
            }
            term
        },
        1e-16,
        100_000,
        "Kummer series",
    )
}

/// Base Stieltjes transform `chi_0(z;a) = (1/z) Phi(1, 1+z; -a)`,
/// the value of the Charlier continued fraction.
pub fn chi0(z: f64, params: CharlierParams) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!(
            "chi0 requires z > 0 (z={z}; the Poisson atoms make z in {{0,-1,...}} singular)"
        )));
    }
    Ok(kummer_phi(1.0, 1.0 + z, -params.a)? / z)
}

/// The Poisson measure with mean `a`: atoms at `0..=M` with mass
/// `a^n e^{-a}/n!`, truncated once the remaining tail is below `tol`.
pub fn poisson_measure(params: CharlierParams, tol: f64) -> Result<DiscreteMeasure> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain(format!("tol must lie in (0,1), got {tol}")));
    }
    let a = params.a;
    let mut atoms = Vec::new();
    let mut mass = (-a).exp();
    let mut cum = 0.0f64;
    let mut n = 0u64;
    loop {
        atoms.push((n as f64, mass));
        cum += mass;
        let tail = (1.0 - cum).max(0.0);
        if tail < tol {
            return DiscreteMeasure::probability(atoms, tail, n as usize);
        }
        if n > 10_000_000 {
            return Err(Error::Convergence {
                context: "poisson_measure truncation".into(),
                last_term: mass,
            });
        }
        n += 1;
        mass *= a / n as f64;
    }
}

/// Stieltjes moment of a Charlier polynomial against the Poisson measure:
/// `int C_m(x;a)/(z+x) dP_a(x) = C_m(-z;a) chi_0(z;a) + C*_m(-z;a)`.
///
/// The right side is the minimal solution `y_m` of the recurrence
/// `a y_{n+1} = (z+n+a) y_n - n y_{n-1}` with `y_0 = chi_0`; forming it as
/// written cancels catastrophically for moderate `m`, so the ratios
/// `y_n/y_{n-1}` are obtained by backward recurrence instead.
pub fn charlier_stieltjes(m: u64, z: f64, params: CharlierParams) -> Result<f64> {
    let y0 = chi0(z, params)?;
    if m == 0 {
        return Ok(y0);
    }
    let a = params.a;
    let ratios = |depth: u64| -> Vec<f64> {
        let mut t = 0.0f64;
        let mut kept = vec![0.0; m as usize];
        for n in (1..=m + depth).rev() {
            t = n as f64 / ((z + n as f64 + a) - a * t);
            if n <= m {
                kept[n as usize - 1] = t;
            }
        }
        kept
    };
    let mut depth = 40u64;
    let mut prev = ratios(depth);
    loop {
        depth *= 2;
        let cur = ratios(depth);
        let close = prev
            .iter()
            .zip(&cur)
            .all(|(p, c)| (p - c).abs() <= 1e-15 * c.abs());
        if close {
            return Ok(cur.iter().fold(y0, |acc, t| acc * t));
        }
        if depth > 20_000 {
            return Err(Error::Convergence {
                context: "Stieltjes moment backward recurrence".into(),
                last_term: depth as f64,
            });
        }
        prev = cur;
    }
}

/// `rho^m e^{-rho} / m!` without intermediate overflow.
pub fn poisson_pmf(mean: f64, m: u64) -> f64 {
    if mean == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    (m as f64 * mean.ln() - mean - ln_gamma(m as f64 + 1.0)).exp()
}
