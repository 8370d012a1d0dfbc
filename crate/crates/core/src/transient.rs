//! Transient laws of the infinite-server queue.
//!
//! Two time frames appear: an exponentially distributed observation window
//! with rate `sigma` (counts `nu` in system at exit, arrivals, departures,
//! total transition count `kappa`) and a fixed horizon `t` (counts `N(t)`,
//! `D(t)`, `K(t)`). `K` and `kappa` count arrivals plus departures plus the
//! terminal observer event, hence the factor `z` in their generating
//! functions and `K >= 1` always.

use crate::error::{Error, Result};
use crate::measure::{MomentSet, MomentSource};
use crate::series::{em_series_sum, ln_tree_term, sum_fast_series, EM_DEFAULT_TERMS};
use crate::special::{
    charlier, charlier_stieltjes, kummer_phi, poisson_pmf, CharlierParams, PolyKind,
};
use crate::spectral::{p_poly, SpectralMeasure};
use crate::{quad, QueueParams};

/// Evaluation route for the exit-count law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuMethod {
    Spectral,
    Kummer,
}

/// Evaluation route for the fixed-time occupancy law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtMethod {
    ClosedForm,
    Spectral,
}

/// Evaluation route for the departure-count generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DGfMethod {
    Series,
    Kummer,
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// `rho^m/m!` by running product (bounded by `e^rho`).
fn poisson_core(rho: f64, m: u64) -> f64 {
    let mut p = 1.0f64;
    for k in 1..=m {
        p *= rho / k as f64;
        if p == 0.0 {
            break;
        }
    }
    p
}

/// `P(nu = m)`: number in system when the observer departs.
pub fn nu_pmf(m: u64, params: &QueueParams, method: NuMethod) -> Result<f64> {
    let rho = params.rho;
    let sigma = params.sigma;
    let v = match method {
        NuMethod::Kummer => {
            // sigma (rho^m/m!) int C_m(x;rho)/(sigma+x) dP_rho(x)
            let a = CharlierParams::new(rho)?;
            sigma * poisson_core(rho, m) * charlier_stieltjes(m, sigma, a)?
        }
        NuMethod::Spectral => {
            // (sigma/(sigma+rho)) (rho^m/m!) int P_m(x)/(1-x) dpsi(x)
            let psi = SpectralMeasure::new(params, 1e-12)?;
            let integral = psi.integrate(|x| {
                p_poly(m, params, x, PolyKind::First).unwrap().to_f64() / (1.0 - x)
            })?;
            sigma / (sigma + rho) * poisson_core(rho, m) * integral
        }
    };
    Ok(v.clamp(0.0, 1.0))
}

/// `P(N(t) = m)` from an empty start: Poisson with mean `rho(1-e^{-t})`.
pub fn nt_pmf(m: u64, rho: f64, t: f64, method: NtMethod) -> Result<f64> {
    check_t(t)?;
    match method {
        NtMethod::ClosedForm => Ok(poisson_pmf(rho * -(-t).exp_m1(), m)),
        NtMethod::Spectral => {
            // (rho^m/m!) sum_n C_m(n;rho) e^{-nt} rho^n e^{-rho}/n!
            let a = CharlierParams::new(rho)?;
            let sum = sum_fast_series(
                |n| {
                    charlier(m, n as f64, a, PolyKind::First).unwrap().to_f64()
                        * (-(n as f64) * t).exp()
                        * poisson_pmf(rho, n)
                },
                1e-16,
                100_000,
                "occupancy spectral series",
            )?;
            Ok((poisson_core(rho, m) * sum).clamp(0.0, 1.0))
        }
    }
}

/// Generating function `E z^kappa` of the total transition count in the
/// observer window.
pub fn kappa_gf(z: f64, params: &QueueParams) -> Result<f64> {
    if !(z.abs() <= 1.0) {
        return Err(Error::domain(format!("kappa_gf requires |z| <= 1, got {z}")));
    }
    let rho = params.rho;
    let sigma = params.sigma;
    let w = -rho * z * (1.0 - z);
    let mut pw = 1.0f64;
    let sum = sum_fast_series(
        |n| {
            if n > 0 {
                pw *= w / n as f64;
            }
            pw / (sigma + rho + n as f64 - rho * z * z)
        },
        1e-15,
        100_000,
        "transition-count gf series",
    )?;
    Ok(sigma * z * (-w).exp() * sum)
}

/// Generating function `E z^{K(t)}` of the fixed-horizon transition count.
pub fn kt_gf(z: f64, rho: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let e = rho * z * (1.0 - z) * -(-t).exp_m1() - rho * (1.0 - z * z) * t;
    Ok(z * e.exp())
}

/// `P(K(t) = k)`. `K(t) >= 1` always, so `k = 0` returns 0.
///
/// The gf factorizes into the arrival count (Poisson, weight `z`) and the
/// departure count (Poisson, weight `z^2`), so the pmf is the convolution
/// `sum_{i+2j=k-1} Poisson_alpha(i) Poisson_beta(j)` with
/// `alpha = rho(1-e^{-t})`, `beta = rho(t-1+e^{-t})`.
pub fn kt_pmf(k: u64, rho: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if k == 0 {
        return Ok(0.0);
    }
    let alpha = rho * -(-t).exp_m1();
    let beta = rho * (t + (-t).exp_m1());
    let r = k - 1;
    let mut s = 0.0;
    for j in 0..=(r / 2) {
        let i = r - 2 * j;
        s += poisson_pmf(alpha, i) * poisson_pmf(beta, j);
    }
    Ok(s)
}

/// Generating function `E z^d` of the departure count in the observer
/// window.
pub fn d_gf(z: f64, params: &QueueParams, method: DGfMethod) -> Result<f64> {
    if !(z.abs() <= 1.0) {
        return Err(Error::domain(format!("d_gf requires |z| <= 1, got {z}")));
    }
    let rho = params.rho;
    let sigma = params.sigma;
    match method {
        DGfMethod::Kummer => {
            let b = sigma + rho * (1.0 - z);
            Ok(sigma / b * kummer_phi(1.0, b + 1.0, rho * (1.0 - z))?)
        }
        DGfMethod::Series => {
            // Terms decay like n^{-3/2}; accelerated tail required.
            let term = |x: f64| {
                sigma * ln_tree_term(sigma, x, 0.0).exp() / (sigma + rho + x - rho * z)
            };
            em_series_sum(EM_DEFAULT_TERMS, |n| term(n as f64), term, 1e-14)
        }
    }
}

/// `P(d = k)`: departures in the observer window.
pub fn d_pmf(k: u64, params: &QueueParams) -> Result<f64> {
    let rho = params.rho;
    let sigma = params.sigma;
    let term = |x: f64| {
        let den = sigma + rho + x;
        sigma
            * (ln_tree_term(sigma, x, 0.0) + k as f64 * (rho / den).ln()).exp()
            / den
    };
    let v = em_series_sum(EM_DEFAULT_TERMS, |n| term(n as f64), term, 1e-14)?;
    Ok(v.clamp(0.0, 1.0))
}

/// `P(D(t) = k)` from an empty start: Poisson with mean `rho(t-1+e^{-t})`.
pub fn dt_pmf(k: u64, rho: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(poisson_pmf(rho * (t + (-t).exp_m1()), k))
}

/// `P(a = m)`: arrivals in the observer window (geometric).
pub fn arrivals_pmf(m: u64, params: &QueueParams) -> f64 {
    let rho = params.rho;
    let sigma = params.sigma;
    sigma / (rho + sigma) * (rho / (rho + sigma)).powi(m as i32)
}

/// Departure count of an M/G/infinity queue at horizon `t`: Poisson with
/// mean `rho t p(t)`, `p(t) = (1/t) int_0^t G(u) du` for service cdf `G`.
pub fn mginf_departures_pmf(
    k: u64,
    rho: f64,
    t: f64,
    service_cdf: impl Fn(f64) -> f64,
) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    // Monotonicity / range spot-check on a grid.
    let mut last = -1e-12;
    for i in 0..=100 {
        let v = service_cdf(t * i as f64 / 100.0);
        if v < last - 1e-12 || !(-1e-12..=1.0 + 1e-12).contains(&v) {
            return Err(Error::domain(
                "service_cdf must be nondecreasing with values in [0,1]",
            ));
        }
        last = v;
    }
    let integral = quad::integrate(&service_cdf, 0.0, t, 1e-12)?;
    Ok(poisson_pmf(rho * integral, k))
}

/// Departures by time `t` among `n0` customers initially present
/// (binomial with success probability `1-e^{-t}`).
pub fn initial_departures_pmf(k: i64, n0: u64, t: f64) -> Result<f64> {
    check_t(t)?;
    if k < 0 || k as u64 > n0 {
        return Ok(0.0);
    }
    let k = k as u64;
    let p = -(-t).exp_m1();
    let mut binom = 1.0f64;
    for i in 0..k {
        binom *= (n0 - i) as f64 / (i + 1) as f64;
    }
    Ok(binom * p.powi(k as i32) * (-((n0 - k) as f64) * t).exp())
}

/// Closed-form moments of the transient counts.
#[derive(Debug, Clone, Copy)]
pub struct ExactMeans {
    pub arrivals: MomentSet,
    pub in_system: MomentSet,
    pub departures: MomentSet,
    pub transitions: MomentSet,
    pub transitions_t: Option<MomentSet>,
}

/// All closed-form means (and second moments where available); with `t`
/// given, also the fixed-horizon transition count moments.
pub fn exact_means(params: &QueueParams, t: Option<f64>) -> Result<ExactMeans> {
    let rho = params.rho;
    let sigma = params.sigma;
    let e_a = rho / sigma;
    let e_nu = rho / (sigma + 1.0);
    let e_d = rho / (sigma * (sigma + 1.0));
    let e_k = 1.0 + rho * (2.0 + sigma) / (sigma * (1.0 + sigma));
    let e_k2 = 1.0
        + rho * (8.0 + 3.0 * sigma) / (sigma * (1.0 + sigma))
        + 2.0 * rho * rho * (8.0 + sigma * (16.0 + sigma * (7.0 + sigma)))
            / (sigma * sigma * (1.0 + sigma) * (1.0 + sigma) * (2.0 + sigma));
    // Conservation: kappa - 1 = nu + 2 d.
    let gap = (e_k - 1.0) - (e_nu + 2.0 * e_d);
    if gap.abs() > 1e-12 * e_k.abs() {
        return Err(Error::domain(format!(
            "moment conservation identity violated by {gap:e}"
        )));
    }
    let transitions_t = match t {
        None => None,
        Some(t) => {
            check_t(t)?;
            let em = (-t).exp();
            let mean = 1.0 - (1.0 - em) * rho + 2.0 * t * rho;
            // Factorial moment E[K(K-1)]; the second moment adds the mean.
            let factorial = em * em
                * rho
                * (rho
                    + t.exp()
                        * (4.0 + (-2.0 + 4.0 * t) * rho
                            + t.exp() * (-4.0 + 6.0 * t + rho + 4.0 * (-1.0 + t) * t * rho)));
            Some(MomentSet::with_second(mean, factorial + mean, MomentSource::ClosedForm)?)
        }
    };
    Ok(ExactMeans {
        arrivals: MomentSet::mean_only(e_a, MomentSource::ClosedForm),
        in_system: MomentSet::mean_only(e_nu, MomentSource::ClosedForm),
        departures: MomentSet::mean_only(e_d, MomentSource::ClosedForm),
        transitions: MomentSet::with_second(e_k, e_k2, MomentSource::ClosedForm)?,
        transitions_t,
    })
}
