//! Finite-capacity (c-server loss) variants: spectra of the absorbed jump
//! chain and of the generator, and the capacity-limited transient laws.
//!
//! Capacity 0 is degenerate (no customer ever enters): the transition count
//! is identically 1, exit occupancy and departures identically 0. The
//! spectra themselves require capacity >= 1.

use crate::error::{Error, Result};
use crate::special::{charlier, CharlierParams, PolyKind};
use crate::spectral::{p_poly, pi_weight};
use crate::tridiag::SymmetricTridiagonal;
use crate::QueueParams;

/// Which operator a finite spectrum describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Absorbed jump chain (eigenvalues in (-1,1), symmetric set).
    PsiC,
    /// Negated generator of the loss system (eigenvalues >= 0, one zero).
    PhiC,
}

/// Eigenvalues and spectral masses of a (c+1)-dimensional tridiagonal
/// problem, along with the symmetrization weights used.
#[derive(Debug, Clone)]
pub struct FiniteSpectrum {
    size: usize,
    eigenvalues: Vec<f64>,
    masses: Vec<f64>,
    weights: Vec<f64>,
    kind: SpectrumKind,
}

impl FiniteSpectrum {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    /// `sum_k mass_k f(eigenvalue_k)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.masses)
            .map(|(&x, &m)| m * f(x))
            .sum()
    }

    fn validate(&self) -> Result<()> {
        let total: f64 = self.masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "finite spectrum masses sum to {total}"
            )));
        }
        let scale = self
            .eigenvalues
            .iter()
            .fold(1.0f64, |a, &x| a.max(x.abs()));
        for w in self.eigenvalues.windows(2) {
            if w[1] - w[0] <= 1e-12 * scale {
                return Err(Error::domain(format!(
                    "eigenvalues not simple: {} and {}",
                    w[0], w[1]
                )));
            }
        }
        match self.kind {
            SpectrumKind::PsiC => {
                if self.eigenvalues.iter().any(|&x| x.abs() >= 1.0) {
                    return Err(Error::domain("absorbed-chain eigenvalue outside (-1,1)"));
                }
            }
            SpectrumKind::PhiC => {
                if self.eigenvalues.iter().any(|&x| x < -1e-12) {
                    return Err(Error::domain("generator eigenvalue below 0"));
                }
                if self.eigenvalues[0].abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::domain("generator spectrum is missing 0"));
                }
            }
        }
        Ok(())
    }
}

fn require_capacity(params: &QueueParams) -> Result<usize> {
    match params.capacity {
        Some(c) if c >= 1 => Ok(c),
        Some(0) => Err(Error::domain(
            "capacity 0 is degenerate; spectra need capacity >= 1",
        )),
        _ => Err(Error::domain("finite-capacity operation needs a capacity")),
    }
}

/// Spectrum of the absorbed jump chain with `c` servers.
///
/// Up-jump probabilities are `rho/(n+sigma+rho)` for `n < c`; the boundary
/// state has only the down jump `c/(c+sigma)` plus absorption. The matrix is
/// symmetrized by the diagonal similarity built from the chain's
/// reversibility weights, with the boundary weight corrected for the actual
/// last-row rates.
pub fn finite_spectrum_psi(params: &QueueParams) -> Result<FiniteSpectrum> {
    let c = require_capacity(params)?;
    let rho = params.rho;
    let sigma = params.sigma;
    let alpha = rho + sigma;
    let up = |n: f64| rho / (n + alpha);
    let down = |n: f64| {
        if n < c as f64 {
            n / (n + alpha)
        } else {
            n / (n + sigma)
        }
    };
    let mut weights = Vec::with_capacity(c + 1);
    for n in 0..c {
        weights.push(pi_weight(n as u64, params));
    }
    weights.push(weights[c - 1] * up((c - 1) as f64) / down(c as f64));
    let mut off = Vec::with_capacity(c);
    for n in 0..c {
        off.push((up(n as f64) * down((n + 1) as f64)).sqrt());
    }
    let tri = SymmetricTridiagonal::new(vec![0.0; c + 1], off)?;
    let eig = tri.eigen_first_components()?;
    let spectrum = FiniteSpectrum {
        size: c + 1,
        eigenvalues: eig.iter().map(|p| p.0).collect(),
        masses: eig.iter().map(|p| p.1).collect(),
        weights,
        kind: SpectrumKind::PsiC,
    };
    spectrum.validate()?;
    Ok(spectrum)
}

/// Spectrum of the negated generator of the `c`-server loss system.
pub fn finite_spectrum_phi(c: usize, rho: f64) -> Result<FiniteSpectrum> {
    if c < 1 {
        return Err(Error::domain("generator spectrum needs capacity >= 1"));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    let mut diag: Vec<f64> = (0..c).map(|n| n as f64 + rho).collect();
    diag.push(c as f64);
    let off: Vec<f64> = (0..c).map(|n| (rho * (n + 1) as f64).sqrt()).collect();
    let mut weights = Vec::with_capacity(c + 1);
    let mut w = 1.0f64;
    weights.push(w);
    for n in 1..=c {
        w *= rho / n as f64;
        weights.push(w);
    }
    let tri = SymmetricTridiagonal::new(diag, off)?;
    let eig = tri.eigen_first_components()?;
    let spectrum = FiniteSpectrum {
        size: c + 1,
        eigenvalues: eig.iter().map(|p| p.0).collect(),
        masses: eig.iter().map(|p| p.1).collect(),
        weights,
        kind: SpectrumKind::PhiC,
    };
    spectrum.validate()?;
    Ok(spectrum)
}

/// Roots of `f` on `[lo, hi]` by grid sign changes plus bisection.
fn bisect_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid: usize, tol: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (hi - lo) / grid as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=grid {
        let x1 = lo + i as f64 * h;
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            while b - a > tol {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                } else if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(x0);
    }
    roots
}

/// Eigenvalues of the absorbed chain by bisection on the boundary condition
/// `P_{c+1}(x) = x P_c(x)` (cross-check for [`finite_spectrum_psi`]).
pub fn psi_eigenvalues_bisect(params: &QueueParams) -> Result<Vec<f64>> {
    let c = require_capacity(params)?;
    let g = |x: f64| {
        let pc1 = p_poly(c as u64 + 1, params, x, PolyKind::First).unwrap();
        let pc = p_poly(c as u64, params, x, PolyKind::First).unwrap();
        pc1.to_f64() - x * pc.to_f64()
    };
    Ok(bisect_roots(g, -1.0, 1.0, 400 * (c + 1), 1e-13))
}

/// Generator eigenvalues by bisection on the root condition
/// `C_{c+1}(x;rho) = C_c(x;rho)` for `x >= 0` (the negated-generator
/// spectrum; cross-check for [`finite_spectrum_phi`]).
pub fn phi_eigenvalues_bisect(c: usize, rho: f64) -> Result<Vec<f64>> {
    let a = CharlierParams::new(rho)?;
    let g = |x: f64| {
        let c1 = charlier(c as u64 + 1, x, a, PolyKind::First).unwrap();
        let c0 = charlier(c as u64, x, a, PolyKind::First).unwrap();
        c1.to_f64() - c0.to_f64()
    };
    // 0 is always a root (both polynomials are 1 there); start just below.
    let hi = 2.0 * (rho + c as f64) + 1.0;
    Ok(bisect_roots(g, -1e-3, hi, 400 * (c + 1), 1e-13))
}

/// `rho^m/m!` running product.
fn poisson_core(rho: f64, m: u64) -> f64 {
    let mut p = 1.0f64;
    for k in 1..=m {
        p *= rho / k as f64;
    }
    p
}

/// `P(nu = m)` for the capacity-limited system: occupancy at observer exit.
pub fn nu_c_pmf(m: u64, params: &QueueParams) -> Result<f64> {
    let c = match params.capacity {
        Some(c) => c,
        None => return Err(Error::domain("nu_c_pmf needs a capacity")),
    };
    if m as usize > c {
        return Ok(0.0);
    }
    if c == 0 {
        return Ok(1.0);
    }
    let phi = finite_spectrum_phi(c, params.rho)?;
    let a = CharlierParams::new(params.rho)?;
    let sigma = params.sigma;
    let v = sigma
        * poisson_core(params.rho, m)
        * phi.integrate(|x| {
            charlier(m, x, a, PolyKind::First).unwrap().to_f64() / (sigma + x)
        });
    Ok(v.clamp(0.0, 1.0))
}

/// `P(N(t) = m)` for the `c`-server loss system from an empty start.
pub fn nt_c_pmf(m: u64, c: usize, rho: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    if m as usize > c {
        return Ok(0.0);
    }
    if c == 0 {
        return Ok(1.0);
    }
    let phi = finite_spectrum_phi(c, rho)?;
    let a = CharlierParams::new(rho)?;
    let v = poisson_core(rho, m)
        * phi.integrate(|x| {
            charlier(m, x, a, PolyKind::First).unwrap().to_f64() * (-x * t).exp()
        });
    Ok(v.clamp(0.0, 1.0))
}

/// Partial exponential generating function
/// `sum_{m=0}^{c} C_m(x;a) z^m/m!`.
pub fn charlier_partial_egf(c: usize, x: f64, a: f64, z: f64) -> Result<f64> {
    let params = CharlierParams::new(a)?;
    let mut sum = 0.0;
    let mut zfac = 1.0;
    for m in 0..=c as u64 {
        sum += charlier(m, x, params, PolyKind::First)?.to_f64() * zfac;
        zfac *= z / (m + 1) as f64;
    }
    Ok(sum)
}

/// Generating function of the total transition count in the observer
/// window for the capacity-limited system.
pub fn kappa_c_gf(z: f64, params: &QueueParams) -> Result<f64> {
    let c = match params.capacity {
        Some(c) => c,
        None => return Err(Error::domain("kappa_c_gf needs a capacity")),
    };
    if !(z.abs() <= 1.0) {
        return Err(Error::domain(format!("kappa_c_gf requires |z| <= 1, got {z}")));
    }
    if c == 0 {
        // Only the observer event ever happens.
        return Ok(z);
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let rho = params.rho;
    let sigma = params.sigma;
    let a = rho * z * z;
    let phi = finite_spectrum_phi(c, a)?;
    let v = sigma
        * z
        * try_integrate(&phi, |x| {
            Ok(charlier_partial_egf(c, x, a, rho * z)?
                / (sigma + rho * (1.0 - z * z) + x))
        })?;
    Ok(v)
}

/// Generating function of the departure count in the observer window for
/// the capacity-limited system.
pub fn delta_c_gf(z: f64, params: &QueueParams) -> Result<f64> {
    let c = match params.capacity {
        Some(c) => c,
        None => return Err(Error::domain("delta_c_gf needs a capacity")),
    };
    if !(z.abs() <= 1.0) {
        return Err(Error::domain(format!("delta_c_gf requires |z| <= 1, got {z}")));
    }
    if c == 0 {
        return Ok(1.0);
    }
    let rho = params.rho;
    let sigma = params.sigma;
    let psi = finite_spectrum_psi(params)?;
    // Polynomial prefactor sum_{m<=c} (rho^m/m!) x^m P_m(x): finite at the
    // x=0 atom present for even c.
    let prefactor = |x: f64| -> Result<f64> {
        let mut sum = 0.0;
        let mut fac = 1.0;
        for m in 0..=c as u64 {
            sum += fac * p_poly(m, params, x, PolyKind::First)?.to_f64();
            fac *= rho * x / (m + 1) as f64;
        }
        Ok(sum)
    };
    let v = sigma / (sigma + rho)
        * try_integrate(&psi, |x| Ok(prefactor(x)? / (1.0 - z * x * x)))?;
    Ok(v)
}

fn try_integrate(
    spectrum: &FiniteSpectrum,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let mut sum = 0.0;
    for (&x, &m) in spectrum.eigenvalues().iter().zip(spectrum.masses()) {
        sum += m * f(x)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transient::{d_gf, nu_pmf, DGfMethod, NuMethod};

    fn qpc(rho: f64, sigma: f64, c: usize) -> QueueParams {
        QueueParams::finite(rho, sigma, c).unwrap()
    }

    #[test]
    fn psi_c1_closed_form() {
        let s = finite_spectrum_psi(&qpc(1.0, 1.0, 1)).unwrap();
        assert_eq!(s.size(), 2);
        assert!((s.eigenvalues()[0] + 0.5).abs() < 1e-13);
        assert!((s.eigenvalues()[1] - 0.5).abs() < 1e-13);
        assert!((s.masses()[0] - 0.5).abs() < 1e-13);
        assert!((s.masses()[1] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn psi_symmetry_and_zero() {
        for &(c, rho, sigma) in &[(2usize, 1.0, 1.0), (4, 2.0, 0.5), (6, 2.0, 1.0), (7, 1.0, 2.0)] {
            let s = finite_spectrum_psi(&qpc(rho, sigma, c)).unwrap();
            let ev = s.eigenvalues();
            let total: f64 = s.masses().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (i, &x) in ev.iter().enumerate() {
                let mirror = ev[ev.len() - 1 - i];
                assert!((x + mirror).abs() < 1e-12, "c={c}: {x} vs {mirror}");
            }
            let has_zero = ev.iter().any(|&x| x.abs() < 1e-12);
            assert_eq!(has_zero, c % 2 == 0, "c={c}");
        }
    }

    #[test]
    fn psi_matches_bisection() {
        for &(c, rho, sigma) in &[(1usize, 1.0, 1.0), (3, 2.0, 0.5), (6, 2.0, 1.0)] {
            let s = finite_spectrum_psi(&qpc(rho, sigma, c)).unwrap();
            let roots = psi_eigenvalues_bisect(&qpc(rho, sigma, c)).unwrap();
            assert_eq!(roots.len(), c + 1, "c={c}");
            for (e, r) in s.eigenvalues().iter().zip(&roots) {
                assert!((e - r).abs() < 1e-12, "c={c}: {e} vs {r}");
            }
        }
    }

    #[test]
    fn phi_c1_closed_form() {
        let s = finite_spectrum_phi(1, 2.0).unwrap();
        assert!((s.eigenvalues()[0]).abs() < 1e-13);
        assert!((s.eigenvalues()[1] - 3.0).abs() < 1e-13);
        assert!((s.masses()[0] - 1.0 / 3.0).abs() < 1e-13);
        assert!((s.masses()[1] - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn phi_zero_mass_is_erlang() {
        for &(c, rho) in &[(1usize, 2.0), (3, 1.0), (5, 1.0), (6, 2.5)] {
            let s = finite_spectrum_phi(c, rho).unwrap();
            let norm: f64 = (0..=c as u64).map(|m| poisson_core(rho, m)).sum();
            assert!(
                (s.masses()[0] - 1.0 / norm).abs() < 1e-10,
                "c={c} rho={rho}: {} vs {}",
                s.masses()[0],
                1.0 / norm
            );
            let total: f64 = s.masses().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_matches_bisection() {
        for &(c, rho) in &[(1usize, 2.0), (4, 1.5), (6, 0.8)] {
            let s = finite_spectrum_phi(c, rho).unwrap();
            let roots = phi_eigenvalues_bisect(c, rho).unwrap();
            assert_eq!(roots.len(), c + 1, "c={c}");
            for (e, r) in s.eigenvalues().iter().zip(&roots) {
                assert!((e - r).abs() < 2e-12, "c={c}: {e} vs {r}");
            }
        }
    }

    #[test]
    fn residue_formula_mass_agreement() {
        // mass_k = [P*_{c+1}(xi) - xi P*_c(xi)] / g'(xi),
        // g(x) = P_{c+1}(x) - x P_c(x), derivative taken numerically.
        for &(c, rho, sigma) in &[(1usize, 1.0, 1.0), (3, 2.0, 0.5), (5, 1.0, 2.0), (8, 1.5, 1.0)] {
            let params = qpc(rho, sigma, c);
            let s = finite_spectrum_psi(&params).unwrap();
            let g = |x: f64| {
                p_poly(c as u64 + 1, &params, x, PolyKind::First).unwrap().to_f64()
                    - x * p_poly(c as u64, &params, x, PolyKind::First).unwrap().to_f64()
            };
            for (&xi, &mass) in s.eigenvalues().iter().zip(s.masses()) {
                let num = p_poly(c as u64 + 1, &params, xi, PolyKind::Second).unwrap().to_f64()
                    - xi * p_poly(c as u64, &params, xi, PolyKind::Second).unwrap().to_f64();
                let h = 1e-6;
                let dg = (g(xi + h) - g(xi - h)) / (2.0 * h);
                let residue = num / dg;
                assert!(
                    (residue - mass).abs() < 1e-8,
                    "c={c} xi={xi}: {residue} vs {mass}"
                );
            }
        }
    }

    #[test]
    fn p_zeros_inside_unit_interval() {
        // Zeros of P_c are real, simple, inside (-1,1): count sign changes.
        for c in 1..=12u64 {
            let params = QueueParams::infinite(1.3, 0.8).unwrap();
            let n_grid = 10_000;
            let mut count = 0;
            let mut last = p_poly(c, &params, -1.0, PolyKind::First).unwrap().to_f64();
            for i in 1..=n_grid {
                let x = -1.0 + 2.0 * i as f64 / n_grid as f64;
                let v = p_poly(c, &params, x, PolyKind::First).unwrap().to_f64();
                if v.signum() != last.signum() {
                    count += 1;
                }
                last = v;
            }
            assert_eq!(count, c as usize, "c={c}");
        }
    }

    #[test]
    fn nu_c_values() {
        let v = nu_c_pmf(0, &qpc(1.0, 1.0, 1)).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-13, "{v}");
        let total: f64 = (0..=4u64)
            .map(|m| nu_c_pmf(m, &qpc(2.0, 0.7, 4)).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-11, "{total}");
        assert_eq!(nu_c_pmf(5, &qpc(2.0, 0.7, 4)).unwrap(), 0.0);
        // Large capacity converges to the unbounded system.
        let v = nu_c_pmf(0, &qpc(1.0, 1.0, 30)).unwrap();
        let want = nu_pmf(0, &QueueParams::infinite(1.0, 1.0).unwrap(), NuMethod::Kummer).unwrap();
        assert!((v - want).abs() < 1e-9, "{v} vs {want}");
    }

    #[test]
    fn nt_c_values() {
        for &t in &[0.0, 0.3, 1.0, 2.5] {
            let v = nt_c_pmf(0, 1, 1.0, t).unwrap();
            let want = 0.5 * (1.0 + (-2.0 * t).exp());
            assert!((v - want).abs() < 1e-12, "t={t}: {v} vs {want}");
        }
        let v = nt_c_pmf(0, 3, 2.0, 0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
        // Long horizon: Erlang stationary law.
        let norm: f64 = (0..=3u64).map(|m| poisson_core(2.0, m)).sum();
        for m in 0..=3u64 {
            let v = nt_c_pmf(m, 3, 2.0, 40.0).unwrap();
            let want = poisson_core(2.0, m) / norm;
            assert!((v - want).abs() < 1e-10, "m={m}: {v} vs {want}");
        }
    }

    #[test]
    fn partial_egf_values() {
        assert_eq!(charlier_partial_egf(0, 3.0, 1.0, 0.7).unwrap(), 1.0);
        let v = charlier_partial_egf(1, 2.0, 4.0, 0.5).unwrap();
        assert!((v - (1.0 + 0.5 * (4.0 - 2.0) / 4.0)).abs() < 1e-15);
        // Long partial sum converges to the closed-form egf.
        let v = charlier_partial_egf(40, 2.0, 1.0, 0.5).unwrap();
        let want = crate::special::charlier_egf(2.0, CharlierParams::new(1.0).unwrap(), 0.5).unwrap();
        assert!((v - want).abs() < 1e-10, "{v} vs {want}");
    }

    #[test]
    fn kappa_c_normalization() {
        for &(c, rho, sigma) in &[(1usize, 1.0, 1.0), (2, 1.0, 1.0), (5, 1.0, 1.0), (1, 2.0, 0.5), (2, 2.0, 0.5), (5, 2.0, 0.5)] {
            let v = kappa_c_gf(1.0, &qpc(rho, sigma, c)).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "c={c} rho={rho} sigma={sigma}: {v}");
        }
        assert_eq!(kappa_c_gf(0.0, &qpc(1.0, 1.0, 2)).unwrap(), 0.0);
        assert_eq!(kappa_c_gf(0.5, &qpc(1.0, 1.0, 0)).unwrap(), 0.5);
    }

    #[test]
    fn kappa_c_mean_converges() {
        // d/dz at 1 for c=30 approaches the unbounded-system mean 2.5.
        let p = qpc(1.0, 1.0, 30);
        let h = 1e-5;
        let d = (kappa_c_gf(1.0, &p).unwrap() - kappa_c_gf(1.0 - h, &p).unwrap()) / h;
        assert!((d - 2.5).abs() < 1e-4, "{d}");
    }

    #[test]
    fn delta_c_normalization_and_values() {
        for &(c, rho, sigma) in &[(1usize, 1.0, 1.0), (2, 1.0, 1.0), (5, 1.0, 1.0), (1, 2.0, 0.5), (2, 2.0, 0.5), (5, 2.0, 0.5)] {
            let v = delta_c_gf(1.0, &qpc(rho, sigma, c)).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "c={c} rho={rho} sigma={sigma}: {v}");
        }
        // P(delta=0) at c=1, rho=sigma=1: two-state hand value 3/4.
        let v = delta_c_gf(0.0, &qpc(1.0, 1.0, 1)).unwrap();
        assert!((v - 0.75).abs() < 1e-12, "{v}");
        assert_eq!(delta_c_gf(0.3, &qpc(1.0, 1.0, 0)).unwrap(), 1.0);
    }

    #[test]
    fn delta_c_converges_to_unbounded() {
        let v = delta_c_gf(0.5, &qpc(1.0, 1.0, 30)).unwrap();
        let want = d_gf(0.5, &QueueParams::infinite(1.0, 1.0).unwrap(), DGfMethod::Kummer).unwrap();
        assert!((v - want).abs() < 1e-8, "{v} vs {want}");
    }

    #[test]
    fn capacity_zero_and_errors() {
        assert!(finite_spectrum_psi(&qpc(1.0, 1.0, 0)).is_err());
        assert!(finite_spectrum_phi(0, 1.0).is_err());
        assert!(nu_c_pmf(0, &QueueParams::infinite(1.0, 1.0).unwrap()).is_err());
        assert_eq!(nu_c_pmf(0, &qpc(1.0, 1.0, 0)).unwrap(), 1.0);
        assert_eq!(nu_c_pmf(1, &qpc(1.0, 1.0, 0)).unwrap(), 0.0);
        assert_eq!(nt_c_pmf(0, 0, 1.0, 2.0).unwrap(), 1.0);
    }
}
