//! Spectral decomposition of the absorbed infinite-server jump chain.
//!
//! The chain restricted to the states before observer departure has a purely
//! discrete spectrum: atom pairs `s_k = +-sqrt(rho/(sigma+rho+k))` with mass
//! `r_k = (sigma+rho) (sigma+rho+k)^{k-1} e^{-(sigma+rho+k)} / (2 k!)` each.
//! The masses decay only like `k^{-3/2}`, so integrals against the measure
//! carry an Euler-Maclaurin tail over the atom index rather than relying on
//! truncation.

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::scaled::ScaledReal;
use crate::series::{self, em_tail, ln_tree_term, KahanSum};
use crate::special::run_recurrence;
use crate::QueueParams;

pub use crate::special::PolyKind;

/// Orthogonality weight `pi_n = ((sigma+rho+n)/(sigma+rho)) rho^n/n!`.
pub fn pi_weight(n: u64, params: &QueueParams) -> f64 {
    let alpha = params.sigma + params.rho;
    let nf = n as f64;
    // rho^n/n! stays below e^rho, so the running product cannot overflow;
    // it is also a few ulps tighter than the log-gamma form.
    let mut p = 1.0f64;
    for k in 1..=n {
        p *= params.rho / k as f64;
        if p == 0.0 {
            break;
        }
    }
    (alpha + nf) / alpha * p
}

/// Orthogonal polynomial of the absorbed chain (first kind) or its
/// associated second-kind companion, by the recurrence
/// `rho P_{n+1} = (n+sigma+rho) x P_n - n P_{n-1}`.
pub fn p_poly(n: u64, params: &QueueParams, x: f64, kind: PolyKind) -> Result<ScaledReal> {
    if !x.is_finite() {
        return Err(Error::domain(format!("non-finite polynomial argument {x}")));
    }
    let rho = params.rho;
    let alpha = params.sigma + params.rho;
    let step = move |i: u64, cur: f64, prev: f64| {
        let i = i as f64;
        ((i + alpha) * x * cur - i * prev) / rho
    };
    Ok(match kind {
        PolyKind::First => run_recurrence(0.0, 1.0, 0, n, step),
        PolyKind::Second => {
            if n == 0 {
                ScaledReal::ZERO
            } else {
                run_recurrence(0.0, alpha / rho, 1, n, step)
            }
        }
    })
}

/// The spectral measure of the absorbed chain, with enough machinery to
/// integrate smooth functions to near machine precision despite the
/// algebraically decaying atom masses.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    rho: f64,
    alpha: f64,
    n_explicit: u64,
    tol: f64,
    measure: DiscreteMeasure,
}

impl SpectralMeasure {
    pub fn new(params: &QueueParams, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::domain(format!("tol must lie in (0,1), got {tol}")));
        }
        let rho = params.rho;
        let alpha = params.sigma + params.rho;
        let n_explicit = series::EM_DEFAULT_TERMS;
        let mut explicit = KahanSum::default();
        let mut atoms = Vec::with_capacity(2 * n_explicit as usize);
        for k in 0..n_explicit {
            let kf = k as f64;
            let pair = Self::pair_mass(alpha, kf);
            explicit.add(pair);
            atoms.push((Self::location(rho, alpha, kf), 0.5 * pair));
        }
        let tail = em_tail(n_explicit, |x| Self::pair_mass(alpha, x), 1e-14)?;
        let total = explicit.value() + tail;
        if (total - 1.0).abs() > tol.max(1e-12) {
            return Err(Error::Convergence {
                context: "spectral measure mass certification".into(),
                last_term: (total - 1.0).abs(),
            });
        }
        // Positive atoms decrease with k; emit ascending.
        let mut ordered: Vec<(f64, f64)> = atoms.iter().map(|&(s, m)| (-s, m)).collect();
        ordered.extend(atoms.iter().rev().map(|&(s, m)| (s, m)));
        let measure = DiscreteMeasure::probability(ordered, tail, n_explicit as usize)?;
        Ok(SpectralMeasure {
            rho,
            alpha,
            n_explicit,
            tol,
            measure,
        })
    }

    /// Combined mass `2 r_k` of the atom pair at index `k` (smooth in `k`).
    fn pair_mass(alpha: f64, k: f64) -> f64 {
        alpha * ln_tree_term(alpha, k, -1.0).exp()
    }

    /// Positive atom location `s_k` (smooth in `k`).
    fn location(rho: f64, alpha: f64, k: f64) -> f64 {
        (rho / (alpha + k)).sqrt()
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Largest atom magnitude `s_0`.
    pub fn support_radius(&self) -> f64 {
        Self::location(self.rho, self.alpha, 0.0)
    }

    /// Smallest atom magnitude carried explicitly; inside this radius the
    /// spectrum is only resolved through the tail continuation.
    pub fn resolved_radius(&self) -> f64 {
        Self::location(self.rho, self.alpha, self.n_explicit as f64)
    }

    /// Atom location nearest to `z`, over the full (infinite) atom set.
    pub fn nearest_atom(&self, z: f64) -> f64 {
        let s = z.abs();
        if s >= self.support_radius() {
            return self.support_radius().copysign(z);
        }
        // s_k = s at k = rho/s^2 - alpha.
        let k_near = (self.rho / (s * s) - self.alpha).max(0.0);
        let mut best = self.support_radius();
        for k in [k_near.floor(), k_near.ceil()] {
            let cand = Self::location(self.rho, self.alpha, k.max(0.0));
            if (cand - s).abs() < (best - s).abs() {
                best = cand;
            }
        }
        best.copysign(if z == 0.0 { 1.0 } else { z })
    }

    /// `int f dpsi = sum_k r_k (f(s_k) + f(-s_k))`, with the atom-index tail
    /// accelerated. `f` must be smooth on the support.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let rho = self.rho;
        let alpha = self.alpha;
        let term = |k: f64| {
            let s = Self::location(rho, alpha, k);
            0.5 * Self::pair_mass(alpha, k) * (f(s) + f(-s))
        };
        let mut acc = KahanSum::default();
        for k in 0..self.n_explicit {
            acc.add(term(k as f64));
        }
        // Tolerance for the tail integral, relative to its own magnitude
        // (the tail of a k^{-3/2}-type series is of order |term(N)|*N).
        let n = self.n_explicit as f64;
        let scale = [n, n + 0.5, 2.0 * n, 4.0 * n]
            .iter()
            .map(|&x| term(x).abs() * x)
            .fold(1.0f64, f64::max);
        acc.add(em_tail(self.n_explicit, term, 1e-13 * scale)?);
        Ok(acc.value())
    }
}

/// Spec-level constructor: the spectral measure as a plain atom list with
/// its residual mass recorded as the tail bound.
pub fn mminf_spectral_measure(params: &QueueParams, tol: f64) -> Result<DiscreteMeasure> {
    Ok(SpectralMeasure::new(params, tol)?.measure().clone())
}

/// Stieltjes transform `chi(sigma; z) = int dpsi(x)/(z-x)`.
///
/// `z` must stay clear of the atoms: at least 1e-9 away from each, and
/// outside the unresolved cluster near the origin.
pub fn chi_sigma(params: &QueueParams, z: f64) -> Result<f64> {
    let psi = SpectralMeasure::new(params, 1e-12)?;
    chi_from_measure(&psi, z)
}

pub(crate) fn chi_from_measure(psi: &SpectralMeasure, z: f64) -> Result<f64> {
    check_clear_of_atoms(psi, z)?;
    psi.integrate(|x| 1.0 / (z - x))
}

pub(crate) fn check_clear_of_atoms(psi: &SpectralMeasure, z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::domain("non-finite transform argument"));
    }
    if z.abs() < psi.support_radius() && z.abs() <= psi.resolved_radius() {
        return Err(Error::domain(format!(
            "transform argument {z} lies in the unresolved atom cluster (|z| <= {})",
            psi.resolved_radius()
        )));
    }
    let atom = psi.nearest_atom(z);
    let dist = (z - atom).abs();
    if dist < 1e-9 {
        return Err(Error::Pole { z, atom, dist });
    }
    Ok(())
}

/// `int P_m(x)/(z-x) dpsi(x) = P_m(z) chi(z) - P*_m(z)`, evaluated from the
/// right-hand side.
pub fn stieltjes_p(m: u64, params: &QueueParams, z: f64) -> Result<f64> {
    let chi = chi_sigma(params, z)?;
    let p = p_poly(m, params, z, PolyKind::First)?.to_f64();
    let ps = p_poly(m, params, z, PolyKind::Second)?.to_f64();
    Ok(p * chi - ps)
}

/// Closed-form exponential generating function
/// `sum_n P_n(x) z^n/n! = e^{z/x} (1 - z x / rho)^{rho/x^2 - sigma - rho}`.
pub fn p_egf(params: &QueueParams, x: f64, z: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("p_egf requires x != 0"));
    }
    if z * x >= params.rho {
        return Err(Error::domain(format!(
            "p_egf requires z*x < rho (z={z}, x={x}, rho={})",
            params.rho
        )));
    }
    let expo = params.rho / (x * x) - params.sigma - params.rho;
    Ok((z / x).exp() * (1.0 - z * x / params.rho).powf(expo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{charlier, CharlierParams};

    fn qp(rho: f64, sigma: f64) -> QueueParams {
        QueueParams::infinite(rho, sigma).unwrap()
    }

    #[test]
    fn pi_weight_values() {
        assert_eq!(pi_weight(0, &qp(3.0, 0.7)), 1.0);
        assert!((pi_weight(1, &qp(1.0, 1.0)) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn pi_weight_reversibility() {
        // Jump rates a_{n,n+1} = rho/(n+alpha), a_{n+1,n} = (n+1)/(n+1+alpha).
        for &(rho, sigma) in &[(1.0, 1.0), (4.0, 0.5), (2.0, 2.0)] {
            let p = qp(rho, sigma);
            let alpha = rho + sigma;
            for n in 0..=50u64 {
                let nf = n as f64;
                let up = rho / (nf + alpha) * pi_weight(n, &p);
                let down = (nf + 1.0) / (nf + 1.0 + alpha) * pi_weight(n + 1, &p);
                assert!(
                    (up - down).abs() <= 1e-14 * up.abs().max(1e-300),
                    "n={n} rho={rho} sigma={sigma}"
                );
            }
        }
    }

    #[test]
    fn p_poly_base_cases() {
        let p = qp(2.0, 1.0);
        assert_eq!(p_poly(0, &p, 0.3, PolyKind::First).unwrap().to_f64(), 1.0);
        // P_1 = (sigma+rho) x / rho = 3*0.5/2.
        let v = p_poly(1, &p, 0.5, PolyKind::First).unwrap().to_f64();
        assert!((v - 0.75).abs() < 1e-15);
        // P*_1 = (sigma+rho)/rho independent of x.
        for &x in &[0.1, 0.5, -2.0] {
            let v = p_poly(1, &p, x, PolyKind::Second).unwrap().to_f64();
            assert!((v - 1.5).abs() < 1e-15);
        }
        assert!(p_poly(0, &p, 0.3, PolyKind::Second).unwrap().is_zero());
    }

    #[test]
    fn p_poly_charlier_connection() {
        // P_n(x) = x^{-n} C_n((rho-(sigma+rho)x^2)/x^2; rho/x^2).
        let p = qp(1.0, 2.0);
        let x = 0.4f64;
        let a = CharlierParams::new(p.rho / (x * x)).unwrap();
        let arg = (p.rho - (p.sigma + p.rho) * x * x) / (x * x);
        for n in [1u64, 2, 3, 7] {
            let lhs = p_poly(n, &p, x, PolyKind::First).unwrap().to_f64();
            let rhs = charlier(n, arg, a, PolyKind::First).unwrap().to_f64() / x.powi(n as i32);
            assert!(
                (lhs - rhs).abs() <= 1e-11 * rhs.abs(),
                "n={n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn p_poly_parity() {
        for &(rho, sigma) in &[(1.0, 1.0), (3.0, 0.5)] {
            let p = qp(rho, sigma);
            for n in 0..=30u64 {
                for &x in &[0.2, 0.55, 0.9] {
                    let plus = p_poly(n, &p, x, PolyKind::First).unwrap().to_f64();
                    let minus = p_poly(n, &p, -x, PolyKind::First).unwrap().to_f64();
                    let want = if n % 2 == 0 { plus } else { -plus };
                    assert!(
                        (minus - want).abs() <= 1e-12 * plus.abs().max(1e-300),
                        "n={n} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn spectral_atoms_match_closed_form() {
        let psi = SpectralMeasure::new(&qp(3.0, 1.0), 1e-12).unwrap();
        let atoms = psi.measure().atoms();
        let n = atoms.len();
        // Largest positive atom is last; s_0 = sqrt(3/4), r_0 = e^{-4}/2.
        let (s0, r0) = atoms[n - 1];
        assert!((s0 - 0.8660254037844386).abs() < 1e-12);
        assert!((r0 - 0.5 * (-4.0f64).exp()).abs() < 1e-15);
        let (s1, r1) = atoms[n - 2];
        assert!((s1 - 0.7745966692414834).abs() < 1e-12);
        assert!((r1 - 2.0 * (-5.0f64).exp()).abs() < 1e-15);
        // Mirror atoms at the front.
        assert!((atoms[0].0 + s0).abs() < 1e-15);
        assert!((atoms[0].1 - r0).abs() < 1e-18);
    }

    #[test]
    fn spectral_total_mass_is_one() {
        for &(rho, sigma) in &[(1.0, 1.0), (3.0, 1.0), (2.0, 0.5), (8.0, 2.0)] {
            let psi = SpectralMeasure::new(&qp(rho, sigma), 1e-12).unwrap();
            let total = psi.measure().total_mass() + psi.measure().tail_bound();
            assert!(
                (total - 1.0).abs() < 1e-12,
                "rho={rho} sigma={sigma}: {total}"
            );
            let unit = psi.integrate(|_| 1.0).unwrap();
            assert!((unit - 1.0).abs() < 1e-12, "rho={rho} sigma={sigma}");
        }
    }

    #[test]
    fn spectrum_bound() {
        for &(rho, sigma) in &[(1.0, 1.0), (4.0, 0.5), (0.3, 2.0)] {
            let psi = SpectralMeasure::new(&qp(rho, sigma), 1e-12).unwrap();
            let radius = psi.support_radius();
            let bound = (rho / (sigma + rho)).sqrt();
            assert!((radius - bound).abs() < 1e-15);
            assert!(radius <= 2.0 * bound && radius < 1.0);
            for &(x, _) in psi.measure().atoms() {
                assert!(x.abs() <= radius + 1e-15);
            }
        }
    }

    #[test]
    fn orthogonality() {
        // sum P_n P_m dpsi = delta_{nm}/pi_n, checked in the orthonormal
        // scaling so the tolerance is meaningful across n.
        for &(rho, sigma) in &[(1.0, 0.5), (1.0, 2.0), (4.0, 0.5), (4.0, 2.0)] {
            let p = qp(rho, sigma);
            let psi = SpectralMeasure::new(&p, 1e-14).unwrap();
            for n in 0..=15u64 {
                for m in n..=15u64 {
                    let norm = (pi_weight(n, &p) * pi_weight(m, &p)).sqrt();
                    let v = psi
                        .integrate(|x| {
                            p_poly(n, &p, x, PolyKind::First).unwrap().to_f64()
                                * p_poly(m, &p, x, PolyKind::First).unwrap().to_f64()
                        })
                        .unwrap()
                        * norm;
                    let want = if n == m { 1.0 } else { 0.0 };
                    assert!(
                        (v - want).abs() < 1e-9,
                        "n={n} m={m} rho={rho} sigma={sigma}: {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn eigen_residual() {
        // At x = s_k the vector (P_n(x))_n satisfies the jump-chain
        // eigenproblem row by row.
        let p = qp(2.0, 1.0);
        let psi = SpectralMeasure::new(&p, 1e-12).unwrap();
        let alpha = p.rho + p.sigma;
        let atoms = psi.measure().atoms();
        let top: Vec<f64> = (0..5).map(|k| atoms[atoms.len() - 1 - k].0).collect();
        for x in top {
            let n_max = 60u64;
            let pv: Vec<f64> = (0..=n_max)
                .map(|n| p_poly(n, &p, x, PolyKind::First).unwrap().to_f64())
                .collect();
            for n in 0..(n_max as usize - 1) {
                let nf = n as f64;
                let (row, row_mag) = if n == 0 {
                    (p.rho / alpha * pv[1], (p.rho * pv[1]).abs() / alpha)
                } else {
                    (
                        (nf * pv[n - 1] + p.rho * pv[n + 1]) / (nf + alpha),
                        ((nf * pv[n - 1]).abs() + (p.rho * pv[n + 1]).abs()) / (nf + alpha),
                    )
                };
                let scale = row_mag.max((x * pv[n]).abs()).max(1e-300);
                assert!(
                    (row - x * pv[n]).abs() <= 1e-9 * scale,
                    "x={x} n={n}: {row} vs {}",
                    x * pv[n]
                );
            }
        }
    }

    #[test]
    fn chi_values() {
        // chi(sigma;1) = (sigma+rho) chi0(sigma; rho).
        let p = qp(1.0, 1.0);
        let v = chi_sigma(&p, 1.0).unwrap();
        let want = 2.0 * (1.0 - (-1.0f64).exp());
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        // Large z: z chi -> 1 at rate E[x^2]/z^2.
        let v = chi_sigma(&p, 1e3).unwrap();
        assert!((1e3 * v - 1.0).abs() < 1e-6);
        // Independent Kummer path at (rho=2, sigma=0.5, z=2): by the same
        // identity chi(sigma;z) relates to chi0 only at z=1, so compare the
        // atom sum against itself evaluated through the general m=0 moment
        // at z=1 for a second parameter set.
        let p2 = qp(2.0, 0.5);
        let v = chi_sigma(&p2, 1.0).unwrap();
        let a = CharlierParams::new(2.0).unwrap();
        let want = 2.5 * crate::special::chi0(0.5, a).unwrap();
        assert!((v - want).abs() < 1e-10, "{v} vs {want}");
        let v2 = chi_sigma(&p2, 2.0).unwrap();
        assert!(v2.is_finite() && v2 > 0.0 && v2 < 1.0);
    }

    #[test]
    fn chi_pole_and_cluster_errors() {
        let p = qp(1.0, 1.0);
        let s0 = (0.5f64).sqrt();
        assert!(matches!(
            chi_sigma(&p, s0 + 1e-12),
            Err(Error::Pole { .. })
        ));
        // Deep inside the unresolved cluster near zero.
        assert!(chi_sigma(&p, 1e-5).is_err());
    }

    #[test]
    fn stieltjes_p_matches_atom_sum() {
        let p = qp(1.0, 1.0);
        // m=0 reduces to chi.
        let v = stieltjes_p(0, &p, 1.0).unwrap();
        assert!((v - chi_sigma(&p, 1.0).unwrap()).abs() < 1e-14);
        // m=2, z=1.3 against direct quadrature.
        let psi = SpectralMeasure::new(&p, 1e-14).unwrap();
        let direct = psi
            .integrate(|x| {
                p_poly(2, &p, x, PolyKind::First).unwrap().to_f64() / (1.3 - x)
            })
            .unwrap();
        let closed = stieltjes_p(2, &p, 1.3).unwrap();
        assert!((direct - closed).abs() < 1e-10, "{direct} vs {closed}");
        // m=1 expands as P_1 chi - (sigma+rho)/rho.
        let p2 = qp(2.0, 1.0);
        let v = stieltjes_p(1, &p2, 2.0).unwrap();
        let want = p_poly(1, &p2, 2.0, PolyKind::First).unwrap().to_f64()
            * chi_sigma(&p2, 2.0).unwrap()
            - 1.5;
        assert!((v - want).abs() < 1e-14);
    }

    #[test]
    fn p_egf_closed_form() {
        let p = qp(1.0, 1.0);
        assert!((p_egf(&p, 0.5, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // rho/x^2 - sigma - rho = 2 at x = 0.5.
        let v = p_egf(&p, 0.5, 0.5).unwrap();
        let want = 1f64.exp() * 0.75f64.powi(2);
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        assert!(p_egf(&p, 0.0, 0.5).is_err());
        assert!(p_egf(&p, 2.0, 0.5).is_err());
    }

    #[test]
    fn p_egf_matches_series() {
        let p = qp(1.0, 1.0);
        let (x, z) = (0.6, 0.3);
        let mut sum = 0.0;
        let mut zfac = 1.0;
        for n in 0..=60u64 {
            sum += p_poly(n, &p, x, PolyKind::First).unwrap().to_f64() * zfac;
            zfac *= z / (n + 1) as f64;
        }
        let closed = p_egf(&p, x, z).unwrap();
        assert!((sum - closed).abs() < 1e-10, "{sum} vs {closed}");
    }
}
