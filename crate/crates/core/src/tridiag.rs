//! Symmetric tridiagonal eigenproblem via implicit-shift QL iterations.
//!
//! Only the first row of the orthogonal transform is accumulated: the
//! spectral masses we need are squared first components of the orthonormal
//! eigenvectors, so full eigenvector storage is unnecessary.

use crate::error::{Error, Result};

/// A symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct SymmetricTridiagonal {
    pub diagonal: Vec<f64>,
    pub offdiagonal: Vec<f64>,
}

impl SymmetricTridiagonal {
    pub fn new(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::domain(format!(
                "tridiagonal shape mismatch: {} diagonal, {} offdiagonal",
                diagonal.len(),
                offdiagonal.len()
            )));
        }
        if offdiagonal.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::domain(
                "offdiagonal entries must be positive (simple spectrum)",
            ));
        }
        Ok(SymmetricTridiagonal {
            diagonal,
            offdiagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Eigenvalues (ascending) paired with the squared first components of
    /// the corresponding orthonormal eigenvectors.
    pub fn eigen_first_components(&self) -> Result<Vec<(f64, f64)>> {
        let n = self.dim();
        let mut d = self.diagonal.clone();
        let mut e = self.offdiagonal.clone();
        e.push(0.0);
        // First row of the accumulated orthogonal transform.
        let mut w = vec![0.0f64; n];
        w[0] = 1.0;

        let max_sweeps = 50;
        for l in 0..n {
            let mut iter = 0;
            loop {
                // Find a negligible subdiagonal element.
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > max_sweeps {
                    return Err(Error::Eigen {
                        iterations: max_sweeps * n,
                    });
                }
                // Implicit shift from the trailing 2x2.
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c) = (1.0f64, 1.0f64);
                let mut p = 0.0f64;
                for i in (l..m).rev() {
                    let mut f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    // Apply the rotation to the tracked first row.
                    f = w[i + 1];
                    w[i + 1] = s * w[i] + c * f;
                    w[i] = c * w[i] - s * f;
                }
                if r == 0.0 && m > l + 1 {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }

        let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(w.into_iter().map(|x| x * x)).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_validation() {
        assert!(SymmetricTridiagonal::new(vec![], vec![]).is_err());
        assert!(SymmetricTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymmetricTridiagonal::new(vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(SymmetricTridiagonal::new(vec![1.0, 2.0], vec![0.5]).is_ok());
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[0, b], [b, 0]]: eigenvalues +-b, first components 1/sqrt(2).
        let t = SymmetricTridiagonal::new(vec![0.0, 0.0], vec![0.5]).unwrap();
        let eig = t.eigen_first_components().unwrap();
        assert!((eig[0].0 + 0.5).abs() < 1e-15);
        assert!((eig[1].0 - 0.5).abs() < 1e-15);
        assert!((eig[0].1 - 0.5).abs() < 1e-14);
        assert!((eig[1].1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn jacobi_matrix_of_chebyshev_type() {
        // Free Jacobi matrix (diag 0, offdiag 1/2, n=40): eigenvalues
        // cos(pi k/(n+1)), first-component masses 2 sin^2(...)/(n+1).
        let n = 40;
        let t =
            SymmetricTridiagonal::new(vec![0.0; n], vec![0.5; n - 1]).unwrap();
        let eig = t.eigen_first_components().unwrap();
        for (k, &(lam, m)) in eig.iter().enumerate() {
            let j = n - k; // ascending eigenvalues: cos decreasing in its arg
            let theta = std::f64::consts::PI * j as f64 / (n as f64 + 1.0);
            assert!((lam - theta.cos()).abs() < 1e-12, "k={k}");
            let want = 2.0 * theta.sin().powi(2) / (n as f64 + 1.0);
            assert!((m - want).abs() < 1e-12, "k={k}: {m} vs {want}");
        }
        let total: f64 = eig.iter().map(|p| p.1).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn diagonal_input() {
        let t = SymmetricTridiagonal::new(vec![3.0, -1.0, 2.0], vec![1e-300, 1e-300]).unwrap();
        let eig = t.eigen_first_components().unwrap();
        let vals: Vec<f64> = eig.iter().map(|p| p.0).collect();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] - 3.0).abs() < 1e-12);
        // e_0 is already an eigenvector of the 3.0 eigenvalue.
        assert!((eig[2].1 - 1.0).abs() < 1e-12);
    }
}
