//! Independent ground-truth engines: exact linear algebra on the truncated
//! (or capacity-exact) transition matrix, the Erlang stationary solve, and a
//! uniformization route for fixed-horizon joint laws. These share no code
//! with the spectral evaluation paths, which is what makes the agreement
//! tests meaningful.

use crate::error::{Error, Result};
use crate::measure::{Pmf, PmfMethod};
use crate::QueueParams;

/// The absorbed jump chain on `{0, ..., dim-1}` with the absorption column
/// implicit. For an unbounded system the top state's up-jump leaks mass out
/// of the truncation (tracked, certifiably small); with a capacity the
/// matrix is exact at dimension `c+1`.
#[derive(Debug, Clone)]
pub struct TruncatedChain {
    params: QueueParams,
    dim: usize,
}

impl TruncatedChain {
    /// Auto-sized chain: smallest power of two whose Poisson(rho) tail
    /// beyond `M-2` is below 1e-14, doubled once; capacity systems are
    /// represented exactly.
    pub fn new(params: &QueueParams) -> Result<Self> {
        let dim = match params.capacity {
            Some(c) => c + 1,
            None => {
                let mut m = 8usize;
                loop {
                    if poisson_tail_beyond(params.rho, m - 2) < 1e-14 {
                        break m * 2;
                    }
                    m *= 2;
                    if m > 1 << 16 {
                        return Err(Error::Truncation(
                            "auto truncation dimension exceeded 2^16".into(),
                        ));
                    }
                }
            }
        };
        Ok(TruncatedChain {
            params: *params,
            dim,
        })
    }

    pub fn with_dimension(params: &QueueParams, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("chain dimension must be positive"));
        }
        if let Some(c) = params.capacity {
            if dim != c + 1 {
                return Err(Error::domain(
                    "capacity chains are exact at dimension c+1",
                ));
            }
        }
        Ok(TruncatedChain {
            params: *params,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &QueueParams {
        &self.params
    }

    fn at_boundary(&self, n: usize) -> bool {
        match self.params.capacity {
            Some(c) => n == c,
            None => false,
        }
    }

    /// Up-jump probability from state `n` (0 at a capacity boundary; at the
    /// truncation top of an unbounded chain the mass leaks out).
    pub fn up(&self, n: usize) -> f64 {
        if self.at_boundary(n) {
            0.0
        } else {
            self.params.rho / self.total_rate(n)
        }
    }

    pub fn down(&self, n: usize) -> f64 {
        n as f64 / self.total_rate(n)
    }

    /// Absorption probability from state `n` (the observer leaves).
    pub fn absorb(&self, n: usize) -> f64 {
        self.params.sigma / self.total_rate(n)
    }

    fn total_rate(&self, n: usize) -> f64 {
        let arrival = if self.at_boundary(n) { 0.0 } else { self.params.rho };
        arrival + n as f64 + self.params.sigma
    }

    /// One step of the row-vector iteration `v <- v A`.
    fn step_row(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if v[i] == 0.0 {
                continue;
            }
            if i + 1 < n {
                out[i + 1] += v[i] * self.up(i);
            }
            if i > 0 {
                out[i - 1] += v[i] * self.down(i);
            }
        }
        out
    }
}

fn poisson_tail_beyond(rho: f64, m: usize) -> f64 {
    let mut mass = (-rho).exp();
    let mut cum = 0.0;
    for n in 0..=m {
        cum += mass;
        mass *= rho / (n + 1) as f64;
    }
    (1.0 - cum).max(0.0)
}

/// `t_e0 (zI - A)^{-1} e_m` by a tridiagonal transpose solve at the chain's
/// dimension and at double (unbounded case); errors if doubling to 2^16
/// never stabilizes the value to 1e-12.
pub fn truncated_resolvent(chain: &TruncatedChain, z: f64, m: usize) -> Result<f64> {
    let solve = |c: &TruncatedChain| -> Result<f64> {
        if m >= c.dim() {
            return Ok(0.0);
        }
        resolvent_row(c, z).map(|u| u[m])
    };
    if chain.params().capacity.is_some() {
        return solve(chain);
    }
    let mut dim = chain.dim();
    let mut prev = solve(&TruncatedChain::with_dimension(chain.params(), dim)?)?;
    loop {
        dim *= 2;
        if dim > 1 << 16 {
            return Err(Error::Truncation(format!(
                "resolvent did not stabilize by dimension {}",
                dim / 2
            )));
        }
        let cur = solve(&TruncatedChain::with_dimension(chain.params(), dim)?)?;
        if (cur - prev).abs() < 1e-12 {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// Row `t_e0 (zI - A)^{-1}` via the transpose (Thomas) solve.
fn resolvent_row(chain: &TruncatedChain, z: f64) -> Result<Vec<f64>> {
    let n = chain.dim();
    // (zI - A)^T u = e0. Transpose: entry (i, i+1) of A^T is down(i+1),
    // entry (i, i-1) is up(i-1).
    let mut diag = vec![z; n];
    let mut rhs = vec![0.0; n];
    rhs[0] = 1.0;
    // Forward elimination.
    let upper: Vec<f64> = (0..n - 1).map(|i| -chain.down(i + 1)).collect();
    for i in 1..n {
        let sub = -chain.up(i - 1);
        if diag[i - 1] == 0.0 {
            return Err(Error::domain("singular resolvent system"));
        }
        let f = sub / diag[i - 1];
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    let mut u = vec![0.0; n];
    u[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        u[i] = (rhs[i] - upper[i] * u[i + 1]) / diag[i];
    }
    Ok(u)
}

/// `t_e0 A^k e_m` by sparse row-vector iteration.
pub fn truncated_power(chain: &TruncatedChain, k: usize, m: usize) -> Result<f64> {
    if m >= chain.dim() {
        return Err(Error::domain(format!(
            "state {m} outside chain dimension {}",
            chain.dim()
        )));
    }
    let mut v = vec![0.0; chain.dim()];
    v[0] = 1.0;
    for _ in 0..k {
        v = chain.step_row(&v);
    }
    Ok(v[m])
}

/// Joint table `P(kappa = k, nu = m)` for `1 <= k <= kmax`, `m < dim`:
/// absorb after `k-1` chain steps. Row index is `k`, row 0 is all zeros.
pub fn joint_kappa_nu(chain: &TruncatedChain, kmax: usize) -> Result<Vec<Vec<f64>>> {
    if kmax < 1 {
        return Err(Error::domain("kmax must be >= 1"));
    }
    let n = chain.dim();
    let mut table = vec![vec![0.0; n]; kmax + 1];
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    for k in 1..=kmax {
        for m in 0..n {
            table[k][m] = v[m] * chain.absorb(m);
        }
        v = chain.step_row(&v);
    }
    Ok(table)
}

/// Marginals and derived laws from a [`joint_kappa_nu`] table.
pub struct JointMarginals {
    pub kappa: Vec<f64>,
    pub nu: Vec<f64>,
    pub departures: Vec<f64>,
    pub arrivals: Vec<f64>,
    pub total: f64,
}

/// Collapse the joint table: each `(k, m)` cell has `d = (k-m-1)/2`
/// departures and `a = m + d` arrivals; odd `k-m-1` cells carry no mass.
pub fn joint_marginals(table: &[Vec<f64>]) -> JointMarginals {
    let kmax = table.len() - 1;
    let width = table.first().map_or(0, Vec::len);
    let mut kappa = vec![0.0; kmax + 1];
    let mut nu = vec![0.0; width];
    let mut departures = vec![0.0; (kmax + 1) / 2 + 1];
    let mut arrivals = vec![0.0; kmax + width];
    let mut total = 0.0;
    for (k, row) in table.iter().enumerate() {
        for (m, &p) in row.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            kappa[k] += p;
            nu[m] += p;
            total += p;
            if k >= m + 1 && (k - m - 1) % 2 == 0 {
                let d = (k - m - 1) / 2;
                departures[d] += p;
                arrivals[m + d] += p;
            }
        }
    }
    JointMarginals {
        kappa,
        nu,
        departures,
        arrivals,
        total,
    }
}

/// Stationary law of the `c`-server loss system from the balance equations
/// (dense solve, independent of the closed-form Erlang expression).
pub fn erlang_stationary(c: usize, rho: f64) -> Result<Pmf> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    let n = c + 1;
    // pi Q = 0 with sum(pi) = 1; build Q^T, replace last row by ones.
    let mut a = vec![vec![0.0f64; n]; n];
    for s in 0..n {
        let arr = if s < c { rho } else { 0.0 };
        let dep = s as f64;
        // Q[s][s] = -(arr+dep), Q[s][s+1] = arr, Q[s][s-1] = dep.
        a[s][s] = -(arr + dep);
        if s + 1 < n {
            a[s + 1][s] = arr;
        }
        if s > 0 {
            a[s - 1][s] = dep;
        }
    }
    let mut rhs = vec![0.0f64; n];
    for col in 0..n {
        a[n - 1][col] = 1.0;
    }
    rhs[n - 1] = 1.0;
    let pi = solve_dense(a, rhs)?;
    Pmf::new(pi, 0.0, PmfMethod::Oracle, true)
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::domain("singular balance system"));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Joint law of (in system, departed) at horizon `t` by uniformization of
/// the arrival/departure process; independent route to the fixed-t laws.
///
/// Returns a matrix `p[n][d]`. `capacity` limits the occupancy if set; the
/// occupancy truncation for the unbounded case is chosen like the chain
/// truncation. `dmax` bounds the recorded departure count.
pub fn uniformized_joint_nd(
    rho: f64,
    capacity: Option<usize>,
    t: f64,
    dmax: usize,
) -> Result<Vec<Vec<f64>>> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    let nmax = match capacity {
        Some(c) => c,
        None => {
            // Occupancy is at most Poisson(rho)-like; reuse the tail rule
            // on the Poisson mean plus the departure budget for safety.
            let mut m = 8usize;
            while poisson_tail_beyond(rho, m - 2) >= 1e-16 {
                m *= 2;
            }
            2 * m
        }
    };
    let nd = (nmax + 1) * (dmax + 1);
    let lambda = rho + nmax as f64; // uniformization rate
    let idx = |n: usize, d: usize| n * (dmax + 1) + d;
    // One step of the uniformized transition kernel.
    let step = |p: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; nd];
        for n in 0..=nmax {
            for d in 0..=dmax {
                let v = p[idx(n, d)];
                if v == 0.0 {
                    continue;
                }
                let up = if Some(n) == capacity || n == nmax {
                    0.0
                } else {
                    rho / lambda
                };
                let down = n as f64 / lambda;
                let stay = 1.0 - up - down;
                out[idx(n, d)] += v * stay;
                if up > 0.0 {
                    out[idx(n + 1, d)] += v * up;
                }
                if n > 0 {
                    if d < dmax {
                        out[idx(n - 1, d + 1)] += v * down;
                    }
                    // departures beyond dmax fall off the table
                }
            }
        }
        out
    };
    let mut p = vec![0.0; nd];
    p[idx(0, 0)] = 1.0;
    let mut acc = vec![0.0; nd];
    // Poisson(lambda t) weights, summed until the remaining tail < 1e-13.
    let lt = lambda * t;
    let mut weight = (-lt).exp();
    let mut cum = 0.0;
    let mut k = 0usize;
    loop {
        for i in 0..nd {
            acc[i] += weight * p[i];
        }
        cum += weight;
        if 1.0 - cum < 1e-13 {
            break;
        }
        if k > 100_000 {
            return Err(Error::Convergence {
                context: "uniformization Poisson expansion".into(),
                last_term: weight,
            });
        }
        p = step(&p);
        k += 1;
        weight *= lt / k as f64;
    }
    let mut out = vec![vec![0.0; dmax + 1]; nmax + 1];
    for n in 0..=nmax {
        for d in 0..=dmax {
            out[n][d] = acc[idx(n, d)];
        }
    }
    Ok(out)
}
