//! Dense symmetric oracles: Householder tridiagonalization followed by
//! bisection, and cyclic Jacobi for small problems that need vectors.

use super::sturm::all_eigenvalues;
use crate::discretize::TridiagonalOperator;
use crate::error::{Error, Result};

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Uses the upper triangle of `rows`; fails if the input is not symmetric
    /// to `1e−12` relative.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        let mut scale = 0.0f64;
        for r in rows {
            if r.len() != n {
                return Err(Error::Contract("matrix rows must be square".into()));
            }
            scale = r.iter().fold(scale, |s, x| s.max(x.abs()));
        }
        for i in 0..n {
            for j in 0..n {
                if (rows[i][j] - rows[j][i]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::Contract(format!("matrix is not symmetric at ({i}, {j})")));
                }
                m.data[i * n + j] = if i <= j { rows[i][j] } else { rows[j][i] };
            }
        }
        Ok(m)
    }

    pub fn from_tridiagonal(op: &TridiagonalOperator) -> Self {
        let n = op.dim();
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, op.diag[i]);
            if i + 1 < n {
                m.set(i, i + 1, op.off[i]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().map(|x| x.abs()).sum())
            .fold(0.0, f64::max)
    }
}

/// Householder reduction `QᵀAQ = T`; returns the tridiagonal `T`.
pub fn householder_tridiagonalize(a: &SymmetricMatrix) -> TridiagonalOperator {
    let n = a.n;
    let mut m = a.data.clone();
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = ((k + 1)..n).map(|i| m[idx(i, k)].powi(2)).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = m[idx(k + 1, k)];
        let alpha = if x0 > 0.0 { -alpha_norm } else { alpha_norm };
        let mut v = vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            v[i] = m[idx(i, k)];
        }
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I − 2vvᵀ/vᵀv) A (I − 2vvᵀ/vᵀv) on the trailing block
        let tau = 2.0 / vnorm2;
        let mut p = vec![0.0; n];
        for i in (k + 1)..n {
            p[i] = tau * ((k + 1)..n).map(|j| m[idx(i, j)] * v[j]).sum::<f64>();
        }
        let kappa = 0.5 * tau * ((k + 1)..n).map(|i| v[i] * p[i]).sum::<f64>();
        let w: Vec<f64> = (0..n).map(|i| p[i] - kappa * v[i]).collect();
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[idx(i, j)] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        m[idx(k + 1, k)] = alpha;
        m[idx(k, k + 1)] = alpha;
        for i in (k + 2)..n {
            m[idx(i, k)] = 0.0;
            m[idx(k, i)] = 0.0;
        }
    }
    let diag = (0..n).map(|i| m[idx(i, i)]).collect();
    let off = (0..n.saturating_sub(1)).map(|i| m[idx(i + 1, i)]).collect();
    TridiagonalOperator::from_parts(diag, off)
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn dense_symmetric_eigenvalues(a: &SymmetricMatrix) -> Result<Vec<f64>> {
    if a.n == 0 {
        return Ok(Vec::new());
    }
    let t = householder_tridiagonalize(a);
    let tol = 1e-13 * a.norm_inf().max(1.0);
    all_eigenvalues(&t, tol)
}

/// Cyclic Jacobi: ascending eigenvalues and the matching orthonormal
/// eigenvectors (`vectors[k]` belongs to `values[k]`).
pub fn jacobi_eigen(a: &SymmetricMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.n;
    let mut m = a.data.clone();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let total: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut converged = n < 2;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = m[p * n + r];
                if apr == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let arr = m[r * n + r];
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akr = m[k * n + r];
                    m[k * n + p] = c * akp - s * akr;
                    m[k * n + r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let ark = m[r * n + k];
                    m[p * n + k] = c * apk - s * ark;
                    m[r * n + k] = s * apk + c * ark;
                }
                for k in 0..n {
                    let qkp = q[k * n + p];
                    let qkr = q[k * n + r];
                    q[k * n + p] = c * qkp - s * qkr;
                    q[k * n + r] = s * qkp + c * qkr;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numeric("Jacobi sweeps did not converge".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&k| m[k * n + k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| q[i * n + k]).collect())
        .collect();
    Ok((values, vectors))
}
