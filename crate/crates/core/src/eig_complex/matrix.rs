use num_complex::Complex64;

use crate::discretize::ComplexTridiagonalOperator;
use crate::error::{Error, Result};

/// Largest dimension accepted by the dense complex solver.
pub const DENSE_DIMENSION_CAP: usize = 2500;

/// Row-major dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Contract(format!(
                    "row {i} has {} entries, expected {n}",
                    r.len()
                )));
            }
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().map(|z| z.norm()).sum())
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, v: &[Complex64], out: &mut [Complex64]) {
        for i in 0..self.n {
            out[i] = self.data[i * self.n..(i + 1) * self.n]
                .iter()
                .zip(v)
                .map(|(a, x)| a * x)
                .sum();
        }
    }

    /// `log det` via LU with partial pivoting; `None` for a singular matrix.
    pub fn log_det(&self) -> Option<Complex64> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))?;
            if a[p * n + k].norm() == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                acc += Complex64::new(0.0, std::f64::consts::PI);
            }
            let pivot = a[k * n + k];
            acc += pivot.ln();
            for i in (k + 1)..n {
                let f = a[i * n + k] / pivot;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    let t = f * a[k * n + j];
                    a[i * n + j] -= t;
                }
            }
        }
        Some(acc)
    }
}

/// Dense embedding of a complex tridiagonal operator.
pub fn tridiagonal_to_dense(op: &ComplexTridiagonalOperator) -> Result<CMatrix> {
    let n = op.dim();
    if n > DENSE_DIMENSION_CAP {
        return Err(Error::Resource(format!(
            "dense complex solve of dimension {n} exceeds the cap {DENSE_DIMENSION_CAP}"
        )));
    }
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, op.diag[i]);
        if i + 1 < n {
            m.set(i + 1, i, op.lower[i]);
            m.set(i, i + 1, op.upper[i]);
        }
    }
    Ok(m)
}
