use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid1D;

/// Real symmetric tridiagonal matrix on a 1D grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub grid: Grid1D,
    pub provenance: String,
}

impl TridiagonalOperator {
    /// Bare matrix without grid context; the grid is a unit-spaced placeholder.
    pub fn from_parts(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n - 1");
        let n = diag.len();
        Self {
            diag,
            off,
            grid: Grid1D {
                x_min: 0.0,
                x_max: (n + 1) as f64,
                n_points: n,
            },
            provenance: "explicit".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Infinity norm, used as the scale for relative tolerances.
    pub fn norm_inf(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    pub fn to_complex(&self) -> ComplexTridiagonalOperator {
        let c = |v: &Vec<f64>| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        ComplexTridiagonalOperator {
            diag: c(&self.diag),
            lower: c(&self.off),
            upper: c(&self.off),
            grid: self.grid,
            provenance: self.provenance.clone(),
        }
    }
}

/// General complex tridiagonal matrix. `lower[i]` sits at `(i+1, i)`, `upper[i]` at `(i, i+1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexTridiagonalOperator {
    pub diag: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub upper: Vec<Complex64>,
    pub grid: Grid1D,
    pub provenance: String,
}

impl ComplexTridiagonalOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, v: &[Complex64], out: &mut [Complex64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.lower[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.upper[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }

    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut r = self.diag[i].norm();
                if i > 0 {
                    r += self.lower[i - 1].norm();
                }
                if i + 1 < n {
                    r += self.upper[i].norm();
                }
                r
            })
            .fold(0.0, f64::max)
    }

    /// Products `lower_i · upper_i`, invariant under diagonal similarity.
    pub fn pair_products(&self) -> Vec<Complex64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| l * u)
            .collect()
    }

    /// Complex-symmetric matrix diagonally similar to this one
    /// (off-diagonals `√(lower_i upper_i)`, principal branch).
    pub fn symmetrized(&self) -> ComplexTridiagonalOperator {
        let off: Vec<Complex64> = self.pair_products().iter().map(|p| p.sqrt()).collect();
        ComplexTridiagonalOperator {
            diag: self.diag.clone(),
            lower: off.clone(),
            upper: off,
            grid: self.grid,
            provenance: format!("{} [symmetrized]", self.provenance),
        }
    }
}
