//! Banded symmetric `LDLᵀ` factorization of `A − σI` with inertia counts.

use crate::discretize::BandedOperator2D;
use crate::error::{Error, Result};

/// Number of perturbed shifts tried after a pivot breakdown.
pub const MAX_SHIFT_RETRIES: usize = 4;

/// `A − σI = L D Lᵀ` without pivoting; `L` stored column-wise in band form.
#[derive(Debug, Clone)]
pub struct BandedLdlt {
    n: usize,
    bw: usize,
    /// `work[p*(bw+1) + d]` holds `L[p+d][p]` for `d ≥ 1` and `D[p]` for `d = 0`.
    work: Vec<f64>,
    pub shift: f64,
}

impl BandedLdlt {
    /// Fails with a breakdown error when a pivot is negligible relative to the
    /// operator scale.
    pub fn factor(op: &BandedOperator2D, shift: f64) -> Result<Self> {
        let n = op.dim();
        let bw = op.bandwidth;
        let w = bw + 1;
        let mut work = op.upper_band().to_vec();
        for p in 0..n {
            work[p * w] -= shift;
        }
        let floor = 1e-13 * op.norm_inf().max(shift.abs()).max(1.0);
        for p in 0..n {
            let dp = work[p * w];
            if dp.abs() <= floor || !dp.is_finite() {
                return Err(Error::Breakdown { shift, attempts: 1 });
            }
            let reach = bw.min(n - 1 - p);
            for d1 in 1..=reach {
                let a1 = work[p * w + d1];
                if a1 == 0.0 {
                    continue;
                }
                let f = a1 / dp;
                let q = p + d1;
                for d2 in d1..=reach {
                    work[q * w + (d2 - d1)] -= f * work[p * w + d2];
                }
            }
            for d in 1..=reach {
                work[p * w + d] /= dp;
            }
        }
        Ok(Self { n, bw, work, shift })
    }

    /// Factors at `shift`, nudging it downward on breakdown.
    pub fn factor_with_retries(op: &BandedOperator2D, shift: f64) -> Result<Self> {
        let step = 1e-7 * shift.abs().max(1.0);
        for attempt in 0..=MAX_SHIFT_RETRIES {
            let s = shift - attempt as f64 * step;
            match Self::factor(op, s) {
                Ok(f) => return Ok(f),
                Err(Error::Breakdown { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Breakdown {
            shift,
            attempts: MAX_SHIFT_RETRIES + 1,
        })
    }

    /// Number of eigenvalues of `A` strictly below the factored shift.
    pub fn inertia(&self) -> usize {
        (0..self.n).filter(|&p| self.work[p * (self.bw + 1)] < 0.0).count()
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let w = self.bw + 1;
        let n = self.n;
        for p in 0..n {
            let bp = b[p];
            for d in 1..=self.bw.min(n - 1 - p) {
                b[p + d] -= self.work[p * w + d] * bp;
            }
        }
        for p in 0..n {
            b[p] /= self.work[p * w];
        }
        for p in (0..n).rev() {
            let mut acc = b[p];
            for d in 1..=self.bw.min(n - 1 - p) {
                acc -= self.work[p * w + d] * b[p + d];
            }
            b[p] = acc;
        }
    }
}

/// Number of eigenvalues of `op` strictly below `shift`, by Sylvester inertia.
pub fn inertia_count(op: &BandedOperator2D, shift: f64) -> Result<usize> {
    Ok(BandedLdlt::factor_with_retries(op, shift)?.inertia())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::GuideGrid;
    use crate::eig_real::dense::{dense_symmetric_eigenvalues, SymmetricMatrix};

    fn test_operator() -> BandedOperator2D {
        let grid = GuideGrid::new(1.0, 5, 3).unwrap();
        let bw = 3;
        let n = 15;
        let mut band = vec![0.0; n * (bw + 1)];
        for p in 0..n {
            band[p * (bw + 1)] = 4.0 + 0.3 * (p as f64).sin();
            for d in 1..=bw {
                if p + d < n {
                    band[p * (bw + 1) + d] = -1.0 / d as f64 + 0.1 * ((p * d) as f64).cos();
                }
            }
        }
        BandedOperator2D::from_upper_band(grid, 0.5, bw, band)
    }

    fn dense(op: &BandedOperator2D) -> SymmetricMatrix {
        let n = op.dim();
        let a = op.to_dense();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| a[i * n..(i + 1) * n].to_vec()).collect();
        SymmetricMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn solve_and_inertia_match_dense() {
        let op = test_operator();
        let eig = dense_symmetric_eigenvalues(&dense(&op)).unwrap();
        for shift in [eig[0] - 1.0, 0.5 * (eig[3] + eig[4]), eig[14] + 1.0] {
            let f = BandedLdlt::factor(&op, shift).unwrap();
            assert_eq!(f.inertia(), eig.iter().filter(|&&e| e < shift).count());
            let x: Vec<f64> = (0..15).map(|i| (i as f64 * 0.37).cos()).collect();
            let mut b = vec![0.0; 15];
            op.matvec(&x, &mut b);
            b.iter_mut().zip(&x).for_each(|(bi, xi)| *bi -= shift * xi);
            f.solve_in_place(&mut b);
            for (a, e) in b.iter().zip(&x) {
                assert!((a - e).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn breakdown_is_retried() {
        // a 1-dof-per-column diagonal operator with an eigenvalue exactly at the shift
        let grid = GuideGrid::new(1.0, 3, 1).unwrap();
        let op = BandedOperator2D::from_upper_band(grid, 1.0, 1, vec![1.0, 0.0, 2.0, 0.0, 3.0, 0.0]);
        assert!(matches!(BandedLdlt::factor(&op, 2.0), Err(Error::Breakdown { .. })));
        let f = BandedLdlt::factor_with_retries(&op, 2.0).unwrap();
        assert!(f.shift < 2.0);
        assert_eq!(f.inertia(), 1);
    }
}
