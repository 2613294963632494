//! Shift-invert subspace iteration for the lowest eigenpairs of a banded
//! symmetric operator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::banded::BandedLdlt;
use super::dense::{jacobi_eigen, SymmetricMatrix};
use super::inverse::RESIDUAL_TOL;
use super::sturm::{SolverMeta, SpectrumResult};
use crate::discretize::BandedOperator2D;
use crate::error::{Error, Result};

pub const MAX_REQUESTED_PAIRS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceOptions {
    pub seed: u64,
    /// Convergence target for residuals, relative to the operator scale.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            tol: 1e-11,
            max_iterations: 2000,
        }
    }
}

fn orthonormalize(block: &mut Vec<Vec<f64>>) {
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(block.len());
    for mut v in block.drain(..) {
        let before = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..2 {
            for q in &kept {
                let c: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-10 * before && nv > 0.0 {
            v.iter_mut().for_each(|x| *x /= nv);
            kept.push(v);
        }
    }
    *block = kept;
}

/// The `k` lowest eigenvalues above `shift`, with unit-norm eigenvectors.
pub fn lowest_eigenpairs_2d(
    op: &BandedOperator2D,
    k: usize,
    shift: f64,
    opts: &SubspaceOptions,
) -> Result<SpectrumResult> {
    let n = op.dim();
    if k == 0 || k > MAX_REQUESTED_PAIRS {
        return Err(Error::Config(format!(
            "requested {k} eigenpairs; must be between 1 and {MAX_REQUESTED_PAIRS}"
        )));
    }
    if k > n {
        return Err(Error::Config(format!("requested {k} eigenpairs of a {n}-dimensional operator")));
    }
    let factor = BandedLdlt::factor_with_retries(op, shift)?;
    let below = factor.inertia();
    // room for eigenvalues below the shift, which are discarded afterwards
    let p = (below + (2 * k).max(k + 8)).min(n);
    let scale = op.norm_inf().max(1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut block: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    orthonormalize(&mut block);

    let mut av = vec![0.0; n];
    for it in 1..=opts.max_iterations {
        for v in block.iter_mut() {
            factor.solve_in_place(v);
        }
        orthonormalize(&mut block);
        let m = block.len();
        let images: Vec<Vec<f64>> = block
            .iter()
            .map(|v| {
                let mut out = vec![0.0; n];
                op.matvec(v, &mut out);
                out
            })
            .collect();
        let mut h = SymmetricMatrix::zeros(m);
        for i in 0..m {
            for j in i..m {
                let a: f64 = block[i].iter().zip(&images[j]).map(|(x, y)| x * y).sum();
                let b: f64 = block[j].iter().zip(&images[i]).map(|(x, y)| x * y).sum();
                h.set(i, j, 0.5 * (a + b));
            }
        }
        let (theta, q) = jacobi_eigen(&h)?;
        let rotate = |src: &[Vec<f64>], c: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (s, &ci) in src.iter().zip(c) {
                out.iter_mut().zip(s).for_each(|(o, x)| *o += ci * x);
            }
            out
        };
        let ritz: Vec<Vec<f64>> = q.iter().map(|c| rotate(&block, c)).collect();
        let ritz_images: Vec<Vec<f64>> = q.iter().map(|c| rotate(&images, c)).collect();

        let chosen: Vec<usize> = (0..m).filter(|&i| theta[i] > factor.shift).take(k).collect();
        let residuals: Vec<f64> = chosen
            .iter()
            .map(|&i| {
                ritz_images[i]
                    .iter()
                    .zip(&ritz[i])
                    .map(|(a, x)| (a - theta[i] * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        let done = chosen.len() == k && residuals.iter().all(|&r| r <= opts.tol * scale);
        if done || it == opts.max_iterations {
            if !done {
                return Err(Error::NoConvergence {
                    index: chosen.len(),
                    iterations: it,
                    partial: chosen
                        .iter()
                        .map(|&i| num_complex::Complex64::new(theta[i], 0.0))
                        .collect(),
                });
            }
            let mut vectors = Vec::with_capacity(k);
            for &i in &chosen {
                let mut v = ritz[i].clone();
                let imax = v
                    .iter()
                    .enumerate()
                    .fold(0, |b, (j, x)| if x.abs() > v[b].abs() { j } else { b });
                if v[imax] < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                // independent residual check on the returned vector
                op.matvec(&v, &mut av);
                let r = av
                    .iter()
                    .zip(&v)
                    .map(|(a, x)| (a - theta[i] * x).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if r > RESIDUAL_TOL * scale {
                    return Err(Error::Numeric(format!(
                        "Ritz pair {} has residual {r:.3e}",
                        theta[i]
                    )));
                }
                vectors.push(v);
            }
            return Ok(SpectrumResult {
                eigenvalues: chosen.iter().map(|&i| theta[i]).collect(),
                eigenvectors: Some(vectors),
                residuals,
                meta: SolverMeta {
                    method: "shift-invert-subspace".into(),
                    h: op.grid.hx(),
                    reach: op.grid.half_length,
                    tolerance: opts.tol * scale,
                    iterations: it,
                },
            });
        }
        block = ritz;
    }
    unreachable!("loop returns on the final iteration")
}
