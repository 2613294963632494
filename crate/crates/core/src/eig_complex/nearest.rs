//! Eigenvalue nearest a target for large complex tridiagonal operators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discretize::ComplexTridiagonalOperator;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, TridiagonalLu};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearestOptions {
    pub max_iterations: usize,
    /// Residual target relative to the operator scale.
    pub tol: f64,
    pub seed: u64,
}

impl Default for NearestOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tol: 1e-12,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearestEigenvalue {
    pub value: Complex64,
    /// `‖Av − μv‖ / ‖v‖`.
    pub residual: f64,
    /// `‖v‖² / |vᵀv|`; eigenvalue condition number for complex-symmetric structure.
    pub condition: f64,
    pub iterations: usize,
}

fn apply(op: &ComplexTridiagonalOperator, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    op.matvec(v, &mut out);
    out
}

/// Inverse iteration from `target`, re-shifting to the Rayleigh quotient once
/// the iterate has settled.
pub fn nearest_eigenvalue(
    op: &ComplexTridiagonalOperator,
    target: Complex64,
    opts: &NearestOptions,
) -> Result<NearestEigenvalue> {
    let n = op.dim();
    let scale = op.norm_inf().max(1.0);
    let tiny = f64::EPSILON * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut shift = target;
    let mut lu = TridiagonalLu::factor(&op.lower, &op.diag, &op.upper, shift, tiny);
    let mut reshifted = false;
    let mut mu = target;
    for it in 1..=opts.max_iterations {
        lu.solve_in_place(&mut v);
        let nv = norm2(&v);
        if !nv.is_finite() || nv == 0.0 {
            return Err(Error::Numeric(format!("inverse iteration lost the vector near {target}")));
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let av = apply(op, &v);
        mu = dot(&v, &av);
        let res = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - mu * x).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res <= opts.tol * scale {
            let vtv: Complex64 = v.iter().map(|x| x * x).sum();
            return Ok(NearestEigenvalue {
                value: mu,
                residual: res,
                condition: 1.0 / vtv.norm(),
                iterations: it,
            });
        }
        if !reshifted && res <= 1e-6 * scale {
            shift = mu;
            lu = TridiagonalLu::factor(&op.lower, &op.diag, &op.upper, shift, tiny);
            reshifted = true;
        }
    }
    Err(Error::NoConvergence {
        index: 0,
        iterations: opts.max_iterations,
        partial: vec![mu],
    })
}
