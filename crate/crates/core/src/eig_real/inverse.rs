//! Inverse iteration with Rayleigh-quotient refinement for symmetric tridiagonals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sturm::{default_tolerance, sturm_count};
use crate::discretize::TridiagonalOperator;
use crate::error::{Error, Result};
use crate::linalg::{norm2, TridiagonalLu};

/// Residual bound relative to the operator scale.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseIterationOptions {
    /// Eigenvalue tolerance; clusters tighter than `10·tol` are refused.
    /// `None` uses the bisection default.
    pub tol: Option<f64>,
    pub max_iterations: usize,
    pub seed: u64,
    /// When set, keep iterating after the residual test until every component
    /// above `floor·max|v|` is stable to `1e−9` relative. Needed when tails far
    /// below machine precision matter.
    pub componentwise_floor: Option<f64>,
}

impl Default for InverseIterationOptions {
    fn default() -> Self {
        Self {
            tol: None,
            max_iterations: 60,
            seed: 0,
            componentwise_floor: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    /// Normalized so that `h·Σ v_i² = 1`, largest component positive.
    pub vector: Vec<f64>,
    /// `‖Av − μv‖ / ‖v‖`.
    pub residual: f64,
    pub iterations: usize,
}

pub fn residual_norm(op: &TridiagonalOperator, mu: f64, v: &[f64]) -> f64 {
    let mut av = vec![0.0; v.len()];
    op.matvec(v, &mut av);
    let r: f64 = av
        .iter()
        .zip(v)
        .map(|(a, x)| (a - mu * x).powi(2))
        .sum::<f64>()
        .sqrt();
    r / norm2(v)
}

fn rayleigh(op: &TridiagonalOperator, v: &[f64]) -> f64 {
    let mut av = vec![0.0; v.len()];
    op.matvec(v, &mut av);
    let num: f64 = av.iter().zip(v).map(|(a, x)| a * x).sum();
    num / v.iter().map(|x| x * x).sum::<f64>()
}

/// Eigenvector for the eigenvalue closest to `mu_approx`.
pub fn inverse_iteration(
    op: &TridiagonalOperator,
    mu_approx: f64,
    opts: &InverseIterationOptions,
) -> Result<EigenPair> {
    let n = op.dim();
    let scale = op.norm_inf().max(1.0);
    let tol = opts.tol.unwrap_or_else(|| default_tolerance(op));
    let radius = 10.0 * tol;
    let cluster = sturm_count(op, (mu_approx + radius).next_up())
        - sturm_count(op, mu_approx - radius);
    if cluster >= 2 {
        return Err(Error::Degenerate {
            center: mu_approx,
            radius,
            count: cluster,
        });
    }

    let lu = TridiagonalLu::factor(&op.off, &op.diag, &op.off, mu_approx, f64::EPSILON * scale);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let target = RESIDUAL_TOL * scale;
    let mut extra = 0;
    let mut best = f64::INFINITY;
    let mut previous = v.clone();
    for it in 1..=opts.max_iterations {
        previous.copy_from_slice(&v);
        lu.solve_in_place(&mut v);
        let nv = norm2(&v);
        if !nv.is_finite() || nv == 0.0 {
            return Err(Error::Numeric(format!(
                "inverse iteration lost the vector near {mu_approx}"
            )));
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let mu = rayleigh(op, &v);
        let res = residual_norm(op, mu, &v);
        if let Some(floor) = opts.componentwise_floor {
            if res <= target && componentwise_stable(&previous, &v, floor) {
                return Ok(finish(op, v, mu, res, it));
            }
            continue;
        }
        // keep polishing a couple of steps past the bound
        if res <= target {
            extra += 1;
            if extra >= 3 || res >= best {
                return Ok(finish(op, v, mu, res, it));
            }
        }
        best = best.min(res);
    }
    Err(Error::NoConvergence {
        index: 0,
        iterations: opts.max_iterations,
        partial: Vec::new(),
    })
}

fn componentwise_stable(old: &[f64], new: &[f64], floor: f64) -> bool {
    let peak = new.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    // the sign of the iterate may flip between steps
    let dot: f64 = old.iter().zip(new).map(|(a, b)| a * b).sum();
    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
    old.iter()
        .zip(new)
        .filter(|(_, b)| b.abs() >= floor * peak)
        .all(|(a, b)| (sign * a - b).abs() <= 1e-9 * b.abs())
}

fn finish(op: &TridiagonalOperator, mut v: Vec<f64>, mu: f64, res: f64, it: usize) -> EigenPair {
    let h = op.grid.h();
    let imax = v
        .iter()
        .enumerate()
        .fold(0, |b, (i, x)| if x.abs() > v[b].abs() { i } else { b });
    let sign = if v[imax] < 0.0 { -1.0 } else { 1.0 };
    let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    v.iter_mut().for_each(|x| *x *= sign / norm);
    EigenPair {
        value: mu,
        vector: v,
        residual: res,
        iterations: it,
    }
}
