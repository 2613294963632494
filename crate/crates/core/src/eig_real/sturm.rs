//! Sturm-sequence counting and bisection for symmetric tridiagonal matrices.

use serde::{Deserialize, Serialize};

use crate::discretize::TridiagonalOperator;
use crate::error::{Error, Result};

/// Half-open window `(lo, hi]` of the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWindow {
    pub lo: f64,
    pub hi: f64,
}

impl SpectralWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!("invalid spectral window ({lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverMeta {
    pub method: String,
    pub h: f64,
    pub reach: f64,
    pub tolerance: f64,
    pub iterations: usize,
}

/// Computed eigenvalues (ascending) with optional eigenvectors and residuals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub residuals: Vec<f64>,
    pub meta: SolverMeta,
}

/// Largest number of eigenvalues a single window query may return.
pub const MAX_WINDOW_EIGENVALUES: usize = 1_000_000;

fn pivot_floor(op: &TridiagonalOperator) -> f64 {
    let emax = op.off.iter().fold(1.0f64, |m, e| m.max(e * e));
    f64::MIN_POSITIVE * emax
}

/// Number of eigenvalues strictly below `shift`.
pub fn sturm_count(op: &TridiagonalOperator, shift: f64) -> usize {
    count_below(&op.diag, &op.off, shift, pivot_floor(op))
}

fn count_below(diag: &[f64], off: &[f64], shift: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = 0.0;
    for i in 0..diag.len() {
        q = if i == 0 {
            diag[0] - shift
        } else {
            diag[i] - shift - off[i - 1] * off[i - 1] / q
        };
        // a vanishing pivot counts as positive: the count is taken just below `shift`
        if q.abs() < pivmin {
            q = if q < 0.0 { -pivmin } else { pivmin };
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Number of eigenvalues `≤ x`.
pub fn count_at_most(op: &TridiagonalOperator, x: f64) -> usize {
    sturm_count(op, x.next_up())
}

/// Default bisection tolerance `1e−10·max(1, spectral bound)`.
pub fn default_tolerance(op: &TridiagonalOperator) -> f64 {
    1e-10 * op.norm_inf().max(1.0)
}

/// The `k`-th eigenvalue (0-based) bracketed by `count(lo) ≤ k < count(hi)`.
fn bisect_index(op: &TridiagonalOperator, k: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let pivmin = pivot_floor(op);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(&op.diag, &op.off, mid, pivmin) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues in `(lo, hi]` to absolute accuracy `tol`, with multiplicity.
pub fn eigenvalues_in_window(
    op: &TridiagonalOperator,
    window: SpectralWindow,
    tol: f64,
) -> Result<SpectrumResult> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("bisection tolerance must be positive, got {tol}")));
    }
    let first = count_at_most(op, window.lo);
    let end = count_at_most(op, window.hi);
    let m = end - first;
    if m > MAX_WINDOW_EIGENVALUES {
        return Err(Error::Resource(format!(
            "window ({}, {}] holds {m} eigenvalues",
            window.lo, window.hi
        )));
    }
    let (g_lo, g_hi) = op.gershgorin();
    let lo = window.lo.max(g_lo - tol);
    let hi = window.hi.next_up().min(g_hi + tol);
    let eigenvalues = (first..end)
        .map(|k| bisect_index(op, k, lo, hi, tol))
        .collect();
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors: None,
        residuals: Vec::new(),
        meta: SolverMeta {
            method: "sturm-bisection".into(),
            h: op.grid.h(),
            reach: op.grid.reach(),
            tolerance: tol,
            iterations: 0,
        },
    })
}

/// Every eigenvalue of `op`, ascending.
pub fn all_eigenvalues(op: &TridiagonalOperator, tol: f64) -> Result<Vec<f64>> {
    let (g_lo, g_hi) = op.gershgorin();
    let w = SpectralWindow::new(g_lo - 1.0 - tol, g_hi + 1.0 + tol)?;
    Ok(eigenvalues_in_window(op, w, tol)?.eigenvalues)
}
