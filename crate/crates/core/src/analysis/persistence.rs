//! Persistence of real discrete eigenvalues under complex scaling and
//! exponential conjugation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discretize::{
    assemble_deformed_potential_operator, conjugate_operator, ComplexTridiagonalOperator, Grid1D,
};
use crate::eig_complex::{
    complex_eigenvalues, nearest_eigenvalue, tridiagonal_to_dense, NearestOptions,
};
use crate::error::{Error, Result};
use crate::model_zoo::{AxialPotential, ScalingParameter, ScalingProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceEntry {
    pub lambda: Complex64,
    pub mu_hat: Complex64,
    /// `|Re μ̂ − μ|`.
    pub drift: f64,
    pub imag: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceReport {
    pub mu_candidate: f64,
    pub tolerance: f64,
    pub entries: Vec<PersistenceEntry>,
    pub failures: Vec<String>,
}

impl PersistenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn max_drift(&self) -> f64 {
        self.entries.iter().map(|e| e.drift).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|e| e.imag.abs()).fold(0.0, f64::max)
    }
}

/// Discretization budget `10·(h² + e^{−2√gap·L})`.
pub fn persistence_tolerance(h: f64, gap: f64, reach: f64) -> f64 {
    10.0 * (h * h + (-2.0 * gap.sqrt() * reach).exp())
}

/// For each `λ`, the eigenvalue of the deformed matrix nearest `mu_candidate`
/// must be real and unmoved within `tol` (defaulting to the discretization
/// budget, with the mode threshold at 0).
pub fn persistence_check<P: AxialPotential + ?Sized>(
    potential: &P,
    mu_candidate: f64,
    lambdas: &[ScalingParameter],
    grid: &Grid1D,
    profile: &ScalingProfile,
    tol: Option<f64>,
) -> Result<PersistenceReport> {
    let tolerance =
        tol.unwrap_or_else(|| persistence_tolerance(grid.h(), (-mu_candidate).max(0.0), grid.reach()));
    let mut report = PersistenceReport {
        mu_candidate,
        tolerance,
        entries: Vec::with_capacity(lambdas.len()),
        failures: Vec::new(),
    };
    for lambda in lambdas {
        let op = assemble_deformed_potential_operator(potential, grid, profile, lambda)?;
        let near = nearest_eigenvalue(&op, Complex64::new(mu_candidate, 0.0), &NearestOptions::default())?;
        let drift = (near.value.re - mu_candidate).abs();
        let imag = near.value.im;
        let passed = drift <= tolerance && imag.abs() <= tolerance;
        if !passed {
            report.failures.push(format!(
                "lambda={}: mu_hat={} drift={drift:.3e} im={imag:.3e} tol={tolerance:.3e}",
                lambda.value(),
                near.value
            ));
        }
        report.entries.push(PersistenceEntry {
            lambda: lambda.value(),
            mu_hat: near.value,
            drift,
            imag,
            residual: near.residual,
            passed,
        });
    }
    Ok(report)
}

/// Max distance under greedy nearest matching of two equally sized multisets.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Contract(format!(
            "multisets differ in size: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("sizes match");
        used[j] = true;
        worst = worst.max(d);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationEntry {
    pub beta: Complex64,
    /// `log10 cond(D) = |Re β|·(max s − min s) / ln 10`.
    pub log10_condition: f64,
    pub multiset_distance: f64,
}

/// Dense spectra of `op` and of `D⁻¹ op D` for each `β`, compared as multisets.
pub fn conjugation_invariance(
    op: &ComplexTridiagonalOperator,
    betas: &[Complex64],
    profile: &ScalingProfile,
) -> Result<Vec<ConjugationEntry>> {
    let base = complex_eigenvalues(&tridiagonal_to_dense(op)?)?.eigenvalues;
    let s: Vec<f64> = op.grid.points().map(|x| profile.shifted(x.abs()).0).collect();
    let spread = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - s.iter().cloned().fold(f64::INFINITY, f64::min);
    betas
        .iter()
        .map(|&beta| {
            let conj = conjugate_operator(op, beta, profile);
            let spec = complex_eigenvalues(&tridiagonal_to_dense(&conj)?)?.eigenvalues;
            Ok(ConjugationEntry {
                beta,
                log10_condition: beta.re.abs() * spread / std::f64::consts::LN_10,
                multiset_distance: multiset_distance(&base, &spec)?,
            })
        })
        .collect()
}
