//! Essential-spectrum loci of the deformed, conjugated operator and the
//! classification of computed eigenvalues against them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `ξ ↦ ν − (1+λ)^{−2}(β + iξ)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssentialCurve {
    pub threshold: f64,
    pub lambda: Complex64,
    pub beta: Complex64,
}

impl EssentialCurve {
    pub fn new(threshold: f64, lambda: Complex64, beta: Complex64) -> Self {
        Self {
            threshold,
            lambda,
            beta,
        }
    }

    pub fn point(&self, xi: f64) -> Complex64 {
        let w = self.beta + Complex64::new(0.0, xi);
        self.threshold - w * w / ((1.0 + self.lambda) * (1.0 + self.lambda))
    }

    /// True when the locus is a subset of the real axis.
    pub fn is_real(&self) -> bool {
        self.lambda.im == 0.0 && self.beta == Complex64::new(0.0, 0.0)
    }

    /// Euclidean distance from `z` to the locus.
    pub fn distance(&self, z: Complex64) -> f64 {
        let j2 = (1.0 + self.lambda) * (1.0 + self.lambda);
        // in the variable w = (ν − z)(1+λ)² the locus is ξ ↦ (β + iξ)²
        let w = (self.threshold - z) * j2;
        let a = Complex64::new(0.0, 2.0) * self.beta;
        let c = self.beta * self.beta - w;
        // d/dξ |(β+iξ)² − w|² / 2 = 2ξ³ − 3 Re(a) ξ² + (|a|² − 2 Re c) ξ + Re(a c̄)
        let coeffs = [
            (a * c.conj()).re,
            a.norm_sqr() - 2.0 * c.re,
            -3.0 * a.re,
            2.0,
        ];
        let mut best = f64::INFINITY;
        for xi in real_cubic_roots(coeffs) {
            best = best.min((self.point(xi) - z).norm());
        }
        best
    }
}

/// Samples of the locus on `xi_grid`.
pub fn predict_essential_curve(
    threshold: f64,
    lambda: Complex64,
    beta: Complex64,
    xi_grid: &[f64],
) -> Vec<Complex64> {
    let curve = EssentialCurve::new(threshold, lambda, beta);
    xi_grid.iter().map(|&xi| curve.point(xi)).collect()
}

/// Real roots of `c0 + c1 x + c2 x² + c3 x³` with `c3 ≠ 0`, by bisection on
/// the monotone pieces between critical points.
fn real_cubic_roots(c: [f64; 4]) -> Vec<f64> {
    let p = |x: f64| ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
    // critical points from 3c3 x² + 2c2 x + c1
    let (qa, qb, qc) = (3.0 * c[3], 2.0 * c[2], c[1]);
    let disc = qb * qb - 4.0 * qa * qc;
    let mut breaks = Vec::new();
    if disc > 0.0 {
        let s = disc.sqrt();
        let r1 = (-qb - s) / (2.0 * qa);
        let r2 = (-qb + s) / (2.0 * qa);
        breaks.push(r1.min(r2));
        breaks.push(r1.max(r2));
    }
    let bound = 1.0 + c[..3].iter().map(|x| (x / c[3]).abs()).fold(0.0, f64::max);
    let mut edges = vec![-bound];
    edges.extend(breaks.into_iter().filter(|b| b.abs() < bound));
    edges.push(bound);
    let mut roots = Vec::new();
    for w in edges.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (plo, phi) = (p(lo), p(hi));
        if plo == 0.0 {
            roots.push(lo);
            continue;
        }
        if plo.signum() == phi.signum() {
            // a double root sits at a critical point
            if phi.abs() <= 1e-12 * bound.powi(3) {
                roots.push(hi);
            }
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if p(mid).signum() == plo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenClass {
    NearCurve,
    NearRealIsolated,
    Outlier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayDeviationReport {
    pub classes: Vec<EigenClass>,
    /// Distance of each eigenvalue to the nearest curve.
    pub distances: Vec<f64>,
    pub curve_tolerance: f64,
    pub real_band: f64,
    pub max_curve_distance: f64,
    pub near_real_isolated: Vec<Complex64>,
    /// Eigenvalues with `|Im| > real_band`.
    pub nonreal_count: usize,
    /// Non-real eigenvalues within `curve_tolerance` of a curve.
    pub nonreal_near_curve: usize,
    /// Largest `distance / |μ − ν|` over non-real eigenvalues.
    pub max_relative_deviation: f64,
}

impl RayDeviationReport {
    pub fn nonreal_fraction_near_curve(&self) -> f64 {
        if self.nonreal_count == 0 {
            1.0
        } else {
            self.nonreal_near_curve as f64 / self.nonreal_count as f64
        }
    }
}

/// Classifies eigenvalues: near-real points that are not explained by a
/// non-real curve are discrete-spectrum candidates.
pub fn ray_deviation(
    eigenvalues: &[Complex64],
    curves: &[EssentialCurve],
    real_band: f64,
    curve_tolerance: f64,
) -> RayDeviationReport {
    let mut report = RayDeviationReport {
        classes: Vec::with_capacity(eigenvalues.len()),
        distances: Vec::with_capacity(eigenvalues.len()),
        curve_tolerance,
        real_band,
        max_curve_distance: 0.0,
        near_real_isolated: Vec::new(),
        nonreal_count: 0,
        nonreal_near_curve: 0,
        max_relative_deviation: 0.0,
    };
    for &z in eigenvalues {
        let (dist, curve) = curves
            .iter()
            .map(|c| (c.distance(z), c))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map_or((f64::INFINITY, None), |(d, c)| (d, Some(c)));
        let near_real = z.im.abs() <= real_band;
        let near_curve = dist <= curve_tolerance;
        let on_nonreal_curve = near_curve && curve.is_some_and(|c| !c.is_real());
        let class = if near_real && !on_nonreal_curve {
            report.near_real_isolated.push(z);
            EigenClass::NearRealIsolated
        } else if near_curve {
            report.max_curve_distance = report.max_curve_distance.max(dist);
            EigenClass::NearCurve
        } else {
            EigenClass::Outlier
        };
        if !near_real {
            report.nonreal_count += 1;
            if near_curve {
                report.nonreal_near_curve += 1;
            }
            if let Some(c) = curve {
                let r = (z - c.threshold).norm();
                if r > 0.0 {
                    report.max_relative_deviation = report.max_relative_deviation.max(dist / r);
                }
            }
        }
        report.classes.push(class);
        report.distances.push(dist);
    }
    report
}
