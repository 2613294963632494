//! Sampled numerical range and the sector `|arg(q + a)| ≤ θ` containing it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discretize::ComplexTridiagonalOperator;
use crate::eig_complex::CMatrix;
use crate::error::{Error, Result};

pub const MIN_SECTOR_SAMPLES: usize = 100;

/// A square complex operator that can be applied to vectors.
pub trait ComplexOperator {
    fn dimension(&self) -> usize;
    fn apply(&self, v: &[Complex64], out: &mut [Complex64]);
}

impl ComplexOperator for CMatrix {
    fn dimension(&self) -> usize {
        self.dim()
    }
    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        self.matvec(v, out)
    }
}

impl ComplexOperator for ComplexTridiagonalOperator {
    fn dimension(&self) -> usize {
        self.dim()
    }
    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        self.matvec(v, out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorFit {
    /// Vertex shift: the sector has its vertex at `−a`.
    pub a: f64,
    pub theta: f64,
    pub samples: usize,
    pub min_re: f64,
    pub max_abs_im: f64,
}

/// Rayleigh quotients `⟨Au, u⟩/⟨u, u⟩` on seeded random complex vectors.
pub fn rayleigh_samples<A: ComplexOperator + ?Sized>(op: &A, samples: usize, seed: u64) -> Vec<Complex64> {
    let n = op.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    (0..samples)
        .map(|_| {
            let u: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            op.apply(&u, &mut out);
            let num: Complex64 = u.iter().zip(&out).map(|(x, y)| x.conj() * y).sum();
            let den: f64 = u.iter().map(|x| x.norm_sqr()).sum();
            num / den
        })
        .collect()
}

/// Sector through sampled quotients: `a = 2·max(0, −min Re q)` moves every
/// sample into the open right half-plane, and `θ = max |arg(q + a)|`.
pub fn fit_sector(quotients: &[Complex64]) -> Result<SectorFit> {
    let min_re = quotients.iter().map(|q| q.re).fold(f64::INFINITY, f64::min);
    let max_abs_im = quotients.iter().map(|q| q.im.abs()).fold(0.0, f64::max);
    let a = 2.0 * (-min_re).max(0.0);
    let theta = quotients
        .iter()
        .map(|&q| (q + a).arg().abs())
        .fold(0.0, f64::max);
    let fit = SectorFit {
        a,
        theta,
        samples: quotients.len(),
        min_re,
        max_abs_im,
    };
    if theta >= std::f64::consts::FRAC_PI_2 - 1e-12 {
        return Err(Error::PropertyViolation(format!(
            "sampled numerical range needs a sector of angle {theta:.6} >= pi/2"
        )));
    }
    Ok(fit)
}

pub fn numerical_range_sector<A: ComplexOperator + ?Sized>(
    op: &A,
    samples: usize,
    seed: u64,
) -> Result<SectorFit> {
    if samples < MIN_SECTOR_SAMPLES {
        return Err(Error::Config(format!(
            "sector fit needs at least {MIN_SECTOR_SAMPLES} samples, got {samples}"
        )));
    }
    fit_sector(&rayleigh_samples(op, samples, seed))
}
