//! The complex-scaling contour `x ↦ x + λ s_R(x)`.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sector half-angle `α`; admissible scaling parameters satisfy `|λ| < sin α`.
pub const SECTOR_ANGLE: f64 = FRAC_PI_4 - 0.01;

/// Scaling function `s` with `s = 0` on `(−∞, 1]`, `s′` ramping from 0 to 1 over
/// `[1, 1 + ramp_width]` by a quintic smoothstep, and `s′ ≡ 1` afterwards.
/// The contour uses the shifted copy `s_R(x) = s(x − R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingProfile {
    pub onset: f64,
    pub ramp_width: f64,
}

impl ScalingProfile {
    pub fn new(onset: f64, ramp_width: f64) -> Result<Self> {
        if !(onset.is_finite() && onset > 0.0) {
            return Err(Error::Config(format!("scaling onset R must be positive, got {onset}")));
        }
        if !(ramp_width.is_finite() && ramp_width > 0.0) {
            return Err(Error::Config(format!(
                "ramp width must be positive, got {ramp_width}"
            )));
        }
        Ok(Self { onset, ramp_width })
    }

    /// `R ≥ c + 1` keeps the deformation on the analytic tail of a model with onset `c`.
    pub fn check_against_tail(&self, c: f64) -> Result<()> {
        if self.onset < c + 1.0 {
            return Err(Error::Config(format!(
                "scaling onset R = {} must be at least c + 1 = {}",
                self.onset,
                c + 1.0
            )));
        }
        Ok(())
    }

    /// Unshifted `(s(x), s′(x))`.
    pub fn s(&self, x: f64) -> (f64, f64) {
        let w = self.ramp_width;
        if x <= 1.0 {
            (0.0, 0.0)
        } else if x >= 1.0 + w {
            (0.5 * w + (x - 1.0 - w), 1.0)
        } else {
            let t = (x - 1.0) / w;
            let t3 = t * t * t;
            let ds = t3 * (10.0 + t * (-15.0 + 6.0 * t));
            // ∫ smoothstep = t⁶ − 3t⁵ + 5t⁴/2
            let s = w * t3 * t * (2.5 + t * (-3.0 + t));
            (s, ds)
        }
    }

    /// `(s_R(x), s′_R(x))` with `s_R(x) = s(x − R)`.
    pub fn shifted(&self, x: f64) -> (f64, f64) {
        self.s(x - self.onset)
    }

    /// Two-ended version used on the whole line: each end `±x → ∞` is scaled
    /// outward. Returns the signed displacement and `s′`.
    pub fn two_ended(&self, x: f64) -> (f64, f64) {
        let (s, ds) = self.shifted(x.abs());
        (if x < 0.0 { -s } else { s }, ds)
    }
}

pub fn scaling_s(profile: &ScalingProfile, x: f64) -> (f64, f64) {
    profile.s(x)
}

/// Complex scaling parameter `λ` restricted to the disk `|λ| < sin α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParameter {
    lambda: Complex64,
}

impl ScalingParameter {
    pub fn new(lambda: Complex64) -> Result<Self> {
        let max = Self::max_modulus();
        if !(lambda.norm() < max) {
            return Err(Error::Parameter(format!(
                "|lambda| = {} must be below sin(alpha) = {max}",
                lambda.norm()
            )));
        }
        Ok(Self { lambda })
    }

    pub fn zero() -> Self {
        Self {
            lambda: Complex64::new(0.0, 0.0),
        }
    }

    pub fn imag(t: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, t))
    }

    pub fn max_modulus() -> f64 {
        SECTOR_ANGLE.sin()
    }

    pub fn value(&self) -> Complex64 {
        self.lambda
    }

    pub fn conj(&self) -> Self {
        Self {
            lambda: self.lambda.conj(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.lambda.im == 0.0
    }
}

/// Point `z = x + λ s_R(x)` on the contour and the Jacobian `j = 1 + λ s′_R(x)`.
pub fn contour_point(
    profile: &ScalingProfile,
    lambda: &ScalingParameter,
    x: f64,
) -> (Complex64, Complex64) {
    let (s, ds) = profile.shifted(x);
    let l = lambda.value();
    (x + l * s, 1.0 + l * ds)
}
