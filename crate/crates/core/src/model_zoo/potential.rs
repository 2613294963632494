//! One-dimensional axial potentials fed to the mode-operator assembly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::profile::SeparableModel;
use crate::error::{Error, Result};

/// A potential on the axis that is analytic (hence continuable onto the
/// scaling contour) for `|Re z| ≥ analytic_onset()`.
pub trait AxialPotential {
    fn value(&self, x: f64) -> f64;

    /// Continuation to a contour point. Real `z` must reproduce `value` exactly.
    fn continued(&self, z: Complex64) -> Result<Complex64>;

    fn analytic_onset(&self) -> f64;

    fn describe(&self) -> String;
}

/// `V ≡ 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ZeroPotential;

impl AxialPotential for ZeroPotential {
    fn value(&self, _x: f64) -> f64 {
        0.0
    }

    fn continued(&self, _z: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }

    fn analytic_onset(&self) -> f64 {
        0.0
    }

    fn describe(&self) -> String {
        "V = 0".into()
    }
}

/// Compactly supported well `V = −depth` on `|x| < half_width`.
///
/// At `|x| = half_width` the midpoint value `−depth/2` is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareWell {
    pub depth: f64,
    pub half_width: f64,
}

impl SquareWell {
    pub fn new(depth: f64, half_width: f64) -> Result<Self> {
        if !(depth.is_finite() && depth > 0.0 && half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Config(format!(
                "square well needs positive depth and half-width, got {depth}, {half_width}"
            )));
        }
        Ok(Self { depth, half_width })
    }
}

impl AxialPotential for SquareWell {
    fn value(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax < self.half_width {
            -self.depth
        } else if ax == self.half_width {
            -0.5 * self.depth
        } else {
            0.0
        }
    }

    fn continued(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Ok(Complex64::new(self.value(z.re), 0.0));
        }
        if z.re.abs() <= self.half_width {
            return Err(Error::Contract(format!(
                "complex argument {z} inside the well support"
            )));
        }
        Ok(Complex64::new(0.0, 0.0))
    }

    fn analytic_onset(&self) -> f64 {
        self.half_width
    }

    fn describe(&self) -> String {
        format!(
            "square well depth {} half-width {}",
            self.depth, self.half_width
        )
    }
}

/// The `k`-th separated-variable potential `V_k` of a [`SeparableModel`].
#[derive(Debug, Clone, Copy)]
pub struct ModePotential<'a> {
    pub model: &'a SeparableModel,
    pub sigma: f64,
}

impl SeparableModel {
    pub fn mode(&self, sigma: f64) -> ModePotential<'_> {
        ModePotential { model: self, sigma }
    }
}

impl AxialPotential for ModePotential<'_> {
    fn value(&self, x: f64) -> f64 {
        self.model.potential_real(self.sigma, x)
    }

    fn continued(&self, z: Complex64) -> Result<Complex64> {
        self.model.potential(self.sigma, z)
    }

    fn analytic_onset(&self) -> f64 {
        self.model.c
    }

    fn describe(&self) -> String {
        format!(
            "mode potential n={} delta={} c={} amplitude={} sigma={}",
            self.model.n, self.model.delta, self.model.c, self.model.amplitude, self.sigma
        )
    }
}

/// `V_k(z)` for the separable model.
pub fn potential_vk(model: &SeparableModel, sigma: f64, z: Complex64) -> Result<Complex64> {
    if sigma < 0.0 {
        return Err(Error::Contract(format!("sigma must be nonnegative, got {sigma}")));
    }
    model.potential(sigma, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_well_values() {
        let w = SquareWell::new(5.0, 2.0).unwrap();
        assert_eq!(w.value(1.0), -5.0);
        assert_eq!(w.value(-2.0), -2.5);
        assert_eq!(w.value(3.0), 0.0);
        assert!(w.continued(Complex64::new(1.0, 0.5)).is_err());
        assert_eq!(w.continued(Complex64::new(3.0, 0.5)).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn negative_sigma_rejected() {
        use crate::model_zoo::CrossSectionSpec;
        let m = SeparableModel::new(1, 1.0, 1.0, 1.0, CrossSectionSpec::interval_dirichlet())
            .unwrap();
        assert!(potential_vk(&m, -1.0, Complex64::new(3.0, 0.0)).is_err());
        let z = Complex64::new(3.0, 0.0);
        assert_eq!(potential_vk(&m, 1.0, z).unwrap().re, m.mode(1.0).value(3.0));
    }
}
