use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform interior grid on `(x_min, x_max)` with Dirichlet truncation at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::Config(format!(
                "grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 3 {
            return Err(Error::Config(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Grid with spacing as close as possible to `h`.
    pub fn with_spacing(x_min: f64, x_max: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Config(format!("grid spacing must be positive, got {h}")));
        }
        let cells = ((x_max - x_min) / h).round();
        if !(cells >= 4.0) {
            return Err(Error::Config(format!(
                "spacing {h} too coarse for [{x_min}, {x_max}]"
            )));
        }
        Self::new(x_min, x_max, cells as usize - 1)
    }

    /// `[−L, L]`.
    pub fn symmetric(half_length: f64, h: f64) -> Result<Self> {
        Self::with_spacing(-half_length, half_length, h)
    }

    /// `[0, L]` with a Dirichlet wall on the axis.
    pub fn half_line(length: f64, h: f64) -> Result<Self> {
        Self::with_spacing(0.0, length, h)
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points + 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.h()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.x_min == -self.x_max
    }

    /// Length of the truncated domain on the positive side.
    pub fn reach(&self) -> f64 {
        self.x_max.max(-self.x_min)
    }
}
