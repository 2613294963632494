//! Exponential decay-rate fits of eigenvector tails.

use serde::{Deserialize, Serialize};

use super::fit::linear_fit;
use crate::discretize::Grid1D;
use crate::error::{Error, Result};
use crate::model_zoo::AxialPotential;

/// Minimum number of grid points in a fit window.
pub const MIN_WINDOW_POINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayWindowOptions {
    /// Window starts where `|V| < potential_fraction·gap` holds for good.
    pub potential_fraction: f64,
    /// Window ends where `|ψ|` drops below `floor_relative·max|ψ|`.
    pub floor_relative: f64,
    /// Keep `wall_margin/√gap` away from the truncation wall.
    pub wall_margin: f64,
    /// Accepted fits need at least this `r²`.
    pub min_r_squared: f64,
}

impl Default for DecayWindowOptions {
    fn default() -> Self {
        Self {
            potential_fraction: 0.05,
            floor_relative: 1e3 * f64::MIN_POSITIVE,
            wall_margin: 10.0,
            min_r_squared: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub gamma_hat: f64,
    /// Fitted `log C` in `|ψ(x)| ≈ C e^{γ̂x}`.
    pub log_c: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub r_squared: f64,
    /// `−√gap`.
    pub predicted_bound: f64,
    pub accepted: bool,
}

impl DecayFit {
    /// `γ̂ / (−√gap)`.
    pub fn ratio(&self) -> f64 {
        self.gamma_hat / self.predicted_bound
    }
}

/// Least-squares slope of `log|ψ|` over grid points in `[x0, x1]`.
pub fn fit_decay_on_window(
    grid: &Grid1D,
    vector: &[f64],
    gap: f64,
    x0: f64,
    x1: f64,
    min_r_squared: f64,
) -> Result<DecayFit> {
    if !(gap > 0.0) {
        return Err(Error::Contract(format!("decay fit needs a positive gap, got {gap}")));
    }
    let pts: Vec<(f64, f64)> = grid
        .points()
        .zip(vector)
        .filter(|(x, v)| *x >= x0 && *x <= x1 && v.abs() > 0.0)
        .map(|(x, v)| (x, v.abs().ln()))
        .collect();
    if pts.len() < MIN_WINDOW_POINTS {
        return Err(Error::InsufficientData(format!(
            "decay window [{x0}, {x1}] holds {} points, need {MIN_WINDOW_POINTS}",
            pts.len()
        )));
    }
    let f = linear_fit(&pts)?;
    Ok(DecayFit {
        gamma_hat: f.slope,
        log_c: f.intercept,
        window: (pts[0].0, pts[pts.len() - 1].0),
        points: pts.len(),
        r_squared: f.r_squared,
        predicted_bound: -gap.sqrt(),
        accepted: f.r_squared >= min_r_squared,
    })
}

/// Admissible window on the right tail: `[x0, x1]` with `x0` past the
/// potential's support (to `potential_fraction·gap`) and `x1` before the
/// vector reaches its floor or the wall region.
pub fn decay_window<P: AxialPotential + ?Sized>(
    grid: &Grid1D,
    vector: &[f64],
    potential: &P,
    gap: f64,
    opts: &DecayWindowOptions,
) -> (f64, f64) {
    let n = grid.n_points;
    let cut = opts.potential_fraction * gap;
    let mut start = n;
    for i in (0..n).rev() {
        let x = grid.x(i);
        if x < 0.0 || potential.value(x).abs() >= cut {
            break;
        }
        start = i;
    }
    let peak = vector.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = opts.floor_relative * peak;
    let wall = grid.x_max - opts.wall_margin / gap.sqrt();
    let mut end = start;
    for i in start..n {
        let x = grid.x(i);
        if x > wall || vector[i].abs() < floor {
            break;
        }
        end = i;
    }
    if start >= n {
        return (grid.x_max, grid.x_max);
    }
    (grid.x(start), grid.x(end))
}

/// Fits the decay rate of `vector` (an eigenvector with eigenvalue `mu`
/// below a threshold `mu + gap`) on the admissible right-tail window.
pub fn fit_decay_rate<P: AxialPotential + ?Sized>(
    grid: &Grid1D,
    vector: &[f64],
    potential: &P,
    gap: f64,
    opts: &DecayWindowOptions,
) -> Result<DecayFit> {
    if !(gap > 0.0) {
        return Err(Error::Contract(format!("decay fit needs a positive gap, got {gap}")));
    }
    let (x0, x1) = decay_window(grid, vector, potential, gap, opts);
    fit_decay_on_window(grid, vector, gap, x0, x1, opts.min_r_squared)
}
