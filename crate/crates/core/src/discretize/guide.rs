//! Symmetric finite-difference operator for the Laplacian of the straightened planar guide.
//!
//! The guide `{|t| ≤ f(s)}` is mapped to the strip `(s, y) ∈ ℝ × [−1, 1]` by
//! `t = f(s) y`. With weight `√det g = f` the Laplacian is
//! `−(1/f) ∇·(f g⁻¹ ∇)`. We discretize the quadratic form
//! `∫ f ∇uᵀ g⁻¹ ∇u` on a vertex grid (edge differences for the diagonal
//! coefficients, cell-averaged differences for the mixed term) together with
//! the lumped mass `∫ f u²`, and return `M^{-1/2} K M^{-1/2}`. Neumann walls
//! come out as the natural (conormal) condition of the form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_zoo::{PlanarGuideModel, WarpProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallCondition {
    Dirichlet,
    Neumann,
}

/// Parity in the transverse variable. `Even`/`Odd` live on `y ∈ [0, 1]` with a
/// Neumann/Dirichlet condition on the axis `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sector {
    Full,
    Even,
    Odd,
}

/// Truncation `s ∈ (−L, L)` with `nx` interior columns and `ny` transverse unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuideGrid {
    pub half_length: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GuideGrid {
    pub fn new(half_length: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) || nx < 1 || ny < 1 {
            return Err(Error::Config(format!(
                "invalid guide grid L={half_length} nx={nx} ny={ny}"
            )));
        }
        Ok(Self {
            half_length,
            nx,
            ny,
        })
    }

    /// Grid with axial spacing `hx` (so `nx = 2L/hx − 1`).
    pub fn with_spacing(half_length: f64, hx: f64, ny: usize) -> Result<Self> {
        let cells = (2.0 * half_length / hx).round();
        if !(cells >= 2.0) {
            return Err(Error::Config(format!("axial spacing {hx} too coarse")));
        }
        Self::new(half_length, cells as usize - 1, ny)
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.half_length / (self.nx + 1) as f64
    }

    pub fn s(&self, i: isize) -> f64 {
        -self.half_length + (i + 1) as f64 * self.hx()
    }
}

/// Transverse node layout `y_k = y_lo + k·hy`, `k = 0..=last`, with unknowns on `first..=first+ny−1`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct TransverseLayout {
    y_lo: f64,
    hy: f64,
    last: usize,
    first: usize,
    ny: usize,
}

impl TransverseLayout {
    fn new(ny: usize, wall: WallCondition, sector: Sector) -> Self {
        let (y_lo, axis_dirichlet) = match sector {
            Sector::Full => (-1.0, wall == WallCondition::Dirichlet),
            Sector::Even => (0.0, false),
            Sector::Odd => (0.0, true),
        };
        let wall_dirichlet = wall == WallCondition::Dirichlet;
        let last = ny - 1 + axis_dirichlet as usize + wall_dirichlet as usize;
        Self {
            y_lo,
            hy: (1.0 - y_lo) / last.max(1) as f64,
            last,
            first: axis_dirichlet as usize,
            ny,
        }
    }

    fn y(&self, k: usize) -> f64 {
        self.y_lo + k as f64 * self.hy
    }

    fn unknown(&self, k: usize) -> Option<usize> {
        (k >= self.first && k < self.first + self.ny).then(|| k - self.first)
    }

    /// Trapezoid weight of a node row.
    fn weight(&self, k: usize) -> f64 {
        if k == 0 || k == self.last {
            0.5
        } else {
            1.0
        }
    }
}

/// Symmetric band matrix of dimension `nx·ny`, unknowns ordered column by column
/// (`index = i·ny + j`). Stored as the upper band: `band[p*(bw+1) + d] = A[p][p+d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandedOperator2D {
    pub grid: GuideGrid,
    pub hy: f64,
    pub sector: Sector,
    pub wall: WallCondition,
    pub bandwidth: usize,
    band: Vec<f64>,
    /// Largest `|A_pq − A_qp|` seen while assembling (zero for a correct stencil).
    pub assembly_asymmetry: f64,
    pub provenance: String,
}

impl BandedOperator2D {
    /// Build directly from an upper band (used by tests and oracles).
    pub fn from_upper_band(
        grid: GuideGrid,
        hy: f64,
        bandwidth: usize,
        band: Vec<f64>,
    ) -> Self {
        assert_eq!(band.len(), grid.nx * grid.ny * (bandwidth + 1));
        Self {
            grid,
            hy,
            sector: Sector::Full,
            wall: WallCondition::Dirichlet,
            bandwidth,
            band,
            assembly_asymmetry: 0.0,
            provenance: "explicit band".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.grid.nx * self.grid.ny
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        let d = b - a;
        if d > self.bandwidth {
            0.0
        } else {
            self.band[a * (self.bandwidth + 1) + d]
        }
    }

    pub fn upper_band(&self) -> &[f64] {
        &self.band
    }

    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        let n = self.dim();
        let w = self.bandwidth + 1;
        out.iter_mut().for_each(|o| *o = 0.0);
        for p in 0..n {
            let row = &self.band[p * w..(p + 1) * w];
            out[p] += row[0] * v[p];
            for d in 1..w {
                let q = p + d;
                if q >= n {
                    break;
                }
                out[p] += row[d] * v[q];
                out[q] += row[d] * v[p];
            }
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut a = vec![0.0; n * n];
        for p in 0..n {
            for q in p.saturating_sub(self.bandwidth)..(p + self.bandwidth + 1).min(n) {
                a[p * n + q] = self.get(p, q);
            }
        }
        a
    }

    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|p| {
                (p.saturating_sub(self.bandwidth)..(p + self.bandwidth + 1).min(n))
                    .map(|q| self.get(p, q).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Transverse coordinate of unknown row `j`.
    pub fn y_of(&self, j: usize) -> f64 {
        let lay = TransverseLayout::new(self.grid.ny, self.wall, self.sector);
        lay.y(j + lay.first)
    }
}

pub fn assemble_guide_operator(
    model: &PlanarGuideModel,
    grid: &GuideGrid,
    wall: WallCondition,
    sector: Sector,
) -> Result<BandedOperator2D> {
    let (nx, ny) = (grid.nx, grid.ny);
    let lay = TransverseLayout::new(ny, wall, sector);
    if lay.last == 0 {
        return Err(Error::Config(format!(
            "a Neumann-Neumann transverse layout needs at least 2 unknowns, got {ny}"
        )));
    }
    let (hx, hy) = (grid.hx(), lay.hy);
    let n = nx * ny;
    let bw = ny + 1;
    let width = 2 * bw + 1;
    // full band during assembly: full[p*width + (q + bw - p)]
    let mut full = vec![0.0; n * width];
    let unknown = |i: isize, k: usize| -> Option<usize> {
        if i < 0 || i as usize >= nx {
            return None;
        }
        lay.unknown(k).map(|j| i as usize * ny + j)
    };
    let mut add = |p: usize, q: usize, v: f64| {
        full[p * width + (q + bw - p)] += v;
    };

    // axial edges (i, k)–(i+1, k), coefficient f
    for i in -1..nx as isize {
        let s_mid = grid.s(i) + 0.5 * hx;
        let f = model.profile(s_mid).f;
        for k in 0..=lay.last {
            let coef = f * lay.weight(k) * hy / hx;
            let nodes = [(unknown(i, k), -1.0), (unknown(i + 1, k), 1.0)];
            for &(p, a) in &nodes {
                for &(q, b) in &nodes {
                    if let (Some(p), Some(q)) = (p, q) {
                        add(p, q, coef * a * b);
                    }
                }
            }
        }
    }
    // transverse edges (i, k)–(i, k+1), coefficient f g^yy = (1 + f′² y²)/f
    for i in 0..nx as isize {
        let pv = model.profile(grid.s(i));
        for k in 0..lay.last {
            let y = lay.y(k) + 0.5 * hy;
            let fy = pv.df * y;
            let coef = (1.0 + fy * fy) / pv.f * hx / hy;
            let nodes = [(unknown(i, k), -1.0), (unknown(i, k + 1), 1.0)];
            for &(p, a) in &nodes {
                for &(q, b) in &nodes {
                    if let (Some(p), Some(q)) = (p, q) {
                        add(p, q, coef * a * b);
                    }
                }
            }
        }
    }
    // mixed term 2 f g^xy u_s u_y with f g^xy = −f′ y, cell-centred differences
    for i in -1..nx as isize {
        let s_mid = grid.s(i) + 0.5 * hx;
        let df = model.profile(s_mid).df;
        if df == 0.0 {
            continue;
        }
        for k in 0..lay.last {
            let y = lay.y(k) + 0.5 * hy;
            let w = -df * y * hx * hy;
            let ds = [
                (unknown(i + 1, k), 0.5 / hx),
                (unknown(i + 1, k + 1), 0.5 / hx),
                (unknown(i, k), -0.5 / hx),
                (unknown(i, k + 1), -0.5 / hx),
            ];
            let dy = [
                (unknown(i, k + 1), 0.5 / hy),
                (unknown(i + 1, k + 1), 0.5 / hy),
                (unknown(i, k), -0.5 / hy),
                (unknown(i + 1, k), -0.5 / hy),
            ];
            for &(p, a) in &ds {
                for &(q, b) in &dy {
                    if let (Some(p), Some(q)) = (p, q) {
                        let v = w * a * b;
                        add(p, q, v);
                        add(q, p, v);
                    }
                }
            }
        }
    }

    let inv_sqrt_mass: Vec<f64> = (0..n)
        .map(|p| {
            let (i, j) = (p / ny, p % ny);
            let f = model.profile(grid.s(i as isize)).f;
            1.0 / (f * hx * hy * lay.weight(j + lay.first)).sqrt()
        })
        .collect();

    let mut asym: f64 = 0.0;
    let mut band = vec![0.0; n * (bw + 1)];
    for p in 0..n {
        for d in 0..=bw {
            let q = p + d;
            if q >= n {
                break;
            }
            let upper = full[p * width + (q + bw - p)];
            let lower = full[q * width + (p + bw - q)];
            asym = asym.max((upper - lower).abs());
            band[p * (bw + 1) + d] = upper * (inv_sqrt_mass[p] * inv_sqrt_mass[q]);
        }
    }

    Ok(BandedOperator2D {
        grid: *grid,
        hy,
        sector,
        wall,
        bandwidth: bw,
        band,
        assembly_asymmetry: asym,
        provenance: format!(
            "guide Laplacian delta={} amplitude={} c={} wall={:?} sector={:?} L={} nx={} ny={}",
            model.delta, model.amplitude, model.c, wall, sector, grid.half_length, nx, ny
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assembly_is_exactly_symmetric() {
        let m = PlanarGuideModel::new(1.0, 5.0, 2.0).unwrap();
        for sector in [Sector::Full, Sector::Even, Sector::Odd] {
            for wall in [WallCondition::Dirichlet, WallCondition::Neumann] {
                let g = GuideGrid::new(6.0, 11, 5).unwrap();
                let op = assemble_guide_operator(&m, &g, wall, sector).unwrap();
                assert_eq!(op.assembly_asymmetry, 0.0, "{sector:?} {wall:?}");
                let a = op.to_dense();
                let n = op.dim();
                for p in 0..n {
                    for q in 0..n {
                        assert_eq!(a[p * n + q], a[q * n + p]);
                    }
                }
            }
        }
    }

    #[test]
    fn straight_strip_rows_are_five_point_laplacian() {
        let m = PlanarGuideModel::straight().unwrap();
        let g = GuideGrid::new(3.0, 5, 3).unwrap();
        let op = assemble_guide_operator(&m, &g, WallCondition::Dirichlet, Sector::Full).unwrap();
        let (hx, hy) = (g.hx(), op.hy);
        assert!((hy - 0.5).abs() < 1e-15);
        let p = 2 * 3 + 1;
        assert!((op.get(p, p) - (2.0 / (hx * hx) + 2.0 / (hy * hy))).abs() < 1e-12);
        assert!((op.get(p, p + 1) + 1.0 / (hy * hy)).abs() < 1e-12);
        assert!((op.get(p, p + 3) + 1.0 / (hx * hx)).abs() < 1e-12);
        assert_eq!(op.get(p, p + 4), 0.0);
    }

    #[test]
    fn transverse_layouts() {
        let l = TransverseLayout::new(4, WallCondition::Dirichlet, Sector::Even);
        assert_eq!((l.first, l.last), (0, 4));
        assert!((l.hy - 0.25).abs() < 1e-15);
        let l = TransverseLayout::new(4, WallCondition::Dirichlet, Sector::Odd);
        assert_eq!((l.first, l.last), (1, 5));
        let l = TransverseLayout::new(5, WallCondition::Dirichlet, Sector::Full);
        assert!((l.hy - 1.0 / 3.0).abs() < 1e-15);
        assert!((l.y(3) - 0.0).abs() < 1e-15);
        let l = TransverseLayout::new(3, WallCondition::Neumann, Sector::Full);
        assert_eq!((l.first, l.last), (0, 2));
    }
}
