//! Cross-sections of the cylindrical end and their threshold ladders.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossSectionKind {
    IntervalDirichlet,
    IntervalNeumann,
    Circle,
}

/// Compact cross-section `Ω`, possibly consisting of several disjoint copies.
///
/// `extent` is the half-length for intervals and the radius for circles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionSpec {
    pub kind: CrossSectionKind,
    pub extent: f64,
    pub copies: u32,
}

impl CrossSectionSpec {
    pub fn new(kind: CrossSectionKind, extent: f64, copies: u32) -> Result<Self> {
        let spec = Self {
            kind,
            extent,
            copies,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn interval_dirichlet() -> Self {
        Self {
            kind: CrossSectionKind::IntervalDirichlet,
            extent: 1.0,
            copies: 1,
        }
    }

    pub fn interval_neumann() -> Self {
        Self {
            kind: CrossSectionKind::IntervalNeumann,
            extent: 1.0,
            copies: 1,
        }
    }

    pub fn circle(radius: f64) -> Self {
        Self {
            kind: CrossSectionKind::Circle,
            extent: radius,
            copies: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(Error::Config(format!(
                "cross-section extent must be positive, got {}",
                self.extent
            )));
        }
        if self.copies == 0 {
            return Err(Error::Config("cross-section copies must be >= 1".into()));
        }
        Ok(())
    }

    /// The `j`-th distinct eigenvalue (0-based) of one copy and its multiplicity.
    fn level(&self, j: usize) -> (f64, u32) {
        let j = j as f64;
        match self.kind {
            CrossSectionKind::IntervalDirichlet => {
                let k = (j + 1.0) * PI / (2.0 * self.extent);
                (k * k, 1)
            }
            CrossSectionKind::IntervalNeumann => {
                let k = j * PI / (2.0 * self.extent);
                (k * k, 1)
            }
            CrossSectionKind::Circle => {
                let k = j / self.extent;
                (k * k, if j == 0.0 { 1 } else { 2 })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub value: f64,
    pub multiplicity: u32,
}

/// Sorted distinct eigenvalues `ν_1 < ν_2 < …` of the cross-section Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdLadder {
    entries: Vec<Threshold>,
}

impl ThresholdLadder {
    pub fn new(entries: Vec<Threshold>) -> Result<Self> {
        if let Some(first) = entries.first() {
            if !(first.value >= 0.0) {
                return Err(Error::Config(format!(
                    "thresholds must be nonnegative, got {}",
                    first.value
                )));
            }
        }
        for w in entries.windows(2) {
            if !(w[1].value > w[0].value) {
                return Err(Error::Config(format!(
                    "thresholds must be strictly increasing: {} then {}",
                    w[0].value, w[1].value
                )));
            }
        }
        if entries.iter().any(|t| t.multiplicity == 0) {
            return Err(Error::Config("threshold multiplicity must be >= 1".into()));
        }
        Ok(Self { entries })
    }

    /// Ladder from plain values, each with multiplicity one.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&value| Threshold {
                    value,
                    multiplicity: 1,
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[Threshold] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|t| t.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Eigenvalues listed with multiplicity (`σ_1 ≤ σ_2 ≤ …`).
    pub fn flattened(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.value, t.multiplicity as usize))
            .collect()
    }

    /// Smallest threshold strictly above `mu`.
    pub fn next_above(&self, mu: f64) -> Option<f64> {
        self.values().find(|&v| v > mu)
    }
}

/// First `count` distinct cross-section eigenvalues, in closed form.
pub fn build_threshold_ladder(spec: &CrossSectionSpec, count: usize) -> Result<ThresholdLadder> {
    spec.validate()?;
    if count == 0 {
        return Err(Error::Config("threshold count must be >= 1".into()));
    }
    let entries = (0..count)
        .map(|j| {
            let (value, mult) = spec.level(j);
            Threshold {
                value,
                multiplicity: mult * spec.copies,
            }
        })
        .collect();
    ThresholdLadder::new(entries)
}

/// Largest admissible exponential decay rate `min_{ν_j > μ} √(ν_j − μ)`.
pub fn max_decay_rate(mu: f64, ladder: &ThresholdLadder) -> Result<f64> {
    let scale = mu.abs().max(1.0);
    if let Some(t) = ladder
        .values()
        .find(|&v| (v - mu).abs() <= 1e-12 * scale)
    {
        return Err(Error::Threshold { mu, threshold: t });
    }
    ladder
        .next_above(mu)
        .map(|nu| (nu - mu).sqrt())
        .ok_or_else(|| {
            Error::Domain(format!(
                "no threshold above mu = {mu}; ladder has {} entries",
                ladder.len()
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Levels of the periodic second-difference operator on `m` points,
    /// evaluated as Rayleigh quotients of the discrete cosine modes (which are
    /// exact eigenvectors of the circulant). Duplicates are kept.
    fn periodic_fd_levels(radius: f64, m: usize) -> Vec<f64> {
        let h = 2.0 * PI * radius / m as f64;
        let mut vals: Vec<f64> = (0..m)
            .map(|j| {
                let mut num = 0.0;
                let mut den = 0.0;
                for i in 0..m {
                    let th = 2.0 * PI * (j * i) as f64 / m as f64;
                    let th_next = 2.0 * PI * (j * ((i + 1) % m)) as f64 / m as f64;
                    let (u, un) = (th.cos(), th_next.cos());
                    num += (un - u) * (un - u) / (h * h);
                    den += u * u;
                }
                num / den
            })
            .collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    #[test]
    fn dirichlet_interval_ladder() {
        let l = build_threshold_ladder(&CrossSectionSpec::interval_dirichlet(), 3).unwrap();
        let v: Vec<f64> = l.values().collect();
        assert_eq!(v, vec![PI * PI / 4.0, PI * PI, 9.0 * PI * PI / 4.0]);
        assert!(l.entries().iter().all(|t| t.multiplicity == 1));
    }

    #[test]
    fn neumann_interval_ladder() {
        let l = build_threshold_ladder(&CrossSectionSpec::interval_neumann(), 2).unwrap();
        let v: Vec<f64> = l.values().collect();
        assert_eq!(v, vec![0.0, PI * PI / 4.0]);
    }

    #[test]
    fn circle_ladder_matches_periodic_fd() {
        let l = build_threshold_ladder(&CrossSectionSpec::circle(1.0), 3).unwrap();
        let got: Vec<(f64, u32)> = l.entries().iter().map(|t| (t.value, t.multiplicity)).collect();
        assert_eq!(got, vec![(0.0, 1), (1.0, 2), (4.0, 2)]);
        // second-order FD levels converge to 1 and 4 with error ratio ≈ 4
        let coarse = periodic_fd_levels(1.0, 64);
        let fine = periodic_fd_levels(1.0, 128);
        let find = |vals: &[f64], target: f64| {
            vals.iter()
                .copied()
                .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
                .unwrap()
        };
        for target in [1.0, 4.0] {
            let ec = (find(&coarse, target) - target).abs();
            let ef = (find(&fine, target) - target).abs();
            assert!(ef < 1e-2 && ec / ef > 3.5 && ec / ef < 4.5, "{target}: {ec} {ef}");
        }
    }

    #[test]
    fn copies_scale_multiplicity_only() {
        let mut spec = CrossSectionSpec::circle(2.0);
        let one = build_threshold_ladder(&spec, 4).unwrap();
        spec.copies = 3;
        let three = build_threshold_ladder(&spec, 4).unwrap();
        for (a, b) in one.entries().iter().zip(three.entries()) {
            assert_eq!(a.value, b.value);
            assert_eq!(3 * a.multiplicity, b.multiplicity);
        }
        assert_eq!(three.flattened().len(), 3 * one.flattened().len());
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(CrossSectionSpec::new(CrossSectionKind::Circle, 0.0, 1).is_err());
        assert!(CrossSectionSpec::new(CrossSectionKind::Circle, 1.0, 0).is_err());
        assert!(build_threshold_ladder(&CrossSectionSpec::circle(1.0), 0).is_err());
    }

    #[test]
    fn decay_rate_examples() {
        let l = ThresholdLadder::from_values(&[PI * PI / 4.0, PI * PI]).unwrap();
        let r = max_decay_rate(2.0, &l).unwrap();
        assert!((r - (PI * PI / 4.0 - 2.0).sqrt()).abs() < 1e-15);
        assert!((r - 0.68366).abs() < 1e-5);

        let l = ThresholdLadder::from_values(&[1.0, 4.0]).unwrap();
        assert_eq!(max_decay_rate(0.0, &l).unwrap(), 1.0);
        let near = max_decay_rate(1.0 - 1e-10, &l).unwrap();
        assert!(near > 0.0 && near < 1e-4);
        assert!(matches!(max_decay_rate(1.0, &l), Err(Error::Threshold { .. })));
        assert!(matches!(max_decay_rate(5.0, &l), Err(Error::Domain(_))));
    }
}
