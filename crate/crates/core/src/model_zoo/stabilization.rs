//! Numeric check that a model metric approaches the product metric at infinity.

use serde::{Deserialize, Serialize};

use super::profile::{PlanarGuideModel, SeparableModel, WarpProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizationSample {
    pub x: f64,
    /// `‖g0 − 1‖ + ‖g1‖ + ‖g2 − h‖`, sup over the cross-section.
    pub deviation: f64,
    /// `Σ_k ‖∂_x g_k‖`, sup over the cross-section.
    pub derivative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub samples: Vec<StabilizationSample>,
    /// Deviations are nonincreasing over probes beyond the tail onset.
    pub monotone_beyond_onset: bool,
    /// The last probe deviates less than the first one beyond the onset.
    pub decaying: bool,
}

impl StabilizationReport {
    pub fn passed(&self) -> bool {
        self.monotone_beyond_onset && self.decaying
    }

    /// Least-squares slope of `log deviation` against `log x` over probes with nonzero deviation.
    pub fn log_log_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|s| s.deviation > 0.0 && s.x > 0.0)
            .map(|s| (s.x.ln(), s.deviation.ln()))
            .collect();
        crate::analysis::linear_fit(&pts).ok().map(|f| f.slope)
    }
}

/// Metric models that expose their coefficient deviation from the limiting product.
pub trait StabilizingMetric: WarpProfile {
    /// `(deviation, derivative deviation)` at axial point `x`.
    fn deviation(&self, x: f64) -> (f64, f64);
}

impl StabilizingMetric for SeparableModel {
    fn deviation(&self, x: f64) -> (f64, f64) {
        // dx² + f^{4/n} 𝔥 with 𝔥 normalised to unit norm: only g2 deviates
        let q = 1.0 / (self.n as f64 / 4.0);
        let p = self.profile(x);
        let fq = self.conformal_factor(x);
        let dfq = q * fq / p.f * p.df;
        ((fq - 1.0).abs(), dfq.abs())
    }
}

impl StabilizingMetric for PlanarGuideModel {
    fn deviation(&self, x: f64) -> (f64, f64) {
        // end coordinates: s = x + c; sup over |y| ≤ 1 is attained at |y| = 1
        let p = self.profile(x + self.c);
        let (f, df, d2f) = (p.f, p.df, p.d2f);
        let dev = df * df + (f * df).abs() + (f * f - 1.0).abs();
        let ddev = (2.0 * df * d2f).abs() + (df * df + f * d2f).abs() + (2.0 * f * df).abs();
        (dev, ddev)
    }
}

pub fn validate_stabilization<M: StabilizingMetric + ?Sized>(
    model: &M,
    x_probe: &[f64],
) -> StabilizationReport {
    let samples: Vec<StabilizationSample> = x_probe
        .iter()
        .map(|&x| {
            let (deviation, derivative_deviation) = model.deviation(x);
            StabilizationSample {
                x,
                deviation,
                derivative_deviation,
            }
        })
        .collect();
    let c = model.tail_onset();
    let tail: Vec<&StabilizationSample> = samples.iter().filter(|s| s.x >= c).collect();
    let monotone_beyond_onset = tail.windows(2).all(|w| {
        w[1].deviation <= w[0].deviation && w[1].derivative_deviation <= w[0].derivative_deviation
    });
    let decaying = match (tail.first(), tail.last()) {
        (Some(a), Some(b)) if tail.len() >= 2 => {
            (b.deviation < a.deviation || b.deviation == 0.0)
                && (b.derivative_deviation < a.derivative_deviation
                    || b.derivative_deviation == 0.0)
        }
        _ => true,
    };
    StabilizationReport {
        samples,
        monotone_beyond_onset,
        decaying,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_zoo::CrossSectionSpec;

    fn probes() -> Vec<f64> {
        (0..12).map(|k| 2.0 * 1.6f64.powi(k)).collect()
    }

    #[test]
    fn product_metric_has_zero_deviation() {
        let m = SeparableModel::product(1, CrossSectionSpec::interval_dirichlet()).unwrap();
        let r = validate_stabilization(&m, &probes());
        assert!(r.samples.iter().all(|s| s.deviation == 0.0 && s.derivative_deviation == 0.0));
        assert!(r.passed());
        let g = PlanarGuideModel::straight().unwrap();
        let r = validate_stabilization(&g, &probes());
        assert!(r.samples.iter().all(|s| s.deviation == 0.0));
    }

    #[test]
    fn guide_tail_is_monotone() {
        let g = PlanarGuideModel::new(1.0, 5.0, 2.0).unwrap();
        let r = validate_stabilization(&g, &[10.0 - g.c, 100.0 - g.c]);
        assert!(r.samples[1].deviation <= r.samples[0].deviation);
        assert!(r.passed());
        assert!(validate_stabilization(&g, &probes()).passed());
    }

    #[test]
    fn separable_delta_two_decays_like_inverse_square() {
        let m = SeparableModel::new(1, 2.0, 1.0, 1.0, CrossSectionSpec::interval_dirichlet())
            .unwrap();
        let xs: Vec<f64> = (0..8).map(|k| 100.0 * 2f64.powi(k)).collect();
        let r = validate_stabilization(&m, &xs);
        assert!(r.passed());
        let slope = r.log_log_slope().unwrap();
        assert!((slope + 2.0).abs() < 1e-3, "{slope}");
    }
}
