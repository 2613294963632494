//! Warp profiles of the two model manifolds and the quantities derived from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cross_section::CrossSectionSpec;
use crate::error::{Error, Result};

/// `f`, `f′`, `f″` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValue {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

/// Even quartic `a0 + a2 x² + a4 x⁴` joining the tail at `|x| = c` in a C² way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bridge {
    pub a0: f64,
    pub a2: f64,
    pub a4: f64,
}

impl Bridge {
    /// Matches value, slope and curvature of the tail at `x = c > 0`.
    pub fn matched(c: f64, tail: ProfileValue) -> Self {
        let a4 = (tail.d2f - tail.df / c) / (8.0 * c * c);
        let a2 = (tail.df - 4.0 * a4 * c * c * c) / (2.0 * c);
        let a0 = tail.f - a2 * c * c - a4 * c * c * c * c;
        Self { a0, a2, a4 }
    }

    pub fn eval(&self, x: f64) -> ProfileValue {
        let x2 = x * x;
        ProfileValue {
            f: self.a0 + x2 * (self.a2 + x2 * self.a4),
            df: x * (2.0 * self.a2 + 4.0 * self.a4 * x2),
            d2f: 2.0 * self.a2 + 12.0 * self.a4 * x2,
        }
    }

    /// Minimum of the bridge on `[0, c]`.
    pub fn min_on(&self, c: f64) -> f64 {
        // quadratic in t = x² on [0, c²]
        let q = |t: f64| self.a0 + self.a2 * t + self.a4 * t * t;
        let mut m = q(0.0).min(q(c * c));
        if self.a4 > 0.0 {
            let t = -self.a2 / (2.0 * self.a4);
            if t > 0.0 && t < c * c {
                m = m.min(q(t));
            }
        }
        m
    }
}

/// Models whose geometry is described by an even warp profile `f`.
pub trait WarpProfile {
    /// `f, f′, f″` at a real axial point.
    fn profile(&self, x: f64) -> ProfileValue;
    /// Onset `c` of the closed-form tail.
    fn tail_onset(&self) -> f64;
}

pub fn eval_profile<M: WarpProfile + ?Sized>(model: &M, x: f64) -> ProfileValue {
    model.profile(x)
}

fn check_tail_params(delta: f64, c: f64, amplitude: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::Config(format!("delta must lie in (0, 2], got {delta}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Config(format!("tail onset c must be positive, got {c}")));
    }
    // amplitude 0 is the unwarped product metric
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::Config(format!(
            "amplitude must be nonnegative, got {amplitude}"
        )));
    }
    Ok(())
}

/// Warped cylinder `ℝ × Ω′` with metric `dx² + f(x)^{4/n} 𝔥`, where
/// `f^{4/n} = 1 + amplitude·|x|^{−δ}` for `|x| ≥ c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableModel {
    pub n: u32,
    pub delta: f64,
    pub c: f64,
    pub amplitude: f64,
    pub cross_section: CrossSectionSpec,
    bridge: Bridge,
}

impl SeparableModel {
    pub fn new(
        n: u32,
        delta: f64,
        c: f64,
        amplitude: f64,
        cross_section: CrossSectionSpec,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("cross-section dimension n must be >= 1".into()));
        }
        check_tail_params(delta, c, amplitude)?;
        cross_section.validate()?;
        let mut model = Self {
            n,
            delta,
            c,
            amplitude,
            cross_section,
            bridge: Bridge {
                a0: 1.0,
                a2: 0.0,
                a4: 0.0,
            },
        };
        model.bridge = Bridge::matched(c, model.tail(c));
        if model.bridge.a0 < model.tail(c).f {
            return Err(Error::Config(format!(
                "bridge gives f(0) = {} below f(c) = {}",
                model.bridge.a0,
                model.tail(c).f
            )));
        }
        if model.bridge.min_on(c) <= 0.0 {
            return Err(Error::Config("bridge polynomial is not positive".into()));
        }
        Ok(model)
    }

    /// Unwarped cylinder (`f ≡ 1`).
    pub fn product(n: u32, cross_section: CrossSectionSpec) -> Result<Self> {
        Self::new(n, 1.0, 1.0, 0.0, cross_section)
    }

    pub fn bridge(&self) -> Bridge {
        self.bridge
    }

    pub fn is_product(&self) -> bool {
        self.amplitude == 0.0
    }

    fn exponent(&self) -> f64 {
        self.n as f64 / 4.0
    }

    /// Closed-form tail at `x > 0`.
    fn tail(&self, x: f64) -> ProfileValue {
        let (a, d, p) = (self.amplitude, self.delta, self.exponent());
        let xd = x.powf(-d);
        let g = 1.0 + a * xd;
        let g1 = -a * d * xd / x;
        let g2 = a * d * (d + 1.0) * xd / (x * x);
        let f = g.powf(p);
        ProfileValue {
            f,
            df: p * f / g * g1,
            d2f: f * (p * (p - 1.0) * (g1 / g) * (g1 / g) + p * g2 / g),
        }
    }

    /// `f^{4/n}(x)` for real `x`.
    pub fn conformal_factor(&self, x: f64) -> f64 {
        if x.abs() >= self.c {
            1.0 + self.amplitude * x.abs().powf(-self.delta)
        } else {
            self.profile(x).f.powf(1.0 / self.exponent())
        }
    }

    /// Mode potential `V = f″/f + (f^{−4/n} − 1)σ` at a real point.
    pub fn potential_real(&self, sigma: f64, x: f64) -> f64 {
        let ax = x.abs();
        if ax >= self.c {
            let (a, d, p) = (self.amplitude, self.delta, self.exponent());
            let xd = ax.powf(-d);
            let g = 1.0 + a * xd;
            let r1 = -a * d * xd / ax / g;
            let r2 = a * d * (d + 1.0) * xd / (ax * ax) / g;
            p * (p - 1.0) * r1 * r1 + p * r2 - a * xd / g * sigma
        } else {
            let v = self.bridge.eval(x);
            v.d2f / v.f + (v.f.powf(-1.0 / self.exponent()) - 1.0) * sigma
        }
    }

    /// Mode potential at a complex point of the deformed contour.
    ///
    /// Off the real axis only the analytic tail `|Re z| ≥ c` may be sampled.
    pub fn potential(&self, sigma: f64, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Ok(Complex64::new(self.potential_real(sigma, z.re), 0.0));
        }
        if z.re.abs() < self.c {
            return Err(Error::Contract(format!(
                "complex argument {z} lies over the bridge region |Re z| < {}",
                self.c
            )));
        }
        // even continuation: use the branch through +∞ on each end
        let w = if z.re > 0.0 { z } else { -z };
        let (a, d, p) = (self.amplitude, self.delta, self.exponent());
        let wd = w.powf(-d);
        let g = 1.0 + a * wd;
        let r1 = -a * d * wd / w / g;
        let r2 = a * d * (d + 1.0) * wd / (w * w) / g;
        Ok(p * (p - 1.0) * r1 * r1 + p * r2 - a * wd / g * sigma)
    }
}

impl WarpProfile for SeparableModel {
    fn profile(&self, x: f64) -> ProfileValue {
        if x.abs() >= self.c {
            let t = self.tail(x.abs());
            ProfileValue {
                df: t.df * x.signum(),
                ..t
            }
        } else {
            self.bridge.eval(x)
        }
    }

    fn tail_onset(&self) -> f64 {
        self.c
    }
}

/// Planar domain `{(s, t) : |t| ≤ f(s)}` with `f(s) = 1 + amplitude·|s|^{−δ}` for `|s| ≥ c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarGuideModel {
    pub delta: f64,
    pub amplitude: f64,
    pub c: f64,
    bridge: Bridge,
}

impl PlanarGuideModel {
    pub fn new(delta: f64, amplitude: f64, c: f64) -> Result<Self> {
        check_tail_params(delta, c, amplitude)?;
        let mut model = Self {
            delta,
            amplitude,
            c,
            bridge: Bridge {
                a0: 1.0,
                a2: 0.0,
                a4: 0.0,
            },
        };
        model.bridge = Bridge::matched(c, model.tail(c));
        if model.bridge.a0 < model.tail(c).f {
            return Err(Error::Config(format!(
                "bridge gives f(0) = {} below f(c) = {}",
                model.bridge.a0,
                model.tail(c).f
            )));
        }
        if model.bridge.min_on(c) < 1.0 {
            return Err(Error::Config("guide profile dips below 1 on the bridge".into()));
        }
        Ok(model)
    }

    /// Straight strip of half-width one.
    pub fn straight() -> Result<Self> {
        Self::new(1.0, 0.0, 1.0)
    }

    pub fn bridge(&self) -> Bridge {
        self.bridge
    }

    fn tail(&self, s: f64) -> ProfileValue {
        let (a, d) = (self.amplitude, self.delta);
        let sd = s.powf(-d);
        ProfileValue {
            f: 1.0 + a * sd,
            df: -a * d * sd / s,
            d2f: a * d * (d + 1.0) * sd / (s * s),
        }
    }

    /// Pulled-back metric at end coordinates `(x, y)`, i.e. at `s = x + c`.
    pub fn metric(&self, x: f64, y: f64) -> GuideMetric {
        self.metric_at_s(x + self.c, y)
    }

    /// Pulled-back metric of `(s, t) = (s, f(s) y)` at axial position `s`.
    pub fn metric_at_s(&self, s: f64, y: f64) -> GuideMetric {
        let p = self.profile(s);
        GuideMetric::from_profile(p.f, p.df, y)
    }
}

impl WarpProfile for PlanarGuideModel {
    fn profile(&self, x: f64) -> ProfileValue {
        if x.abs() >= self.c {
            let t = self.tail(x.abs());
            ProfileValue {
                df: t.df * x.signum(),
                ..t
            }
        } else {
            self.bridge.eval(x)
        }
    }

    fn tail_onset(&self) -> f64 {
        self.c
    }
}

/// Metric `g0 dx² + 2 g1 dx dy + g2 dy²` of the straightened guide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuideMetric {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub sqrt_det: f64,
    /// Inverse metric `[[g^xx, g^xy], [g^yx, g^yy]]`.
    pub inv: [[f64; 2]; 2],
}

impl GuideMetric {
    fn from_profile(f: f64, df: f64, y: f64) -> Self {
        let fy = df * y;
        let g0 = 1.0 + fy * fy;
        let g1 = f * fy;
        let g2 = f * f;
        let off = -fy / f;
        Self {
            g0,
            g1,
            g2,
            sqrt_det: f,
            inv: [[1.0, off], [off, g0 / g2]],
        }
    }
}

pub fn guide_metric(model: &PlanarGuideModel, x: f64, y: f64) -> Result<GuideMetric> {
    if !(-1.0..=1.0).contains(&y) {
        return Err(Error::Contract(format!("y = {y} outside [-1, 1]")));
    }
    Ok(model.metric(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_zoo::cross_section::CrossSectionSpec;
    use proptest::prelude::*;

    fn cylinder(n: u32, delta: f64) -> SeparableModel {
        SeparableModel::new(n, delta, 1.0, 1.0, CrossSectionSpec::interval_dirichlet()).unwrap()
    }

    fn guide() -> PlanarGuideModel {
        PlanarGuideModel::new(1.0, 5.0, 2.0).unwrap()
    }

    /// Central differences of `f` as an independent derivative oracle.
    fn fd_derivs(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
        let h = 1e-4;
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn separable_profile_at_ten() {
        let m = cylinder(1, 1.0);
        let p = eval_profile(&m, 10.0);
        assert!((p.f - 1.1f64.powf(0.25)).abs() < 1e-15);
        assert!((p.f - 1.024114).abs() < 1e-6);
        let (d1, d2) = fd_derivs(|x| (1.0 + 1.0 / x).powf(0.25), 10.0);
        assert!((p.df - d1).abs() < 1e-8);
        assert!((p.d2f - d2).abs() < 1e-6);
    }

    #[test]
    fn profile_flattens_at_infinity() {
        let m = cylinder(2, 1.5);
        let p = m.profile(1e8);
        assert!((p.f - 1.0).abs() < 1e-11 && p.df.abs() < 1e-18 && p.d2f.abs() < 1e-25);
        let g = guide().profile(-1e9);
        assert!((g.f - 1.0).abs() < 1e-8 && g.df.abs() < 1e-16);
    }

    #[test]
    fn guide_profile_at_ten() {
        assert_eq!(guide().profile(10.0).f, 1.5);
    }

    #[test]
    fn potential_values() {
        let m = cylinder(1, 1.0);
        let sigma = std::f64::consts::PI.powi(2) / 4.0;
        // V = f''/f + (f^{-4} - 1) σ, differentiated numerically from f itself
        let f = |x: f64| (1.0 + 1.0 / x).powf(0.25);
        let (_, d2) = fd_derivs(f, 10.0);
        let oracle_curv = d2 / f(10.0);
        assert!((m.potential_real(0.0, 10.0) - 4.39e-4).abs() < 5e-6);
        assert!((m.potential_real(0.0, 10.0) - oracle_curv).abs() < 1e-6);
        let v = m.potential_real(sigma, 10.0);
        assert!((v - (oracle_curv - (0.1 / 1.1) * sigma)).abs() < 1e-6);
        assert!((v + 0.2239).abs() < 1e-4);
        assert!(m.potential_real(sigma, 1e9).abs() < 1e-8);
        // even
        assert_eq!(m.potential_real(sigma, -10.0), v);
    }

    #[test]
    fn complex_potential_agrees_on_real_axis_and_rejects_bridge() {
        let m = cylinder(1, 1.0);
        let z = Complex64::new(7.0, 1e-30);
        let v = m.potential(2.0, z).unwrap();
        assert!((v.re - m.potential_real(2.0, 7.0)).abs() < 1e-14);
        let zn = Complex64::new(-7.0, -1e-30);
        assert!((m.potential(2.0, zn).unwrap() - v).norm() < 1e-14);
        assert!(matches!(
            m.potential(2.0, Complex64::new(0.5, 0.1)),
            Err(Error::Contract(_))
        ));
        // Schwarz reflection
        let z = Complex64::new(12.0, 2.0);
        let a = m.potential(3.0, z).unwrap();
        let b = m.potential(3.0, z.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-15);
    }

    #[test]
    fn bridge_matches_tail_at_onset() {
        for m in [cylinder(1, 1.0), cylinder(3, 2.0), cylinder(2, 0.5)] {
            let c = m.c;
            let inner = m.bridge().eval(c);
            let outer = m.profile(c);
            assert!((inner.f - outer.f).abs() <= 1e-12);
            assert!((inner.df - outer.df).abs() <= 1e-12);
            assert!((inner.d2f - outer.d2f).abs() <= 1e-12);
            assert!(m.bridge().a0 >= outer.f);
        }
        let g = guide();
        let inner = g.bridge().eval(2.0);
        let outer = g.profile(2.0);
        assert!((inner.d2f - outer.d2f).abs() <= 1e-12);
    }

    #[test]
    fn guide_metric_examples() {
        let g = guide();
        let m = guide_metric(&g, 10.0 - g.c, 1.0).unwrap();
        assert!((m.g0 - 1.0025).abs() < 1e-14);
        assert!((m.g1 + 0.075).abs() < 1e-14);
        assert!((m.g2 - 2.25).abs() < 1e-14);
        assert_eq!(m.sqrt_det, 1.5);
        assert_eq!(guide_metric(&g, 3.0, 0.0).unwrap().g1, 0.0);
        let flat = PlanarGuideModel::straight().unwrap();
        let m = guide_metric(&flat, 4.0, 0.7).unwrap();
        assert_eq!((m.g0, m.g1, m.g2, m.sqrt_det), (1.0, 0.0, 1.0, 1.0));
        assert!(guide_metric(&g, 1.0, 1.5).is_err());
    }

    proptest! {
        #[test]
        fn tail_is_exact(x in 1.0f64..1e4, delta in 0.1f64..2.0, n in 1u32..4) {
            let m = SeparableModel::new(n, delta, 1.0, 1.0, CrossSectionSpec::interval_dirichlet()).unwrap();
            let f = m.profile(x).f;
            let lhs = f.powf(4.0 / n as f64);
            let rhs = 1.0 + x.powf(-delta);
            prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs);
        }

        #[test]
        fn guide_metric_inverse(x in -5.0f64..50.0, y in -1.0f64..1.0) {
            let m = guide().metric(x, y);
            let g = [[m.g0, m.g1], [m.g1, m.g2]];
            for i in 0..2 {
                for j in 0..2 {
                    let e: f64 = (0..2).map(|k| g[i][k] * m.inv[k][j]).sum();
                    let target = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((e - target).abs() < 1e-12 * m.g2.max(1.0));
                }
            }
            prop_assert!((m.g0 * m.g2 - m.g1 * m.g1 - m.sqrt_det.powi(2)).abs() < 1e-12 * m.g2);
        }

        #[test]
        fn profiles_positive(x in -100.0f64..100.0) {
            prop_assert!(cylinder(1, 1.0).profile(x).f > 0.0);
            prop_assert!(guide().profile(x).f >= 1.0);
        }
    }
}
