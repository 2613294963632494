//! Balancing, Householder Hessenberg reduction and single-shift complex QR.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{CMatrix, DENSE_DIMENSION_CAP};
use crate::error::{Error, Result};

/// Iterations allowed per eigenvalue before giving up.
pub const ITERATION_CAP: usize = 40;
/// An exceptional shift replaces the Wilkinson shift every this many stalls.
pub const EXCEPTIONAL_PERIOD: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Per-eigenvalue convergence flag (in deflation order).
    pub converged: Vec<bool>,
    /// QR iterations spent before each deflation.
    pub iterations: Vec<usize>,
    /// `|Σλ − tr A|`.
    pub trace_residual: f64,
    /// Bound the trace residual is checked against: `1e−8·n·‖A‖`.
    pub trace_tolerance: f64,
    /// `|Σ log λ − log det A|` with the phase reduced mod 2π; `None` if singular.
    pub log_det_residual: Option<f64>,
}

impl ComplexSpectrum {
    pub fn trace_ok(&self) -> bool {
        self.trace_residual <= self.trace_tolerance
    }
}

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Radix-2 diagonal similarity equalizing row and column norms; exact in
/// floating point, so the spectrum is unchanged.
pub fn balance(a: &mut CMatrix) {
    let n = a.dim();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(a.get(j, i));
                    r += cabs1(a.get(i, j));
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let (mut cc, mut rr, mut f) = (c, r, 1.0f64);
            while cc < rr / 2.0 {
                cc *= 2.0;
                rr /= 2.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 2.0;
                rr *= 2.0;
                f /= 2.0;
            }
            if cc + rr < 0.95 * (c + r) {
                done = false;
                for j in 0..n {
                    let v = a.get(j, i) * f;
                    a.set(j, i, v);
                    let v = a.get(i, j) / f;
                    a.set(i, j, v);
                }
            }
        }
        if done {
            break;
        }
    }
}

/// In-place unitary reduction to upper Hessenberg form. Columns that are
/// already reduced are skipped, so banded input stays cheap.
pub fn hessenberg(a: &mut CMatrix) {
    let n = a.dim();
    let m = a.data_mut();
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        if ((k + 2)..n).all(|i| m[idx(i, k)] == Complex64::new(0.0, 0.0)) {
            continue;
        }
        let xnorm = ((k + 1)..n).map(|i| m[idx(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let x0 = m[idx(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| m[idx(i, k)]).collect();
        v[0] += phase * xnorm;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let tau = 2.0 / vv;
        // left: rows k+1.., columns k..
        for j in k..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * m[idx(k + 1 + t, j)])
                .sum::<Complex64>()
                * tau;
            for (t, vt) in v.iter().enumerate() {
                m[idx(k + 1 + t, j)] -= vt * s;
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| m[idx(i, k + 1 + t)] * vt)
                .sum::<Complex64>()
                * tau;
            for (t, vt) in v.iter().enumerate() {
                m[idx(i, k + 1 + t)] -= s * vt.conj();
            }
        }
        for i in (k + 2)..n {
            m[idx(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (s1, s2) = (mid + disc, mid - disc);
    if (s1 - d).norm() <= (s2 - d).norm() {
        s1
    } else {
        s2
    }
}

fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    // [c s; −s̄ c] with c real, zeroing g against f
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let r = fa.hypot(ga);
    let c = fa / r;
    let s = (f / fa) * g.conj() / r;
    (c, s)
}

/// Eigenvalues of an upper Hessenberg matrix; `h` is overwritten.
fn hessenberg_qr(h: &mut CMatrix) -> Result<(Vec<Complex64>, Vec<usize>)> {
    let n = h.dim();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut iters = Vec::with_capacity(n);
    if n == 0 {
        return Ok((values, iters));
    }
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64 / eps);
    let mut hi = n - 1;
    let mut count = 0usize;
    let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    loop {
        // find the start of the unreduced block ending at hi
        let mut l = hi;
        while l > 0 {
            let sub = h.get(l, l - 1);
            let mut tst = cabs1(h.get(l - 1, l - 1)) + cabs1(h.get(l, l));
            if tst == 0.0 {
                tst = h.norm_inf();
            }
            if cabs1(sub) <= small.max(eps * tst) {
                h.set(l, l - 1, Complex64::new(0.0, 0.0));
                break;
            }
            l -= 1;
        }
        if l == hi {
            values[hi] = h.get(hi, hi);
            iters.push(count);
            count = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        count += 1;
        if count > ITERATION_CAP {
            let partial = values[hi + 1..].to_vec();
            return Err(Error::NoConvergence {
                index: hi,
                iterations: count - 1,
                partial,
            });
        }
        let shift = if count % EXCEPTIONAL_PERIOD == 0 {
            h.get(hi, hi) + 0.75 * h.get(hi, hi - 1).re.abs()
        } else {
            wilkinson(
                h.get(hi - 1, hi - 1),
                h.get(hi - 1, hi),
                h.get(hi, hi - 1),
                h.get(hi, hi),
            )
        };
        // explicit QR step on the active window [l, hi]
        for k in l..=hi {
            let v = h.get(k, k) - shift;
            h.set(k, k, v);
        }
        rot.clear();
        for k in l..hi {
            let (c, s) = givens(h.get(k, k), h.get(k + 1, k));
            for j in k..=hi {
                let x = h.get(k, j);
                let y = h.get(k + 1, j);
                h.set(k, j, x * c + s * y);
                h.set(k + 1, j, -s.conj() * x + y * c);
            }
            rot.push((c, s));
        }
        for (t, &(c, s)) in rot.iter().enumerate() {
            let k = l + t;
            for i in l..=(k + 1).min(hi) {
                let x = h.get(i, k);
                let y = h.get(i, k + 1);
                h.set(i, k, x * c + y * s.conj());
                h.set(i, k + 1, -x * s + y * c);
            }
        }
        for k in l..=hi {
            let v = h.get(k, k) + shift;
            h.set(k, k, v);
        }
    }
    Ok((values, iters))
}

/// Sorts by real part, then imaginary part.
pub fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// All eigenvalues of a dense complex matrix.
pub fn complex_eigenvalues(matrix: &CMatrix) -> Result<ComplexSpectrum> {
    let n = matrix.dim();
    if n > DENSE_DIMENSION_CAP {
        return Err(Error::Resource(format!(
            "dense complex solve of dimension {n} exceeds the cap {DENSE_DIMENSION_CAP}"
        )));
    }
    let mut h = matrix.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let (mut values, iterations) = hessenberg_qr(&mut h)?;

    let scale = matrix.norm_inf().max(f64::MIN_POSITIVE);
    let trace_residual = (values.iter().sum::<Complex64>() - matrix.trace()).norm();
    let log_det_residual = if values.iter().any(|z| z.norm() == 0.0) {
        None
    } else {
        matrix.log_det().map(|ld| {
            let d = values.iter().map(|z| z.ln()).sum::<Complex64>() - ld;
            let two_pi = 2.0 * std::f64::consts::PI;
            let phase = d.im - two_pi * (d.im / two_pi).round();
            d.re.hypot(phase)
        })
    };
    sort_spectrum(&mut values);
    Ok(ComplexSpectrum {
        converged: vec![true; n],
        iterations,
        eigenvalues: values,
        trace_residual,
        trace_tolerance: 1e-8 * (n.max(1) as f64) * scale,
        log_det_residual,
    })
}
