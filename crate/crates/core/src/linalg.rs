//! Small shared kernels: a scalar abstraction over `f64`/`Complex64` and a
//! pivoted tridiagonal LU used by the inverse-iteration solvers.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn conjugate(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conjugate(self) -> Self {
        self
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conjugate(self) -> Self {
        self.conj()
    }
}

/// Hermitian inner product `Σ conj(a_i) b_i`.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + x.conjugate() * y)
}

pub fn norm2<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt()
}

/// LU factorization with partial pivoting of a tridiagonal matrix
/// (the classical `gttrf` layout, with a second superdiagonal from pivoting).
#[derive(Debug, Clone)]
pub struct TridiagonalLu<T: Scalar> {
    dl: Vec<T>,
    d: Vec<T>,
    du: Vec<T>,
    du2: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Scalar> TridiagonalLu<T> {
    /// Factors `A − shift·I` where `A` has the given bands. Exact zero pivots
    /// are replaced by `tiny`, as is customary for inverse iteration.
    pub fn factor(lower: &[T], diag: &[T], upper: &[T], shift: T, tiny: f64) -> Self {
        let n = diag.len();
        let mut dl = lower.to_vec();
        let mut d: Vec<T> = diag.iter().map(|&x| x - shift).collect();
        let mut du = upper.to_vec();
        let mut du2 = vec![T::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].modulus() >= dl[i].modulus() {
                if d[i].modulus() == 0.0 {
                    d[i] = T::from_real(tiny);
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                let t = fact * du[i];
                d[i + 1] -= t;
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1].modulus() == 0.0 {
            d[n - 1] = T::from_real(tiny);
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.d.len();
        if n == 0 {
            return;
        }
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                let t = self.dl[i] * b[i];
                b[i + 1] -= t;
            }
        }
        b[n - 1] = b[n - 1] / self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
