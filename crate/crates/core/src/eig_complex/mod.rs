//! Complex eigensolvers for deformed and conjugated operators.

mod matrix;
mod nearest;
mod qr;

pub use matrix::{tridiagonal_to_dense, CMatrix, DENSE_DIMENSION_CAP};
pub use nearest::{nearest_eigenvalue, NearestEigenvalue, NearestOptions};
pub use qr::{
    balance, complex_eigenvalues, hessenberg, sort_spectrum, ComplexSpectrum, EXCEPTIONAL_PERIOD,
    ITERATION_CAP,
};
