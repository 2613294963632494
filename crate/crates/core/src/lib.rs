//! Spectral toolkit for Laplacians on asymptotically cylindrical ends:
//! model metrics, finite-difference discretizations, real and complex
//! eigensolvers, and the analysis that turns spectra into geometric claims.

pub mod analysis;
pub mod discretize;
pub mod eig_complex;
pub mod eig_real;
pub mod error;
mod linalg;
pub mod model_zoo;

pub use error::{Error, Result};
pub use num_complex::Complex64;
