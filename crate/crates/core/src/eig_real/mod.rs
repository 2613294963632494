//! Real symmetric eigensolvers.

mod banded;
mod dense;
mod inverse;
mod sturm;
mod subspace;

pub use banded::{inertia_count, BandedLdlt, MAX_SHIFT_RETRIES};
pub use dense::{dense_symmetric_eigenvalues, householder_tridiagonalize, jacobi_eigen, SymmetricMatrix};
pub use inverse::{inverse_iteration, residual_norm, EigenPair, InverseIterationOptions, RESIDUAL_TOL};
pub use sturm::{
    all_eigenvalues, count_at_most, default_tolerance, eigenvalues_in_window, sturm_count,
    SolverMeta, SpectralWindow, SpectrumResult, MAX_WINDOW_EIGENVALUES,
};
pub use subspace::{lowest_eigenpairs_2d, SubspaceOptions, MAX_REQUESTED_PAIRS};
