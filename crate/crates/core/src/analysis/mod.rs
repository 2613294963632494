//! Turning computed spectra and eigenvectors into geometric and asymptotic
//! statements: essential-spectrum curves, persistence, decay and accumulation.

mod accumulation;
mod decay;
mod essential;
mod fit;
mod persistence;
mod sector;

pub use accumulation::{accumulation_scan, AccumulationOptions, AccumulationReport, Sweep, SweepPoint};
pub use decay::{
    decay_window, fit_decay_on_window, fit_decay_rate, DecayFit, DecayWindowOptions,
    MIN_WINDOW_POINTS,
};
pub use essential::{
    predict_essential_curve, ray_deviation, EigenClass, EssentialCurve, RayDeviationReport,
};
pub use fit::{linear_fit, LinearFit};
pub use persistence::{
    conjugation_invariance, multiset_distance, persistence_check, persistence_tolerance,
    ConjugationEntry, PersistenceEntry, PersistenceReport,
};
pub use sector::{
    fit_sector, numerical_range_sector, rayleigh_samples, ComplexOperator, SectorFit,
    MIN_SECTOR_SAMPLES,
};
