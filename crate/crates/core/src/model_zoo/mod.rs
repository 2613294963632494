//! Concrete model manifolds: cross-sections, warp profiles, potentials and the
//! scaling contour. Everything here is a pure function of its parameters.

mod cross_section;
mod potential;
mod profile;
mod scaling;
mod stabilization;

pub use cross_section::{
    build_threshold_ladder, max_decay_rate, CrossSectionKind, CrossSectionSpec, Threshold,
    ThresholdLadder,
};
pub use potential::{potential_vk, AxialPotential, ModePotential, SquareWell, ZeroPotential};
pub use profile::{
    eval_profile, guide_metric, Bridge, GuideMetric, PlanarGuideModel, ProfileValue,
    SeparableModel, WarpProfile,
};
pub use scaling::{contour_point, scaling_s, ScalingParameter, ScalingProfile, SECTOR_ANGLE};
pub use stabilization::{
    validate_stabilization, StabilizationReport, StabilizationSample, StabilizingMetric,
};
