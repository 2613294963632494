//! Benchmark fixtures shared by the criterion benches.

use cylspec::discretize::{
    assemble_deformed_potential_operator, assemble_guide_operator, assemble_potential_operator,
    BandedOperator2D, ComplexTridiagonalOperator, Grid1D, GuideGrid, Sector, TridiagonalOperator,
    WallCondition,
};
use cylspec::model_zoo::{
    CrossSectionSpec, PlanarGuideModel, ScalingParameter, ScalingProfile, SeparableModel, SquareWell,
    ZeroPotential,
};

/// Ground mode of the `δ = 1` warped strip on `(−L, L)`.
pub fn mode_operator(length: f64, h: f64) -> TridiagonalOperator {
    let model = SeparableModel::new(1, 1.0, 1.0, 1.0, CrossSectionSpec::interval_dirichlet()).unwrap();
    let sigma = std::f64::consts::PI.powi(2) / 4.0;
    assemble_potential_operator(&model.mode(sigma), &Grid1D::symmetric(length, h).unwrap())
}

pub fn square_well_operator(length: f64, h: f64) -> TridiagonalOperator {
    let well = SquareWell::new(5.0, 2.0).unwrap();
    assemble_potential_operator(&well, &Grid1D::half_line(length, h).unwrap())
}

/// Free Laplacian on the half-line scaled with `λ = 0.3i` from `R = 2`.
pub fn deformed_free_operator(length: f64, h: f64) -> ComplexTridiagonalOperator {
    let grid = Grid1D::half_line(length, h).unwrap();
    let profile = ScalingProfile::new(2.0, 1.0).unwrap();
    let lambda = ScalingParameter::imag(0.3).unwrap();
    assemble_deformed_potential_operator(&ZeroPotential, &grid, &profile, &lambda).unwrap()
}

pub fn guide_operator(length: f64, hx: f64, ny: usize) -> BandedOperator2D {
    let model = PlanarGuideModel::new(1.0, 5.0, 2.0).unwrap();
    let grid = GuideGrid::with_spacing(length, hx, ny).unwrap();
    assemble_guide_operator(&model, &grid, WallCondition::Dirichlet, Sector::Full).unwrap()
}
