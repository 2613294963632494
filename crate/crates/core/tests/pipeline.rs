use std::f64::consts::PI;

use cylspec::analysis::{fit_decay_rate, numerical_range_sector, persistence_check, DecayWindowOptions};
use cylspec::discretize::{
    assemble_deformed_potential_operator, assemble_guide_operator, assemble_mode_operator,
    assemble_potential_operator, Grid1D, GuideGrid, Sector, WallCondition,
};
use cylspec::eig_complex::{complex_eigenvalues, tridiagonal_to_dense};
use cylspec::eig_real::{
    eigenvalues_in_window, inertia_count, inverse_iteration, lowest_eigenpairs_2d, InverseIterationOptions,
    SpectralWindow, SubspaceOptions,
};
use cylspec::model_zoo::{
    build_threshold_ladder, CrossSectionSpec, PlanarGuideModel, ScalingParameter, ScalingProfile,
    SeparableModel, SquareWell, ZeroPotential,
};

#[test]
fn square_well_bound_state_end_to_end() {
    let well = SquareWell::new(5.0, 2.0).unwrap();
    let grid = Grid1D::half_line(30.0, 0.01).unwrap();
    let op = assemble_potential_operator(&well, &grid);
    let found = eigenvalues_in_window(&op, SpectralWindow::new(-5.0, 0.0).unwrap(), 1e-12).unwrap();
    assert_eq!(found.eigenvalues.len(), 1);
    let e = found.eigenvalues[0];
    // odd root of −k cot(2k) = √(5 − k²) is E = −3.389530...; O(h²) off
    assert!((e + 3.389_530).abs() < 1e-3, "{e}");

    let opts = InverseIterationOptions { componentwise_floor: Some(1e-300), ..Default::default() };
    let pair = inverse_iteration(&op, e, &opts).unwrap();
    let fit = fit_decay_rate(&grid, &pair.vector, &well, -e, &DecayWindowOptions::default()).unwrap();
    assert!((fit.ratio() - 1.0).abs() < 1e-3, "{}", fit.ratio());

    let profile = ScalingProfile::new(4.0, 1.0).unwrap();
    let lambdas = [ScalingParameter::imag(0.25).unwrap()];
    let report = persistence_check(&well, e, &lambdas, &grid, &profile, Some(1e-7)).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn product_cylinder_has_nothing_below_threshold() {
    let model = SeparableModel::product(1, CrossSectionSpec::interval_dirichlet()).unwrap();
    let sigma = build_threshold_ladder(&CrossSectionSpec::interval_dirichlet(), 1).unwrap().values().next().unwrap();
    let op = assemble_mode_operator(&model, sigma, &Grid1D::symmetric(20.0, 0.05).unwrap());
    let found = eigenvalues_in_window(&op, SpectralWindow::new(-10.0, 0.0).unwrap(), 1e-10).unwrap();
    assert!(found.eigenvalues.is_empty());
}

#[test]
fn scaled_free_laplacian_is_sectorial_and_rotated() {
    let grid = Grid1D::half_line(15.0, 0.1).unwrap();
    let profile = ScalingProfile::new(2.0, 1.0).unwrap();
    let lambda = ScalingParameter::imag(0.3).unwrap();
    let op = assemble_deformed_potential_operator(&ZeroPotential, &grid, &profile, &lambda).unwrap();
    let spec = complex_eigenvalues(&tridiagonal_to_dense(&op).unwrap()).unwrap();
    assert!(spec.trace_ok());
    // everything in the lower half plane, no steeper than the rotated ray
    let ray = -2.0 * 0.3f64.atan();
    for z in &spec.eigenvalues {
        assert!(z.im < 0.0);
        assert!(z.arg() >= ray - 1e-9, "{z}");
    }
    let fit = numerical_range_sector(&op, 300, 1).unwrap();
    assert!(fit.theta < PI / 2.0);
}

#[test]
fn guide_counts_agree_between_inertia_and_subspace() {
    let model = PlanarGuideModel::new(1.0, 5.0, 2.0).unwrap();
    let grid = GuideGrid::with_spacing(12.0, 0.5, 12).unwrap();
    let op = assemble_guide_operator(&model, &grid, WallCondition::Dirichlet, Sector::Full).unwrap();
    let below = inertia_count(&op, PI * PI / 4.0).unwrap();
    assert!(below >= 1);
    let k = below.min(5);
    let low = lowest_eigenpairs_2d(&op, k, -1.0, &SubspaceOptions::default()).unwrap();
    assert!(low.eigenvalues.iter().all(|&mu| mu > 0.0 && mu < PI * PI / 4.0));
    assert_eq!(inertia_count(&op, low.eigenvalues[k - 1] + 1e-9).unwrap(), k);
}
