//! One function per study kind: solve, analyse, and package artifacts.

use std::f64::consts::PI;

use cylspec::analysis::{
    accumulation_scan, conjugation_invariance, fit_decay_on_window, fit_decay_rate,
    numerical_range_sector, persistence_check, persistence_tolerance, ray_deviation,
    AccumulationOptions, DecayWindowOptions, EigenClass, EssentialCurve, Sweep,
};
use cylspec::discretize::{
    assemble_deformed_potential_operator, assemble_guide_operator, assemble_potential_operator,
    Grid1D, GuideGrid, Sector, TridiagonalOperator, WallCondition,
};
use cylspec::eig_complex::{complex_eigenvalues, tridiagonal_to_dense};
use cylspec::eig_real::{
    dense_symmetric_eigenvalues, eigenvalues_in_window, inertia_count, inverse_iteration,
    lowest_eigenpairs_2d, InverseIterationOptions, SpectralWindow, SubspaceOptions,
    SymmetricMatrix, RESIDUAL_TOL,
};
use cylspec::model_zoo::{
    build_threshold_ladder, max_decay_rate, AxialPotential, CrossSectionKind, CrossSectionSpec,
    PlanarGuideModel, ScalingParameter, ScalingProfile, SeparableModel, SquareWell, ZeroPotential,
};
use num_complex::Complex64;
use serde_json::json;

use crate::artifact::{json_artifact, num, Check, StudyOutput, Table};
use crate::config::{Domain, ExperimentConfig, ModelConfig, NumericConfig, StudyKind, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::plots;

/// Attaches the study name to core errors.
trait InStudy<T> {
    fn ctx(self, study: StudyKind) -> CliResult<T>;
}

impl<T> InStudy<T> for cylspec::Result<T> {
    fn ctx(self, study: StudyKind) -> CliResult<T> {
        self.map_err(|source| CliError::Study {
            study: study.name(),
            source,
        })
    }
}

/// The axial (1D) problem behind the spectrum, decay and scaling studies.
enum Axial {
    Separable { model: SeparableModel, sigma: f64 },
    Well(SquareWell),
    Free,
}

impl Axial {
    fn from_config(cfg: &ExperimentConfig) -> cylspec::Result<Self> {
        match &cfg.model {
            ModelConfig::Separable {
                n,
                delta,
                c,
                amplitude,
                cross_section,
                mode,
            } => {
                let model = SeparableModel::new(*n, *delta, *c, *amplitude, *cross_section)?;
                let sigma = build_threshold_ladder(cross_section, *mode)?.flattened()[mode - 1];
                Ok(Self::Separable { model, sigma })
            }
            ModelConfig::SquareWell { depth, half_width } => {
                Ok(Self::Well(SquareWell::new(*depth, *half_width)?))
            }
            ModelConfig::Free => Ok(Self::Free),
            ModelConfig::Guide { .. } => Err(cylspec::Error::Config(
                "the guide model has no axial reduction".into(),
            )),
        }
    }

    /// Threshold `ν` of the axial problem; reported eigenvalues are `ν + E`.
    fn threshold(&self) -> f64 {
        match self {
            Self::Separable { sigma, .. } => *sigma,
            _ => 0.0,
        }
    }

    fn with<R>(&self, f: impl FnOnce(&dyn AxialPotential) -> R) -> R {
        match self {
            Self::Separable { model, sigma } => f(&model.mode(*sigma)),
            Self::Well(w) => f(w),
            Self::Free => f(&ZeroPotential),
        }
    }

    /// Closest decay-rate bound over all thresholds above `mu` (full units).
    fn theorem_bound(&self, cfg: &ExperimentConfig, offset: f64) -> cylspec::Result<f64> {
        match (self, &cfg.model) {
            (Self::Separable { sigma, .. }, ModelConfig::Separable { cross_section, mode, .. }) => {
                let ladder = build_threshold_ladder(cross_section, mode + 1)?;
                max_decay_rate(sigma + offset, &ladder)
            }
            _ => Ok(-(-offset).sqrt()),
        }
    }
}

fn grid_1d(n: &NumericConfig) -> cylspec::Result<Grid1D> {
    match n.domain {
        Domain::Symmetric => Grid1D::symmetric(n.length, n.h),
        Domain::HalfLine => Grid1D::half_line(n.length, n.h),
    }
}

/// Bisection tolerance: relative to the largest window bound, at least 1.
fn window_tolerance(n: &NumericConfig) -> f64 {
    n.relative_tolerance * n.window[0].abs().max(n.window[1].abs()).max(1.0)
}

fn window(n: &NumericConfig) -> CliResult<SpectralWindow> {
    SpectralWindow::new(n.window[0], n.window[1]).map_err(|e| CliError::config("numeric.window", e.to_string()))
}

fn scale_of(op: &TridiagonalOperator) -> f64 {
    op.norm_inf().max(1.0)
}

fn summary(cfg: &ExperimentConfig, checks: &[Check], data: serde_json::Value) -> CliResult<crate::artifact::Artifact> {
    json_artifact(
        "summary.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "study": cfg.study.name(),
            "checks": checks,
            "data": data,
        }),
    )
}

pub fn run_study(cfg: &ExperimentConfig) -> CliResult<StudyOutput> {
    cfg.validate()?;
    match cfg.study {
        StudyKind::Thresholds => thresholds(cfg),
        StudyKind::Spectrum => spectrum(cfg),
        StudyKind::Accumulation => accumulation(cfg),
        StudyKind::Decay => decay(cfg),
        StudyKind::Scaling => scaling(cfg),
        StudyKind::Guide2d => guide2d(cfg),
    }
}

fn closed_form_threshold(spec: &CrossSectionSpec, j: usize) -> f64 {
    // j is the 1-based position in the distinct ladder
    let k = j as f64;
    match spec.kind {
        CrossSectionKind::IntervalDirichlet => (k * PI / (2.0 * spec.extent)).powi(2),
        CrossSectionKind::IntervalNeumann => ((k - 1.0) * PI / (2.0 * spec.extent)).powi(2),
        CrossSectionKind::Circle => ((k - 1.0) / spec.extent).powi(2),
    }
}

fn thresholds(cfg: &ExperimentConfig) -> CliResult<StudyOutput> {
    let study = cfg.study;
    let spec = match &cfg.model {
        ModelConfig::Separable { cross_section, .. } => *cross_section,
        ModelConfig::Guide { wall, .. } => match wall {
            WallCondition::Dirichlet => CrossSectionSpec::interval_dirichlet(),
            WallCondition::Neumann => CrossSectionSpec::interval_neumann(),
        },
        _ => return Err(CliError::config("model.kind", "no cross-section")),
    };
    let ladder = build_threshold_ladder(&spec, cfg.numeric.threshold_count).ctx(study)?;
    let mut table = Table::new(&["j", "nu", "multiplicity"]);
    let mut worst = 0.0f64;
    for (i, t) in ladder.entries().iter().enumerate() {
        table.push(vec![(i + 1).to_string(), num(t.value), t.multiplicity.to_string()]);
        let expect = closed_form_threshold(&spec, i + 1);
        worst = worst.max((t.value - expect).abs() / expect.max(1.0));
    }
    let values: Vec<f64> = ladder.values().collect();
    let checks = vec![
        Check::new(
            "ladder_strictly_increasing",
            values.windows(2).all(|w| w[1] > w[0]) && values[0] >= 0.0,
            format!("{} thresholds", values.len()),
        ),
        Check::new(
            "closed_form_agreement",
            worst <= 1e-12,
            format!("max relative deviation {worst:e}"),
        ),
    ];
    let data = json!({ "cross_section": spec, "thresholds": values });
    Ok(StudyOutput {
        artifacts: vec![table.into_artifact("thresholds.csv")?, summary(cfg, &checks, data)?],
        checks,
    })
}

fn spectrum(cfg: &ExperimentConfig) -> CliResult<StudyOutput> {
    let study = cfg.study;
    let axial = Axial::from_config(cfg).ctx(study)?;
    let nu = axial.threshold();
    let grid = grid_1d(&cfg.numeric).ctx(study)?;
    let op = axial.with(|p| assemble_potential_operator(p, &grid));
    let scale = scale_of(&op);
    let result = eigenvalues_in_window(&op, window(&cfg.numeric)?, window_tolerance(&cfg.numeric)).ctx(study)?;

    let mut checks = Vec::new();
    let mut table = Table::new(&["index", "offset", "mu", "residual"]);
    let mut worst = 0.0f64;
    let mut clustered = 0;
    for (i, &e) in result.eigenvalues.iter().enumerate() {
        let residual = match inverse_iteration(&op, e, &InverseIterationOptions::default()) {
            Ok(p) => p.residual,
            Err(cylspec::Error::Degenerate { .. }) => {
                clustered += 1;
                f64::NAN
            }
            Err(e) => return Err(CliError::Study { study: study.name(), source: e }),
        };
        if residual.is_finite() {
            worst = worst.max(residual);
        }
        table.push(vec![i.to_string(), num(e), num(nu + e), num(residual)]);
    }
    checks.push(Check::new(
        "residuals_within_bound",
        worst <= RESIDUAL_TOL * scale,
        format!("max residual {worst:e} (bound {:e}); {clustered} clustered values located by bisection only", RESIDUAL_TOL * scale),
    ));
    let mut artifacts = vec![table.into_artifact("eigenvalues.csv")?];
    let mut data = json!({
        "threshold": nu,
        "count": result.eigenvalues.len(),
        "n": grid.n_points,
        "h": grid.h(),
    });

    let lambdas = cfg.deformation.lambda_values();
    if !lambdas.is_empty() {
        let profile = ScalingProfile::new(cfg.deformation.onset, cfg.deformation.ramp_width).ctx(study)?;
        let curve_tol = 10.0 * (grid.h() + 1.0 / grid.reach());
        let band = 1e-8 * scale;
        let mut spec_table = Table::new(&["lambda_re", "lambda_im", "index", "mu_re", "mu_im", "class", "curve_distance"]);
        let mut ray_table = Table::new(&[
            "lambda_re", "lambda_im", "nonreal", "near_curve", "fraction", "max_curve_distance",
            "max_relative_deviation", "isolated",
        ]);
        let mut curve_table = Table::new(&["lambda_re", "lambda_im", "xi", "mu_re", "mu_im"]);
        let mut series = Vec::new();
        let mut curves = Vec::new();
        let persist_tol = |e: f64| persistence_tolerance(grid.h(), (-e).max(0.0), grid.reach());
        for &l in &lambdas {
            let lambda = ScalingParameter::new(l).map_err(|e| CliError::config("deformation.lambdas", e.to_string()))?;
            let dop = axial
                .with(|p| assemble_deformed_potential_operator(p, &grid, &profile, &lambda))
                .ctx(study)?;
            let spec = complex_eigenvalues(&tridiagonal_to_dense(&dop).ctx(study)?).ctx(study)?;
            checks.push(Check::new(
                format!("trace_check[{l}]"),
                spec.trace_ok(),
                format!("trace residual {:e} (bound {:e})", spec.trace_residual, spec.trace_tolerance),
            ));
            let curve = EssentialCurve::new(0.0, l, Complex64::new(0.0, 0.0));
            let report = ray_deviation(&spec.eigenvalues, &[curve], band, curve_tol);
            for (i, z) in spec.eigenvalues.iter().enumerate() {
                let class = match report.classes[i] {
                    EigenClass::NearCurve => "near-curve",
                    EigenClass::NearRealIsolated => "near-real-isolated",
                    EigenClass::Outlier => "outlier",
                };
                spec_table.push(vec![
                    num(l.re), num(l.im), i.to_string(), num(nu + z.re), num(z.im), class.into(),
                    num(report.distances[i]),
                ]);
            }
            ray_table.push(vec![
                num(l.re), num(l.im), report.nonreal_count.to_string(), report.nonreal_near_curve.to_string(),
                num(report.nonreal_fraction_near_curve()), num(report.max_curve_distance),
                num(report.max_relative_deviation), report.near_real_isolated.len().to_string(),
            ]);
            let zmax = spec.eigenvalues.iter().map(|z| z.norm()).fold(1.0, f64::max);
            let xi_max = (zmax * (1.0 + l).norm_sqr()).sqrt();
            let mut pts = Vec::with_capacity(201);
            for k in 0..=200 {
                let xi = xi_max * k as f64 / 200.0;
                let z = curve.point(xi) + nu;
                curve_table.push(vec![num(l.re), num(l.im), num(xi), num(z.re), num(z.im)]);
                pts.push(z);
            }
            curves.push(pts);
            series.push((format!("lambda = {l}"), spec.eigenvalues.iter().map(|z| z + nu).collect()));
            if l == Complex64::new(0.0, 0.0) {
                let im = spec.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                checks.push(Check::new("undeformed_spectrum_real", im <= 1e-9, format!("max |Im mu| {im:e}")));
            } else if l.im != 0.0 {
                let frac = report.nonreal_fraction_near_curve();
                checks.push(Check::new(
                    format!("ray_fraction[{l}]"),
                    frac >= 0.95,
                    format!(
                        "{}/{} non-real eigenvalues within {curve_tol} of the rotated ray ({frac:.4}); max relative deviation {:e}",
                        report.nonreal_near_curve, report.nonreal_count, report.max_relative_deviation
                    ),
                ));
                let missing: Vec<f64> = result
                    .eigenvalues
                    .iter()
                    .copied()
                    .filter(|&e| e < 0.0)
                    .filter(|&e| !report.near_real_isolated.iter().any(|z| (z.re - e).abs() <= persist_tol(e)))
                    .collect();
                checks.push(Check::new(
                    format!("bound_states_isolated[{l}]"),
                    missing.is_empty(),
                    format!("bound states without an isolated partner: {missing:?}"),
                ));
            }
        }
        data["curve_tolerance"] = json!(curve_tol);
        data["real_band"] = json!(band);
        artifacts.push(spec_table.into_artifact("complex_spectrum.csv")?);
        artifacts.push(ray_table.into_artifact("ray_summary.csv")?);
        artifacts.push(curve_table.into_artifact("curves.csv")?);
        artifacts.push(plots::spectrum_plot("spectrum.svg", &series, &curves));
    } else {
        let series = vec![(
            "real spectrum".to_string(),
            result.eigenvalues.iter().map(|&e| Complex64::new(nu + e, 0.0)).collect(),
        )];
        artifacts.push(plots::spectrum_plot("spectrum.svg", &series, &[]));
    }
    artifacts.push(summary(cfg, &checks, data)?);
    Ok(StudyOutput { artifacts, checks })
}

fn accumulation(cfg: &ExperimentConfig) -> CliResult<StudyOutput> {
    let study = cfg.study;
    let ModelConfig::Separable { n, delta, c, amplitude, cross_section, mode } = &cfg.model else {
        return Err(CliError::config("model.kind", "accumulation needs a separable model"));
    };
    let model = SeparableModel::new(*n, *delta, *c, *amplitude, *cross_section).ctx(study)?;
    let num_cfg = &cfg.numeric;
    let sweep = if num_cfg.modes.is_empty() {
        Sweep::Length { mode: *mode, lengths: num_cfg.lengths.clone() }
    } else {
        Sweep::Mode { length: num_cfg.length, modes: num_cfg.modes.clone() }
    };
    let mut opts = AccumulationOptions::new(num_cfg.epsilon, num_cfg.h);
    opts.tol = num_cfg.relative_tolerance * num_cfg.epsilon.max(1.0);
    let report = accumulation_scan(&model, &sweep, &opts).ctx(study)?;

    let mut table = Table::new(&["mode", "length", "threshold", "count", "stable_above", "transient_above", "embedded"]);
    let mut eig = Table::new(&["mode", "length", "offset", "mu"]);
    let mut stairs = Vec::new();
    for p in &report.points {
        table.push(vec![
            p.mode.to_string(), num(p.length), num(p.threshold), p.count().to_string(),
            p.stable_above.len().to_string(), p.transient_above.to_string(), p.embedded.to_string(),
        ]);
        for &e in &p.below {
            eig.push(vec![p.mode.to_string(), num(p.length), num(e), num(p.threshold + e)]);
        }
        let x = match sweep {
            Sweep::Length { .. } => p.length,
            Sweep::Mode { .. } => p.mode as f64,
        };
        stairs.push((x, p.count()));
    }
    let mut checks = vec![
        Check::new("below_only", report.below_only, "every counted eigenvalue is strictly below its threshold"),
        Check::new(
            "no_stable_eigenvalue_above",
            report.violations.is_empty(),
            if report.violations.is_empty() { "none".to_string() } else { report.violations.join("; ") },
        ),
    ];
    if let Some(m) = report.monotone {
        checks.push(Check::new("count_nondecreasing_in_length", m, format!("counts {:?}", report.counts())));
    }
    let xlabel = if matches!(sweep, Sweep::Length { .. }) { "L" } else { "mode k" };
    let data = json!({ "epsilon": report.epsilon, "h": report.h, "counts": report.counts(), "sweep": sweep });
    let artifacts = vec![
        table.into_artifact("accumulation.csv")?,
        eig.into_artifact("accumulation_eigenvalues.csv")?,
        plots::staircase_plot("accumulation.svg", xlabel, &stairs),
        summary(cfg, &checks, data)?,
    ];
    Ok(StudyOutput { artifacts, checks })
}

fn decay(cfg: &ExperimentConfig) -> CliResult<StudyOutput> {
    let study = cfg.study;
    let axial = Axial::from_config(cfg).ctx(study)?;
    let nu = axial.threshold();
    let grid = grid_1d(&cfg.numeric).ctx(study)?;
    let op = axial.with(|p| assemble_potential_operator(p, &grid));
    let found = eigenvalues_in_window(&op, window(&cfg.numeric)?, window_tolerance(&cfg.numeric)).ctx(study)?;
    let Some(&e) = found.eigenvalues.get(cfg.numeric.state) else {
        return Err(CliError::config(
            "numeric.state",
            format!("window holds {} eigenvalues, no index {}", found.eigenvalues.len(), cfg.numeric.state),
        ));
    };
    if e >= 0.0 {
        return Err(CliError::config("numeric.window", format!("selected eigenvalue {e} is not below the threshold")));
    }
    let wopts = DecayWindowOptions::default();
    let iopts = InverseIterationOptions { componentwise_floor: Some(wopts.floor_relative), seed: cfg.seed, ..Default::default() };
    let pair = inverse_iteration(&op, e, &iopts).ctx(study)?;
    let gap = -pair.value;
    let fit = axial.with(|p| fit_decay_rate(&grid, &pair.vector, p, gap, &wopts)).ctx(study)?;
    let half = fit_decay_on_window(&grid, &pair.vector, gap, fit.window.0, 0.5 * (fit.window.0 + fit.window.1), wopts.min_r_squared)
        .ctx(study)?;
    let bound = axial.theorem_bound(cfg, pair.value).ctx(study)?;

    let mut t = Table::new(&[
        "mu", "offset", "gap", "gamma_hat", "predicted_bound", "ratio", "half_window_gamma", "half_window_ratio",
        "log_c", "x0", "x1", "points", "r_squared", "accepted", "theorem_bound", "residual",
    ]);
    t.push(vec![
        num(nu + pair.value), num(pair.value), num(gap), num(fit.gamma_hat), num(fit.predicted_bound), num(fit.ratio()),
        num(half.gamma_hat), num(half.ratio()), num(fit.log_c), num(fit.window.0), num(fit.window.1),
        fit.points.to_string(), num(fit.r_squared), fit.accepted.to_string(), num(bound), num(pair.residual),
    ]);
    let mut prof = Table::new(&["x", "psi", "log_abs_psi"]);
    let mut pts = Vec::new();
    for (x, &v) in grid.points().zip(&pair.vector) {
        if x >= 0.0 && v != 0.0 {
            let l = v.abs().ln();
            prof.push(vec![num(x), num(v), num(l)]);
            pts.push((x, l));
        }
    }
    let scale = scale_of(&op);
    let checks = vec![
        Check::new("fit_accepted", fit.accepted, format!("r^2 = {}", fit.r_squared)),
        Check::new(
            "residual_within_bound",
            pair.residual <= RESIDUAL_TOL * scale,
            format!("residual {:e}", pair.residual),
        ),
        Check::new(
            "window_doubling_stable",
            (fit.gamma_hat - half.gamma_hat).abs() <= 0.05 * gap.sqrt(),
            format!("full {} vs half {}", fit.gamma_hat, half.gamma_hat),
        ),
    ];
    let data = json!({ "fit": fit, "half_window": half, "theorem_bound": bound, "mu": nu + pair.value });
    let artifacts = vec![
        t.into_artifact("decay_fit.csv")?,
        prof.into_artifact("decay_profile.csv")?,
        plots::decay_plot("decay.svg", &pts, fit.gamma_hat, fit.log_c, fit.window),
        summary(cfg, &checks, data)?,
    ];
    Ok(StudyOutput { artifacts, checks })
}

fn scaling(cfg: &ExperimentConfig) -> CliResult<StudyOutput> {
    let study = cfg.study;
    let axial = Axial::from_config(cfg).ctx(study)?;
    let nu = axial.threshold();
    let grid = grid_1d(&cfg.numeric).ctx(study)?;
    let op = axial.with(|p| assemble_potential_operator(p, &grid));
    let d = &cfg.deformation;
    let profile = ScalingProfile::new(d.onset, d.ramp_width).ctx(study)?;
    let lambdas: Vec<ScalingParameter> = d
        .lambda_values()
        .into_iter()
        .map(ScalingParameter::new)
        .collect::<cylspec::Result<_>>()
        .map_err(|e| CliError::config("deformation.lambdas", e.to_string()))?;
    let candidates: Vec<f64> = eigenvalues_in_window(&op, window(&cfg.numeric)?, window_tolerance(&cfg.numeric))
        .ctx(study)?
        .eigenvalues
        .into_iter()
        .filter(|&e| e < 0.0)
        .collect();

    let mut checks = Vec::new();
    let mut pt = Table::new(&[
        "mu", "lambda_re", "lambda_im", "mu_hat_re", "mu_hat_im", "drift", "imag", "residual", "tolerance", "passed",
    ]);
    for &e in &candidates {
        let r = axial
            .with(|p| persistence_check(p, e, &lambdas, &grid, &profile, d.persistence_tolerance))
            .ctx(study)?;
        for en in &r.entries {
            pt.push(vec![
                num(nu + e), num(en.lambda.re), num(en.lambda.im), num(nu + en.mu_hat.re), num(en.mu_hat.im),
                num(en.drift), num(en.imag), num(en.residual), num(r.tolerance), en.passed.to_string(),
            ]);
        }
        checks.push(Check::new(
            format!("persistence[{}]", nu + e),
            r.passed(),
            format!("max drift {:e}, max |Im| {:e}, tol {:e}", r.max_drift(), r.max_imag(), r.tolerance),
        ));
    }

    let cgrid = match (d.conjugation_length, d.conjugation_h) {
        (None, None) => grid,
        (l, h) => {
            let mut n = cfg.numeric.clone();
            n.length = l.unwrap_or(n.length);
            n.h = h.unwrap_or(n.h);
            grid_1d(&n).ctx(study)?
        }
    };
    let betas = d.beta_values();
    let mut ct = Table::new(&[
        "lambda_re", "lambda_im", "beta_re", "beta_im", "log10_condition", "multiset_distance", "beta_over_sqrt_gap",
    ]);
    if !betas.is_empty() {
        let gap = candidates.first().map(|e| -e).unwrap_or(f64::NAN);
        // similarity is exact; the spectra differ by roundoff amplified by cond(D)
        let (mut worst, mut worst_ratio) = (0.0f64, 0.0f64);
        let mut ops = vec![(Complex64::new(0.0, 0.0), axial.with(|p| assemble_potential_operator(p, &cgrid)).to_complex())];
        for l in &lambdas {
            ops.push((l.value(), axial.with(|p| assemble_deformed_potential_operator(p, &cgrid, &profile, l)).ctx(study)?));
        }
        for (l, cop) in &ops {
            let bound = |log10_cond: f64| 1e3 * f64::EPSILON * cop.norm_inf().max(1.0) * 10f64.powf(log10_cond);
            for en in conjugation_invariance(cop, &betas, &profile).ctx(study)? {
                worst = worst.max(en.multiset_distance);
                worst_ratio = worst_ratio.max(en.multiset_distance / bound(en.log10_condition).max(1e-8));
                ct.push(vec![
                    num(l.re), num(l.im), num(en.beta.re), num(en.beta.im), num(en.log10_condition),
                    num(en.multiset_distance), num(en.beta.norm() / gap.sqrt()),
                ]);
            }
        }
        checks.push(Check::new(
            "conjugation_invariance",
            worst_ratio <= 1.0,
            format!(
                "max multiset distance {worst:e} on n = {}; max ratio to max(1e-8, 1e3 eps |A| cond(D)) {worst_ratio:.3}",
                cgrid.n_points
            ),
        ));
    }

    let mut st = Table::new(&["lambda_re", "lambda_im", "a", "theta", "samples", "min_re", "max_abs_im"]);
    for l in lambdas.iter().filter(|l| !l.is_real()) {
        let dop = axial.with(|p| assemble_deformed_potential_operator(p, &grid, &profile, l)).ctx(study)?;
        match numerical_range_sector(&dop, d.sector_samples, cfg.seed) {
            Ok(f) => {
                st.push(vec![
                    num(l.value().re), num(l.value().im), num(f.a), num(f.theta), f.samples.to_string(),
                    num(f.min_re), num(f.max_abs_im),
                ]);
                checks.push(Check::new(format!("sectorial[{}]", l.value()), true, format!("theta = {}", f.theta)));
            }
            Err(cylspec::Error::PropertyViolation(msg)) => {
                checks.push(Check::new(format!("sectorial[{}]", l.value()), false, msg));
            }
            Err(e) => return Err(CliError::Study { study: study.name(), source: e }),
        }
    }
    let data = json!({ "threshold": nu, "candidates": candidates.iter().map(|e| nu + e).collect::<Vec<_>>() });
    let artifacts = vec![
        pt.into_artifact("persistence.csv")?,
        ct.into_artifact("conjugation.csv")?,
        st.into_artifact("sector.csv")?,
        summary(cfg, &checks, data)?,
    ];
    Ok(StudyOutput { artifacts, checks })
}

/// Lowest threshold seen by a parity sector of the guide.
pub fn sector_threshold(wall: WallCondition, sector: Sector) -> f64 {
    let q = PI * PI / 4.0;
    match (wall, sector) {
        (WallCondition::Dirichlet, Sector::Odd) => 4.0 * q,
        (WallCondition::Dirichlet, _) => q,
        (WallCondition::Neumann, Sector::Odd) => q,
        (WallCondition::Neumann, _) => 0.0,
    }
}

fn guide2d(cfg: &ExperimentConfig) -> CliResult<StudyOutput> {
    let study = cfg.study;
    let ModelConfig::Guide { delta, amplitude, c, wall, sector } = &cfg.model else {
        return Err(CliError::config("model.kind", "guide2d needs a guide model"));
    };
    let (wall, sector) = (*wall, *sector);
    let model = PlanarGuideModel::new(*delta, *amplitude, *c).ctx(study)?;
    let n = &cfg.numeric;
    let (lo, hi) = (n.window[0], n.window[1]);
    let sopts = SubspaceOptions { seed: cfg.seed, ..Default::default() };
    let mut counts = Table::new(&["length", "nx", "ny", "lo", "hi", "count", "sector_threshold"]);
    let mut eig = Table::new(&["length", "index", "mu", "residual"]);
    let mut oracle = Table::new(&["length", "index", "subspace", "dense", "difference"]);
    let mut stairs = Vec::new();
    let (mut worst_res, mut worst_oracle, mut worst_asym) = (0.0f64, 0.0f64, 0.0f64);
    let mut res_bound = 0.0f64;
    for &length in &n.lengths {
        let grid = GuideGrid::with_spacing(length, n.hx, n.ny).ctx(study)?;
        let op = assemble_guide_operator(&model, &grid, wall, sector).ctx(study)?;
        worst_asym = worst_asym.max(op.assembly_asymmetry);
        let count = inertia_count(&op, hi).ctx(study)? - inertia_count(&op, lo.next_up()).ctx(study)?;
        counts.push(vec![
            num(length), grid.nx.to_string(), grid.ny.to_string(), num(lo), num(hi), count.to_string(),
            num(sector_threshold(wall, sector)),
        ]);
        stairs.push((length, count));
        let k = n.eigenpairs.min(op.dim());
        let low = lowest_eigenpairs_2d(&op, k, n.shift, &sopts).ctx(study)?;
        res_bound = res_bound.max(RESIDUAL_TOL * op.norm_inf().max(1.0));
        for (i, (mu, r)) in low.eigenvalues.iter().zip(&low.residuals).enumerate() {
            worst_res = worst_res.max(*r);
            eig.push(vec![num(length), i.to_string(), num(*mu), num(*r)]);
        }

        let ogrid = GuideGrid::new(length, n.oracle_nx, n.oracle_ny).ctx(study)?;
        let oop = assemble_guide_operator(&model, &ogrid, wall, sector).ctx(study)?;
        let dim = oop.dim();
        let dense = oop.to_dense();
        let rows: Vec<Vec<f64>> = (0..dim).map(|i| dense[i * dim..(i + 1) * dim].to_vec()).collect();
        let exact = dense_symmetric_eigenvalues(&SymmetricMatrix::from_rows(&rows).ctx(study)?).ctx(study)?;
        let ko = n.eigenpairs.min(dim);
        let shift = exact[0].min(n.shift) - 1.0;
        let sub = lowest_eigenpairs_2d(&oop, ko, shift, &sopts).ctx(study)?;
        for (i, (a, b)) in sub.eigenvalues.iter().zip(&exact).enumerate() {
            worst_oracle = worst_oracle.max((a - b).abs());
            oracle.push(vec![num(length), i.to_string(), num(*a), num(*b), num((a - b).abs())]);
        }
    }
    let counts_vec: Vec<usize> = stairs.iter().map(|s| s.1).collect();
    let checks = vec![
        Check::new("assembly_symmetric", worst_asym == 0.0, format!("max asymmetry {worst_asym:e}")),
        Check::new(
            "count_nondecreasing_in_length",
            counts_vec.windows(2).all(|w| w[1] >= w[0]),
            format!("counts in ({lo}, {hi}): {counts_vec:?}"),
        ),
        Check::new("residuals_within_bound", worst_res <= res_bound, format!("max residual {worst_res:e}")),
        Check::new("dense_oracle_agreement", worst_oracle <= 1e-9, format!("max difference {worst_oracle:e}")),
    ];
    let data = json!({
        "sector_threshold": sector_threshold(wall, sector),
        "counts": counts_vec,
        "window": [lo, hi],
    });
    let artifacts = vec![
        counts.into_artifact("guide_counts.csv")?,
        eig.into_artifact("guide_eigenvalues.csv")?,
        oracle.into_artifact("guide_oracle.csv")?,
        plots::staircase_plot("guide_counts.svg", "L", &stairs),
        summary(cfg, &checks, data)?,
    ];
    Ok(StudyOutput { artifacts, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(text, Path::new("test.toml")).unwrap()
    }

    fn rows(out: &StudyOutput, name: &str) -> Vec<Vec<String>> {
        let a = out.artifact(name).unwrap();
        let mut r = csv::Reader::from_reader(a.content.as_bytes());
        r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect()
    }

    fn thresholds_for(kind: &str) -> StudyOutput {
        run_study(&cfg(&format!(
            r#"
study = "thresholds"
[model]
kind = "separable"
n = 1
delta = 1.0
c = 1.0
amplitude = 1.0
cross_section = {{ kind = "{kind}", extent = 1.0, copies = 1 }}
"#
        )))
        .unwrap()
    }

    #[test]
    fn dirichlet_thresholds_start_at_quarter_pi_squared() {
        let out = thresholds_for("interval-dirichlet");
        assert!(out.passed());
        let r = rows(&out, "thresholds.csv");
        assert_eq!(r[0][0], "1");
        let nu1: f64 = r[0][1].parse().unwrap();
        let nu2: f64 = r[1][1].parse().unwrap();
        assert!((nu1 - PI * PI / 4.0).abs() < 1e-12);
        assert!((nu2 - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn neumann_second_threshold() {
        let r = rows(&thresholds_for("interval-neumann"), "thresholds.csv");
        assert_eq!(r[0][1], "0");
        assert!((r[1][1].parse::<f64>().unwrap() - PI * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn product_metric_has_empty_spectrum_below_threshold() {
        let out = run_study(&cfg(
            r#"
study = "spectrum"
[model]
kind = "separable"
n = 1
delta = 1.0
c = 1.0
amplitude = 0.0
cross_section = { kind = "interval-dirichlet", extent = 1.0, copies = 1 }
"#,
        ))
        .unwrap();
        assert!(out.passed());
        let a = out.artifact("eigenvalues.csv").unwrap();
        assert_eq!(a.records, 0);
        assert_eq!(a.content.trim(), "index,offset,mu,residual");
        assert!(out.artifact("spectrum.svg").unwrap().content.contains("</svg>"));
    }

    #[test]
    fn square_well_decay_rate() {
        let out = run_study(&cfg(
            r#"
study = "decay"
[model]
kind = "square-well"
depth = 5.0
half_width = 2.0
[numeric]
domain = "half-line"
length = 40.0
h = 0.01
window = [-5.0, 0.0]
"#,
        ))
        .unwrap();
        assert!(out.passed());
        let r = rows(&out, "decay_fit.csv");
        let gamma: f64 = r[0][3].parse().unwrap();
        // odd root of k cot(2k) = −√(5 − k²)
        assert!((gamma / -1.841_067_6 - 1.0).abs() < 0.01, "{gamma}");
        let svg = &out.artifact("decay.svg").unwrap().content;
        assert!(svg.contains(&format!("fitted slope {}", r[0][3])));
    }

    #[test]
    fn guide_sector_thresholds() {
        assert_eq!(sector_threshold(WallCondition::Dirichlet, Sector::Odd), PI * PI);
        assert_eq!(sector_threshold(WallCondition::Neumann, Sector::Full), 0.0);
    }

    #[test]
    fn self_check_cases_pass() {
        let checks = crate::selfcheck::run_self_check().unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
