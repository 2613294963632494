//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p cylspec-cli --test acceptance`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use cylspec::eig_complex::{complex_eigenvalues, CMatrix};
use cylspec::eig_real::{all_eigenvalues, jacobi_eigen, SymmetricMatrix};
use cylspec::discretize::TridiagonalOperator;
use cylspec::Complex64;
use cylspec_cli::artifact::StudyOutput;
use cylspec_cli::config::ExperimentConfig;
use cylspec_cli::runner::{run, MANIFEST_NAME};
use cylspec_cli::selfcheck::CASES;
use cylspec_cli::studies::run_study;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;

fn study(text: &str) -> Result<StudyOutput, String> {
    let cfg = ExperimentConfig::from_toml_str(text, Path::new("acceptance.toml")).map_err(|e| e.to_string())?;
    run_study(&cfg).map_err(|e| e.to_string())
}

/// Column `name` of CSV artifact `file`, parsed as f64.
fn column(out: &StudyOutput, file: &str, name: &str) -> Vec<f64> {
    let a = out.artifact(file).unwrap_or_else(|| panic!("missing {file}"));
    let mut r = csv::Reader::from_reader(a.content.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    r.records().map(|x| x.unwrap()[idx].parse().unwrap()).collect()
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().map(f64::abs).fold(0.0, f64::max)
}

fn separable(extra: &str, cross: &str) -> String {
    format!(
        r#"
[model]
kind = "separable"
n = 1
delta = 1.0
c = 1.0
amplitude = 1.0
cross_section = {{ kind = "{cross}", extent = 1.0, copies = 1 }}
{extra}"#
    )
}

fn c1_thresholds() -> Outcome {
    let d = study(&format!("study = \"thresholds\"\n{}", separable("", "interval-dirichlet")))?;
    let n = study(&format!("study = \"thresholds\"\n{}", separable("", "interval-neumann")))?;
    let dn = column(&d, "thresholds.csv", "nu");
    let nn = column(&n, "thresholds.csv", "nu");
    let q = PI * PI / 4.0;
    let errs = [(dn[0] - q).abs(), (dn[1] - PI * PI).abs(), (nn[1] - q).abs()];
    let ok = errs.iter().all(|&e| e <= 1e-12);
    Ok((ok, format!("|nu - closed form| = {errs:?} (tol 1e-12)")))
}

fn random_tridiagonal(rng: &mut ChaCha8Rng, n: usize) -> TridiagonalOperator {
    let diag = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let off = (0..n - 1).map(|_| rng.random_range(-3.0..3.0)).collect();
    TridiagonalOperator::from_parts(diag, off)
}

fn c2_solver_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_sturm = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(1..=50usize).max(2);
        let op = random_tridiagonal(&mut rng, n);
        let (oracle, _) = jacobi_eigen(&SymmetricMatrix::from_tridiagonal(&op)).map_err(|e| e.to_string())?;
        let got = all_eigenvalues(&op, 1e-13).map_err(|e| e.to_string())?;
        if got.len() != oracle.len() {
            return Ok((false, format!("count mismatch at n = {n}")));
        }
        worst_sturm = worst_sturm.max(max_abs(got.iter().zip(&oracle).map(|(a, b)| a - b)));
    }

    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut worst_qr = 0.0f64;
    let mut check = |rows: Vec<Vec<Complex64>>, mut expect: Vec<Complex64>| -> Result<(), String> {
        let m = CMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
        let got = complex_eigenvalues(&m).map_err(|e| e.to_string())?.eigenvalues;
        expect.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        for (g, e) in got.iter().zip(&expect) {
            worst_qr = worst_qr.max((g - e).norm());
        }
        Ok(())
    };
    check(vec![vec![c(2.5, -1.0)]], vec![c(2.5, -1.0)])?;
    check(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]], vec![c(0.0, 1.0), c(0.0, -1.0)])?;
    let s = 3f64.sqrt() / 2.0;
    let z = c(0.0, 0.0);
    check(
        vec![vec![z, z, c(1.0, 0.0)], vec![c(1.0, 0.0), z, z], vec![z, c(1.0, 0.0), z]],
        vec![c(1.0, 0.0), c(-0.5, s), c(-0.5, -s)],
    )?;

    let op = random_tridiagonal(&mut rng, 200);
    let sturm = all_eigenvalues(&op, 1e-13).map_err(|e| e.to_string())?;
    let dense = SymmetricMatrix::from_tridiagonal(&op);
    let rows: Vec<Vec<f64>> = (0..200).map(|i| (0..200).map(|j| dense.get(i, j)).collect()).collect();
    let qr = complex_eigenvalues(&CMatrix::from_real_rows(&rows).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .eigenvalues;
    let worst_sym = max_abs(qr.iter().zip(&sturm).map(|(a, b)| (a - b).norm()));

    let ok = worst_sturm <= 1e-10 && worst_qr <= 1e-10 && worst_sym <= 1e-9;
    Ok((
        ok,
        format!("sturm vs jacobi {worst_sturm:.2e} (1e-10), qr closed forms {worst_qr:.2e} (1e-10), qr vs sturm n=200 {worst_sym:.2e} (1e-9)"),
    ))
}

fn c3_accumulation() -> Outcome {
    let out = study(&format!(
        "study = \"accumulation\"\n{}",
        separable(
            "mode = 12\n[numeric]\nh = 0.02\nlengths = [50.0, 100.0, 200.0]\nepsilon = 0.05\n",
            "interval-dirichlet"
        )
    ))?;
    let counts = column(&out, "accumulation.csv", "count");
    let stable = column(&out, "accumulation.csv", "stable_above");
    let below = column(&out, "accumulation_eigenvalues.csv", "offset");
    let monotone = counts.windows(2).all(|w| w[1] >= w[0]);
    let enough = counts[2] >= 2.0;
    let negative = below.iter().all(|&e| e < 0.0);
    let clean = stable.iter().all(|&s| s == 0.0);
    Ok((
        monotone && enough && negative && clean,
        format!(
            "counts in (-0.05, 0) at L = 50/100/200: {counts:?} (nondecreasing {monotone}, >= 2 at L=200 {enough}); all negative {negative}; stable above {stable:?}"
        ),
    ))
}

/// Odd bound state of the half-width-2, depth-5 well on the half-line: `−k cot(2k) = √(5 − k²)`.
fn square_well_oracle() -> f64 {
    let f = |k: f64| -k / (2.0 * k).tan() - (5.0 - k * k).sqrt();
    let (mut lo, mut hi) = (PI / 4.0 + 1e-9, 5f64.sqrt() - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k = 0.5 * (lo + hi);
    k * k - 5.0
}

fn c4_decay() -> Outcome {
    let well = study(
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
    )?;
    let e = square_well_oracle();
    let exact = -(-e).sqrt();
    let g = column(&well, "decay_fit.csv", "gamma_hat")[0];
    let well_ok = (g / exact - 1.0).abs() <= 0.01;

    let tail = study(&format!(
        "study = \"decay\"\n{}",
        separable(
            "[numeric]\ndomain = \"symmetric\"\nlength = 100.0\nh = 0.02\nwindow = [-50.0, 0.0]\n",
            "interval-dirichlet"
        )
    ))?;
    let ratio = column(&tail, "decay_fit.csv", "ratio")[0];
    let half = column(&tail, "decay_fit.csv", "half_window_ratio")[0];
    let x0 = column(&tail, "decay_fit.csv", "x0")[0];
    let x1 = column(&tail, "decay_fit.csv", "x1")[0];
    let tail_ok = (ratio - 1.0).abs() <= 0.1 && (half - 1.0).abs() <= 0.1;
    Ok((
        well_ok && tail_ok,
        format!(
            "square well gamma {g:.6} vs oracle {exact:.6} (E = {e:.6}, tol 1%); delta tail ratio {ratio:.4}, half window {half:.4} on [{x0:.1}, {x1:.1}] (tol 10%)"
        ),
    ))
}

fn c5_ray() -> Outcome {
    let out = study(
        r#"
study = "spectrum"
[model]
kind = "free"
[numeric]
domain = "half-line"
length = 60.0
h = 0.05
window = [-1.0, 0.0]
[deformation]
lambdas = [[0.0, 0.0], [0.0, 0.3]]
onset = 2.0
"#,
    )?;
    let lre = column(&out, "complex_spectrum.csv", "lambda_im");
    let re = column(&out, "complex_spectrum.csv", "mu_re");
    let im = column(&out, "complex_spectrum.csv", "mu_im");
    let n = re.len() / 2;
    let undeformed_im = max_abs(lre.iter().zip(&im).filter(|(l, _)| **l == 0.0).map(|(_, v)| *v));
    // distance to the ray t·e^{−2i·atan 0.3}, t ≥ 0, from the threshold 0
    let dir = Complex64::from_polar(1.0, -2.0 * 0.3f64.atan());
    let tol = 10.0 * (0.05 + 1.0 / 60.0);
    let (mut nonreal, mut near) = (0, 0);
    for ((l, &x), &y) in lre.iter().zip(&re).zip(&im) {
        if *l != 0.3 || y.abs() <= 1e-8 * 1600.0 {
            continue;
        }
        nonreal += 1;
        let z = Complex64::new(x, y);
        let t = (z * dir.conj()).re.max(0.0);
        if (z - dir * t).norm() <= tol {
            near += 1;
        }
    }
    let frac = near as f64 / nonreal.max(1) as f64;
    Ok((
        undeformed_im <= 1e-9 && frac >= 0.95,
        format!(
            "n = {n}; lambda = 0: max |Im| {undeformed_im:.1e} (1e-9); lambda = 0.3i: {near}/{nonreal} non-real within {tol:.3} of the ray ({:.1}%, need 95%)",
            100.0 * frac
        ),
    ))
}

fn c6_persistence() -> Outcome {
    let out = study(
        r#"
study = "scaling"
[model]
kind = "square-well"
depth = 5.0
half_width = 2.0
[numeric]
domain = "half-line"
length = 40.0
h = 0.01
window = [-5.0, 0.0]
[deformation]
lambdas = [[0.0, 0.1], [0.0, 0.2], [0.0, 0.3]]
betas = [[-0.5, 0.0], [-1.0, 0.0], [-1.6, 0.0], [-1.0, 0.5]]
onset = 6.0
persistence_tolerance = 1e-6
sector_samples = 100
conjugation_length = 12.0
conjugation_h = 0.1
"#,
    )?;
    let drift = max_abs(column(&out, "persistence.csv", "drift"));
    let imag = max_abs(column(&out, "persistence.csv", "mu_hat_im"));
    let rows = column(&out, "persistence.csv", "drift").len();
    let ratio = column(&out, "conjugation.csv", "beta_over_sqrt_gap");
    let dist = column(&out, "conjugation.csv", "multiset_distance");
    let admissible = ratio.iter().all(|&r| r < 0.9);
    let worst = max_abs(dist);
    Ok((
        rows == 3 && drift <= 1e-6 && imag <= 1e-6 && admissible && worst <= 1e-8,
        format!(
            "max drift {drift:.1e}, max |Im| {imag:.1e} (1e-6) over {rows} lambdas; conjugation |beta|/sqrt(gap) <= {:.3}, multiset distance {worst:.1e} (1e-8)",
            ratio.iter().copied().fold(0.0, f64::max)
        ),
    ))
}

fn c7_sector() -> Outcome {
    let mut fits = Vec::new();
    for h in [0.05, 0.025] {
        let out = study(&format!(
            "study = \"scaling\"\n{}",
            separable(
                &format!(
                    "[numeric]\ndomain = \"symmetric\"\nlength = 30.0\nh = {h}\nwindow = [-5.0, 0.0]\n[deformation]\nlambdas = [[0.0, 0.3]]\nonset = 2.0\nsector_samples = 400\n"
                ),
                "interval-dirichlet"
            )
        ))?;
        let theta = column(&out, "sector.csv", "theta");
        let a = column(&out, "sector.csv", "a");
        if theta.is_empty() {
            return Ok((false, format!("no sector fit at h = {h} (numerical range not sectorial)")));
        }
        fits.push((h, a[0], theta[0]));
    }
    let sectorial = fits.iter().all(|f| f.2 < PI / 2.0 && f.1.is_finite());
    // refinement must not blow the vertex up
    let bounded = fits[1].1 <= 2.0 * fits[0].1.max(1.0);
    Ok((sectorial && bounded, format!("(h, a, theta) = {fits:?}; theta < pi/2 {sectorial}, a bounded {bounded}")))
}

fn c8_guide() -> Outcome {
    let run = |wall: &str, sector: &str, lo: f64, hi: f64| {
        study(&format!(
            r#"
study = "guide2d"
[model]
kind = "guide"
delta = 1.0
amplitude = 5.0
c = 2.0
wall = "{wall}"
sector = "{sector}"
[numeric]
lengths = [40.0, 80.0]
hx = 1.0
ny = 24
window = [{lo}, {hi}]
eigenpairs = 5
shift = -1.0
oracle_nx = 8
oracle_ny = 5
"#
        ))
    };
    let q = PI * PI / 4.0;
    let cases = [
        ("dirichlet", "full", -1.0, q, 3.0),
        ("dirichlet", "odd", -1.0, 4.0 * q, 1.0),
        ("neumann", "odd", 0.0, q, 1.0),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (wall, sector, lo, hi, need) in cases {
        let out = run(wall, sector, lo, hi)?;
        let counts = column(&out, "guide_counts.csv", "count");
        let nx = column(&out, "guide_counts.csv", "nx");
        let oracle = max_abs(column(&out, "guide_oracle.csv", "difference"));
        let monotone = counts.windows(2).all(|w| w[1] >= w[0]);
        let pass = counts[0] >= need && monotone && oracle <= 1e-9 && nx.iter().all(|&n| n <= 160.0) && out.passed();
        ok &= pass;
        detail.push(format!("{wall}/{sector} in ({lo}, {hi:.4}): {counts:?} (need >= {need}), oracle {oracle:.1e}"));
    }
    Ok((ok, detail.join("; ")))
}

fn c9_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for (name, text) in CASES {
        let cfg = ExperimentConfig::from_toml_str(text, Path::new(name)).map_err(|e| e.to_string())?;
        let a = tmp.path().join(name).join("a");
        let b = tmp.path().join(name).join("b");
        run(&cfg, &a).map_err(|e| e.to_string())?;
        run(&cfg, &b).map_err(|e| e.to_string())?;
        for entry in fs::read_dir(&a).map_err(|e| e.to_string())? {
            let file = entry.map_err(|e| e.to_string())?.file_name();
            let f = file.to_string_lossy();
            if f == MANIFEST_NAME || f.ends_with(".svg") {
                continue;
            }
            if fs::read(a.join(&file)).ok() != fs::read(b.join(&file)).ok() {
                return Ok((false, format!("{name}/{f} differs between runs")));
            }
            compared += 1;
        }
    }
    Ok((true, format!("{compared} CSV/JSON artifacts byte-identical across repeat runs of {} studies", CASES.len())))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("thresholds exactness", c1_thresholds, Duration::from_secs(1)),
        ("solver oracles", c2_solver_oracles, Duration::from_secs(30)),
        ("accumulation from below", c3_accumulation, Duration::from_secs(120)),
        ("decay rate", c4_decay, Duration::from_secs(60)),
        ("complex-scaling geometry", c5_ray, Duration::from_secs(120)),
        ("eigenvalue persistence", c6_persistence, Duration::from_secs(180)),
        ("sectoriality", c7_sector, Duration::from_secs(30)),
        ("2D guide", c8_guide, Duration::from_secs(300)),
        ("determinism", c9_determinism, Duration::from_secs(300)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let result = f();
        let dt = t.elapsed();
        let (ok, detail) = match result {
            Ok((ok, d)) => (ok && dt <= *limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} {:<26} {}  [{:.2} s / {} s]  {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            limit.as_secs(),
            detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
