//! Fast built-in property suite behind `cylspec --check`.

use std::path::Path;

use crate::artifact::Check;
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::studies::run_study;

/// Small configurations, one per study kind, each finishing in well under a second.
pub const CASES: &[(&str, &str)] = &[
    (
        "thresholds",
        r#"
study = "thresholds"
[model]
kind = "separable"
n = 1
delta = 1.0
c = 1.0
amplitude = 1.0
cross_section = { kind = "circle", extent = 1.0, copies = 1 }
[numeric]
threshold_count = 4
"#,
    ),
    (
        "spectrum",
        r#"
study = "spectrum"
[model]
kind = "square-well"
depth = 5.0
half_width = 2.0
[numeric]
domain = "half-line"
length = 15.0
h = 0.05
window = [-5.0, 0.0]
[deformation]
lambdas = [[0.0, 0.0]]
onset = 3.0
"#,
    ),
    (
        "accumulation",
        r#"
study = "accumulation"
[model]
kind = "separable"
n = 1
delta = 1.0
c = 1.0
amplitude = 1.0
cross_section = { kind = "interval-dirichlet", extent = 1.0, copies = 1 }
[numeric]
h = 0.1
lengths = [20.0, 40.0]
epsilon = 0.05
"#,
    ),
    (
        "decay",
        r#"
study = "decay"
[model]
kind = "square-well"
depth = 5.0
half_width = 2.0
[numeric]
domain = "half-line"
length = 30.0
h = 0.02
window = [-5.0, 0.0]
"#,
    ),
    (
        "scaling",
        r#"
study = "scaling"
[model]
kind = "square-well"
depth = 5.0
half_width = 2.0
[numeric]
domain = "half-line"
length = 20.0
h = 0.05
window = [-5.0, 0.0]
[deformation]
lambdas = [[0.0, 0.2], [0.1, 0.3]]
betas = [[-0.5, 0.0], [-1.0, 0.2]]
onset = 3.0
sector_samples = 200
conjugation_length = 12.0
conjugation_h = 0.1
"#,
    ),
    (
        "guide2d",
        r#"
study = "guide2d"
[model]
kind = "guide"
delta = 1.0
amplitude = 5.0
c = 2.0
wall = "dirichlet"
sector = "odd"
[numeric]
lengths = [8.0, 16.0]
hx = 0.5
ny = 8
window = [0.0, 9.8]
eigenpairs = 3
shift = 0.0
oracle_nx = 8
oracle_ny = 5
"#,
    ),
];

/// Runs every case; checks are prefixed with the case name.
pub fn run_self_check() -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for (name, text) in CASES {
        let cfg = ExperimentConfig::from_toml_str(text, Path::new(name))?;
        for c in run_study(&cfg)?.checks {
            out.push(Check::new(format!("{name}/{}", c.name), c.passed, c.detail));
        }
    }
    Ok(out)
}
