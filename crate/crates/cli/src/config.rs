//! Experiment configuration (TOML).

use std::path::{Path, PathBuf};

use cylspec::discretize::{Sector, WallCondition};
use cylspec::model_zoo::CrossSectionSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Version of the configuration and artifact schemas.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    Thresholds,
    Spectrum,
    Accumulation,
    Decay,
    Scaling,
    Guide2d,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Thresholds => "thresholds",
            Self::Spectrum => "spectrum",
            Self::Accumulation => "accumulation",
            Self::Decay => "decay",
            Self::Scaling => "scaling",
            Self::Guide2d => "guide2d",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    /// Warped cylinder `f^{4/n} = 1 + a|x|^{−δ}`; 1D studies use mode `mode` (1-based).
    Separable {
        n: u32,
        delta: f64,
        c: f64,
        amplitude: f64,
        cross_section: CrossSectionSpec,
        #[serde(default = "one")]
        mode: usize,
    },
    /// `V = −depth` on `|x| < half_width`.
    SquareWell { depth: f64, half_width: f64 },
    /// `V ≡ 0`.
    Free,
    /// Planar guide of half-width `f(s) = 1 + a|s|^{−δ}` beyond `c`.
    Guide {
        delta: f64,
        amplitude: f64,
        c: f64,
        wall: WallCondition,
        sector: Sector,
    },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// `(−L, L)`.
    Symmetric,
    /// `(0, L)` with a Dirichlet wall at the axis.
    HalfLine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericConfig {
    pub domain: Domain,
    pub length: f64,
    pub h: f64,
    /// Spectral window `(lo, hi]` (guide studies count in `(lo, hi)`).
    pub window: [f64; 2],
    /// Bisection tolerance relative to `max(1, |lo|, |hi|)` of the window.
    pub relative_tolerance: f64,
    pub threshold_count: usize,
    /// Truncation sweep (accumulation over L, guide2d).
    pub lengths: Vec<f64>,
    /// Mode sweep (accumulation over k).
    pub modes: Vec<usize>,
    pub epsilon: f64,
    /// Which eigenvalue in the window (0-based, ascending) the decay study fits.
    pub state: usize,
    pub hx: f64,
    pub ny: usize,
    pub eigenpairs: usize,
    pub shift: f64,
    pub oracle_nx: usize,
    pub oracle_ny: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            domain: Domain::Symmetric,
            length: 20.0,
            h: 0.05,
            window: [-10.0, 0.0],
            relative_tolerance: 1e-10,
            threshold_count: 5,
            lengths: Vec::new(),
            modes: Vec::new(),
            epsilon: 0.05,
            state: 0,
            hx: 0.5,
            ny: 16,
            eigenpairs: 5,
            shift: -1.0,
            oracle_nx: 8,
            oracle_ny: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeformationConfig {
    /// Scaling parameters as `[re, im]` pairs.
    pub lambdas: Vec<[f64; 2]>,
    /// Conjugation exponents as `[re, im]` pairs.
    pub betas: Vec<[f64; 2]>,
    /// Onset `R` of the scaling profile.
    pub onset: f64,
    pub ramp_width: f64,
    pub sector_samples: usize,
    /// Persistence tolerance; `None` uses `10·(h² + e^{−2√gap·L})`.
    pub persistence_tolerance: Option<f64>,
    /// Smaller grid for the dense conjugation check; `None` reuses the main grid.
    pub conjugation_length: Option<f64>,
    pub conjugation_h: Option<f64>,
}

impl Default for DeformationConfig {
    fn default() -> Self {
        Self {
            lambdas: Vec::new(),
            betas: Vec::new(),
            onset: 2.0,
            ramp_width: 1.0,
            sector_samples: 400,
            persistence_tolerance: None,
            conjugation_length: None,
            conjugation_h: None,
        }
    }
}

impl DeformationConfig {
    pub fn lambda_values(&self) -> Vec<Complex64> {
        self.lambdas.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    pub fn beta_values(&self) -> Vec<Complex64> {
        self.betas.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub study: StudyKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub model: ModelConfig,
    #[serde(default)]
    pub numeric: NumericConfig,
    #[serde(default)]
    pub deformation: DeformationConfig,
}

fn positive(key: &str, v: f64) -> CliResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(key, format!("must be a positive number, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, path: &Path) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path)
    }

    /// Fully resolved configuration, defaults included.
    pub fn to_toml_string(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Serialize(e.to_string()))
    }

    /// Checks everything that can be checked without running a solver.
    pub fn validate(&self) -> CliResult<()> {
        let n = &self.numeric;
        positive("numeric.length", n.length)?;
        positive("numeric.h", n.h)?;
        positive("numeric.relative_tolerance", n.relative_tolerance)?;
        if !(n.window[0].is_finite() && n.window[1].is_finite() && n.window[0] < n.window[1]) {
            return Err(CliError::config("numeric.window", "needs finite lo < hi"));
        }
        for (i, l) in n.lengths.iter().enumerate() {
            positive(&format!("numeric.lengths[{i}]"), *l)?;
        }
        let d = &self.deformation;
        positive("deformation.onset", d.onset)?;
        positive("deformation.ramp_width", d.ramp_width)?;
        for (key, v) in [
            ("deformation.persistence_tolerance", d.persistence_tolerance),
            ("deformation.conjugation_length", d.conjugation_length),
            ("deformation.conjugation_h", d.conjugation_h),
        ] {
            if let Some(v) = v {
                positive(key, v)?;
            }
        }
        let guide = matches!(self.model, ModelConfig::Guide { .. });
        match self.study {
            StudyKind::Thresholds => {
                if matches!(self.model, ModelConfig::SquareWell { .. } | ModelConfig::Free) {
                    return Err(CliError::config("model.kind", "thresholds need a model with a cross-section"));
                }
                if n.threshold_count == 0 {
                    return Err(CliError::config("numeric.threshold_count", "must be at least 1"));
                }
            }
            StudyKind::Guide2d => {
                if !guide {
                    return Err(CliError::config("model.kind", "guide2d needs kind = \"guide\""));
                }
                positive("numeric.hx", n.hx)?;
                if n.ny < 1 {
                    return Err(CliError::config("numeric.ny", "must be at least 1"));
                }
                if n.lengths.is_empty() {
                    return Err(CliError::config("numeric.lengths", "guide2d needs at least one length"));
                }
                if n.oracle_nx * n.oracle_ny > 40 || n.oracle_nx * n.oracle_ny == 0 {
                    return Err(CliError::config(
                        "numeric.oracle_nx",
                        "oracle grid must have between 1 and 40 unknowns",
                    ));
                }
            }
            StudyKind::Accumulation => {
                if !matches!(self.model, ModelConfig::Separable { .. }) {
                    return Err(CliError::config("model.kind", "accumulation needs kind = \"separable\""));
                }
                if n.lengths.is_empty() == n.modes.is_empty() {
                    return Err(CliError::config(
                        "numeric.lengths",
                        "give exactly one of numeric.lengths (sweep over L) or numeric.modes (sweep over k)",
                    ));
                }
                positive("numeric.epsilon", n.epsilon)?;
            }
            StudyKind::Spectrum | StudyKind::Decay | StudyKind::Scaling => {
                if guide {
                    return Err(CliError::config("model.kind", "1D studies need a separable, square-well or free model"));
                }
                if self.study == StudyKind::Scaling && d.lambdas.is_empty() {
                    return Err(CliError::config("deformation.lambdas", "scaling needs at least one lambda"));
                }
            }
        }
        if let ModelConfig::Separable { mode, .. } = self.model {
            if mode == 0 {
                return Err(CliError::config("model.mode", "mode indices are 1-based"));
            }
        }
        Ok(())
    }
}
