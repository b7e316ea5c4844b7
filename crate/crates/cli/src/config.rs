//! TOML experiment configuration.
//!
//! ```toml
//! seed = 7
//!
//! [model]
//! c0 = 2.0
//! c1 = 1.0
//! a = 0.5
//! mode = "lattice"        # or "particle"
//!
//! [experiment]
//! replicas = 200
//! t_max = 1e9
//!
//! [grid]
//! rho = [1.2, 1.8, 3.0]
//! L = { start = 20, stop = 52, step = 8 }
//! ```

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use zrp_core::kmc_sim::{Kernel, Lattice, Topology};
use zrp_core::{CutoffMode, RateModel};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Lattice,
    Particle,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub c0: f64,
    pub c1: f64,
    pub a: f64,
    pub mode: Mode,
    /// Fixed `R` overriding `floor(a L)` / `floor(a N)`.
    pub cutoff: Option<u64>,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            c0: 2.0,
            c1: 1.0,
            a: 0.5,
            mode: Mode::Lattice,
            cutoff: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KernelChoice {
    #[default]
    Symmetric,
    Asymmetric,
    /// Uniform over offsets `1..=range` in both directions.
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StartPhase {
    #[default]
    Fluid,
    Condensed,
    Uniform,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    pub replicas: u32,
    pub t_max: f64,
    pub batches: u32,
    pub events: u64,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub rho: Option<f64>,
    pub phase: StartPhase,
    pub kernel: KernelChoice,
    pub range: usize,
    pub duration: f64,
    pub sample_dt: f64,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            replicas: 200,
            t_max: 1e9,
            batches: 100,
            events: 10_000_000,
            l: None,
            n: None,
            rho: None,
            phase: StartPhase::Fluid,
            kernel: KernelChoice::Symmetric,
            range: 1,
            duration: 1000.0,
            sample_dt: 1.0,
        }
    }
}

/// Explicit list, single value, or inclusive arithmetic range.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Single(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Grid {
    pub fn values(&self, field: &str) -> Result<Vec<f64>> {
        let v = match self {
            Grid::Single(x) => vec![*x],
            Grid::List(xs) => xs.clone(),
            Grid::Range { start, stop, step } => {
                if step.is_nan() || *step <= 0.0 || stop < start {
                    return Err(CliError::Config(format!(
                        "grid.{field}: need step > 0 and stop >= start"
                    )));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| grid_point(*start, *step, i)).collect()
            }
        };
        if v.is_empty() {
            return Err(CliError::Config(format!("grid.{field}: must be nonempty")));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Config(format!(
                "grid.{field}: values must be finite"
            )));
        }
        Ok(v)
    }
}

/// `start + i step`, rounded to 12 decimals so that decimal steps print cleanly.
pub fn grid_point(start: f64, step: f64, i: usize) -> f64 {
    ((start + i as f64 * step) * 1e12).round() / 1e12
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub rho: Option<Grid>,
    #[serde(rename = "L")]
    pub l: Option<Grid>,
    pub phi: Option<Grid>,
    pub rho_bg: Option<Grid>,
    pub a: Option<Grid>,
    #[serde(rename = "R")]
    pub r: Option<Grid>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    #[serde(default)]
    model: ModelSection,
    #[serde(default)]
    experiment: ExperimentSection,
    #[serde(default)]
    grid: GridSection,
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub hash: String,
    pub seed: u64,
    pub model: ModelSection,
    pub experiment: ExperimentSection,
    pub grid: GridSection,
}

impl Config {
    /// Parse `path` (or the defaults when `None`); `seed` overrides the file's seed.
    pub fn load(path: Option<&Path>, seed: Option<u64>) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::parse(&text, seed)
    }

    pub fn parse(text: &str, seed: Option<u64>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let seed = seed.or(raw.seed).ok_or_else(|| {
            CliError::Config("no seed: set `seed` in the config or pass --seed".into())
        })?;
        let cfg = Self {
            hash: format!("{:x}", Sha256::digest(text.as_bytes())),
            seed,
            model: raw.model,
            experiment: raw.experiment,
            grid: raw.grid,
        };
        cfg.rate_model()?;
        let e = &cfg.experiment;
        if e.t_max.is_nan()
            || e.t_max <= 0.0
            || e.sample_dt.is_nan()
            || e.sample_dt <= 0.0
            || e.duration.is_nan()
            || e.duration < 0.0
        {
            return Err(CliError::Config(
                "experiment: t_max and sample_dt must be > 0, duration >= 0".into(),
            ));
        }
        if e.replicas == 0 || e.batches == 0 {
            return Err(CliError::Config(
                "experiment: replicas and batches must be >= 1".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn rate_model(&self) -> Result<RateModel> {
        self.model_with_a(self.model.a)
    }

    pub fn model_with_a(&self, a: f64) -> Result<RateModel> {
        let mode = match self.model.mode {
            Mode::Lattice => CutoffMode::LatticeDep,
            Mode::Particle => CutoffMode::ParticleDep,
        };
        let m = RateModel::new(self.model.c0, self.model.c1, a, mode)
            .map_err(|e| CliError::Config(format!("model: {e}")))?;
        Ok(match self.model.cutoff {
            Some(r) => m.with_cutoff(r),
            None => m,
        })
    }

    /// Real-valued grid `name`, or `default` when absent.
    pub fn grid(&self, name: &str, default: Vec<f64>) -> Result<Vec<f64>> {
        let g = match name {
            "rho" => &self.grid.rho,
            "L" => &self.grid.l,
            "phi" => &self.grid.phi,
            "rho_bg" => &self.grid.rho_bg,
            "a" => &self.grid.a,
            "R" => &self.grid.r,
            _ => unreachable!("unknown grid {name}"),
        };
        match g {
            Some(g) => g.values(name),
            None => Ok(default),
        }
    }

    /// Integer grid (`L`, `R`), each value a nonnegative integer at least `min`.
    pub fn int_grid(&self, name: &str, default: &[u64], min: u64) -> Result<Vec<u64>> {
        let xs = self.grid(name, default.iter().map(|&x| x as f64).collect())?;
        xs.iter()
            .map(|&x| {
                if x.fract() != 0.0 || x < min as f64 {
                    Err(CliError::Config(format!(
                        "grid.{name}: {x} is not an integer >= {min}"
                    )))
                } else {
                    Ok(x as u64)
                }
            })
            .collect()
    }

    pub fn lattice(&self, l: usize) -> Result<Lattice> {
        let kernel = match self.experiment.kernel {
            KernelChoice::Symmetric => Kernel::SymmetricNearest,
            KernelChoice::Asymmetric => Kernel::TotallyAsymmetric,
            KernelChoice::Range => Kernel::SymmetricRange {
                range: self.experiment.range as i64,
            },
        };
        Lattice::new(Topology::Ring { size: l }, kernel)
            .map_err(|e| CliError::Config(format!("experiment.kernel: {e}")))
    }
}
