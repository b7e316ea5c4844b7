use serde::{Deserialize, Serialize};

use crate::error::{Result, ZrpError};

/// How the cutoff `R` scales with system size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffMode {
    /// `R = floor(a * L)`.
    LatticeDep,
    /// `R = floor(a * N)`, fixed during a run because `N` is conserved.
    ParticleDep,
}

/// Jump rates `g_R(k) = c0` for `1 <= k <= R`, `c1` for `k > R`, `g(0) = 0`.
///
/// This is the single source of truth for rates and stationary weights; every
/// module takes one of these instead of raw parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateModel {
    c0: f64,
    c1: f64,
    a: f64,
    mode: CutoffMode,
    explicit_r: Option<u64>,
}

impl RateModel {
    pub fn new(c0: f64, c1: f64, a: f64, mode: CutoffMode) -> Result<Self> {
        if !(c0.is_finite() && c1.is_finite() && c1 > 0.0 && c0 > c1) {
            return Err(ZrpError::InvalidModel(format!(
                "need c0 > c1 > 0, got c0 = {c0}, c1 = {c1}"
            )));
        }
        if !(a.is_finite() && a >= 0.0) {
            return Err(ZrpError::InvalidModel(format!("need a >= 0, got a = {a}")));
        }
        if mode == CutoffMode::ParticleDep && a >= 1.0 {
            return Err(ZrpError::InvalidModel(format!(
                "particle-dependent cutoff needs a in [0, 1), got a = {a}"
            )));
        }
        Ok(Self {
            c0,
            c1,
            a,
            mode,
            explicit_r: None,
        })
    }

    pub fn lattice(c0: f64, c1: f64, a: f64) -> Result<Self> {
        Self::new(c0, c1, a, CutoffMode::LatticeDep)
    }

    pub fn particle(c0: f64, c1: f64, a: f64) -> Result<Self> {
        Self::new(c0, c1, a, CutoffMode::ParticleDep)
    }

    /// Pin the cutoff to a fixed value regardless of `L` and `N`.
    pub fn with_cutoff(mut self, r: u64) -> Self {
        self.explicit_r = Some(r);
        self
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn mode(&self) -> CutoffMode {
        self.mode
    }

    pub fn explicit_cutoff(&self) -> Option<u64> {
        self.explicit_r
    }

    /// `R` for a lattice of `l` sites holding `n` particles.
    pub fn cutoff(&self, l: usize, n: u64) -> u64 {
        if let Some(r) = self.explicit_r {
            return r;
        }
        let scale = match self.mode {
            CutoffMode::LatticeDep => l as f64,
            CutoffMode::ParticleDep => n as f64,
        };
        (self.a * scale).floor() as u64
    }

    /// Exit rate of a site holding `k` particles.
    #[inline]
    pub fn rate(&self, k: u64, r: u64) -> f64 {
        if k == 0 {
            0.0
        } else if k <= r {
            self.c0
        } else {
            self.c1
        }
    }

    /// `log(c0 / c1) > 0`.
    pub fn log_rate_ratio(&self) -> f64 {
        (self.c0 / self.c1).ln()
    }

    /// The cutoff fraction per unit of total density: `a` for lattice mode and
    /// `a * rho` for particle mode, i.e. the limit of `R / L` at density `rho`.
    pub fn effective_a(&self, rho: f64) -> f64 {
        match self.mode {
            CutoffMode::LatticeDep => self.a,
            CutoffMode::ParticleDep => self.a * rho,
        }
    }
}
