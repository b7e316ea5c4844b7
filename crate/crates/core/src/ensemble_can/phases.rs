//! Split of `Z_{L,N}` by the number of sites holding more than `R` particles.

use serde::{Deserialize, Serialize};

use crate::ensemble_can::table::CanonicalTable;
use crate::error::{Result, ZrpError};
use crate::logspace::{ln_binom, log_sum_exp, LogAccumulator};

/// `log Z^m_{L,N}` for `m = 0..=M` and the phase probabilities `pi_{L,N}(X^m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDecomposition {
    pub l: usize,
    pub n: u64,
    pub r: u64,
    /// `log Z^m`, `-inf` for empty phases.
    pub log_z_m: Vec<f64>,
    /// `log sum_m Z^m`.
    pub log_z: f64,
    pub probabilities: Vec<f64>,
}

impl PhaseDecomposition {
    /// `M = ceil(N / R)` (or `N` when `R = 0`), the largest possible number of
    /// sites above the cutoff.
    pub fn max_phase(n: u64, r: u64) -> u64 {
        if r == 0 {
            n
        } else {
            n.div_ceil(r)
        }
    }

    /// `log(Z^a / Z^b)`.
    pub fn log_ratio(&self, a: usize, b: usize) -> f64 {
        self.log_z_m[a] - self.log_z_m[b]
    }

    pub fn probability(&self, m: usize) -> f64 {
        self.probabilities.get(m).copied().unwrap_or(0.0)
    }
}

/// Log-weight of the configurations in `X^m` whose `m` large sites hold `k`
/// particles in total, divided by `binom(L, m)`.
pub(crate) fn log_phase_term(table: &CanonicalTable, l: usize, n: u64, m: u64, k: u64) -> f64 {
    let r = table.cutoff();
    let model = table.model();
    let (ln_c0, ln_c1) = (model.c0().ln(), model.c1().ln());
    if m == 0 {
        return if k == 0 {
            table.log_count_bounded(l, n as usize) - n as f64 * ln_c0
        } else {
            f64::NEG_INFINITY
        };
    }
    let excess = k - m * r;
    -((m * r) as f64) * ln_c0 - ((n - k) as f64) * ln_c0 - (excess as f64) * ln_c1
        + table.log_count_bounded(l - m as usize, (n - k) as usize)
        + ln_binom(excess - 1, m - 1)
}

/// Exact decomposition `Z_{L,N} = sum_m Z^m`.
pub fn phase_decomposition(table: &CanonicalTable, n: u64) -> Result<PhaseDecomposition> {
    let l = table.lattice_size();
    if n as usize > table.n_max() {
        return Err(ZrpError::Domain(format!(
            "N = {n} exceeds table range {}",
            table.n_max()
        )));
    }
    let r = table.cutoff();
    let big_m = PhaseDecomposition::max_phase(n, r);
    let mut log_z_m = Vec::with_capacity(big_m as usize + 1);
    for m in 0..=big_m {
        if m as usize > l {
            log_z_m.push(f64::NEG_INFINITY);
            continue;
        }
        if m == 0 {
            log_z_m.push(log_phase_term(table, l, n, 0, 0));
            continue;
        }
        let mut acc = LogAccumulator::default();
        for k in m * (r + 1)..=n {
            acc.push(log_phase_term(table, l, n, m, k));
        }
        log_z_m.push(ln_binom(l as u64, m) + acc.value());
    }
    let log_z = log_sum_exp(&log_z_m);
    let probabilities = log_z_m.iter().map(|v| (v - log_z).exp()).collect();
    Ok(PhaseDecomposition {
        l,
        n,
        r,
        log_z_m,
        log_z,
        probabilities,
    })
}
