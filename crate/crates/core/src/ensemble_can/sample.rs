//! Exact sampling from the canonical measure and its phase-conditioned parts.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble_can::phases::{log_phase_term, phase_decomposition, PhaseDecomposition};
use crate::ensemble_can::table::CanonicalTable;
use crate::error::{Result, ZrpError};

/// Which part of `X_{L,N}` to sample from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalPhase {
    /// `X^0`: every site at most `R` (uniform, since all weights equal `c0^-N`).
    Fluid,
    /// `X^1`: exactly one site above `R`.
    Condensed,
    /// The full canonical measure.
    Unconditioned,
}

/// Weights over the total `k` held by the `m` large sites, `k >= m (R + 1)`.
#[derive(Debug, Clone)]
struct ExcessLaw {
    first_k: u64,
    index: WeightedIndex<f64>,
}

impl ExcessLaw {
    fn new(table: &CanonicalTable, l: usize, n: u64, m: u64) -> Option<Self> {
        let first_k = m * (table.cutoff() + 1);
        if first_k > n {
            return None;
        }
        let logs: Vec<f64> = (first_k..=n)
            .map(|k| log_phase_term(table, l, n, m, k))
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return None;
        }
        let w: Vec<f64> = logs.iter().map(|v| (v - max).exp()).collect();
        WeightedIndex::new(w)
            .ok()
            .map(|index| Self { first_k, index })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.first_k + self.index.sample(rng) as u64
    }
}

/// Reusable sampler for one `(L, N)` on a table covering it.
#[derive(Debug, Clone)]
pub struct CanonicalSampler<'a> {
    table: &'a CanonicalTable,
    n: u64,
    phases: PhaseDecomposition,
    phase_index: WeightedIndex<f64>,
    condensed: Option<ExcessLaw>,
}

impl<'a> CanonicalSampler<'a> {
    pub fn new(table: &'a CanonicalTable, n: u64) -> Result<Self> {
        let phases = phase_decomposition(table, n)?;
        let phase_index = WeightedIndex::new(phases.probabilities.clone())
            .map_err(|e| ZrpError::Domain(format!("phase weights: {e}")))?;
        let condensed = ExcessLaw::new(table, table.lattice_size(), n, 1);
        Ok(Self {
            table,
            n,
            phases,
            phase_index,
            condensed,
        })
    }

    pub fn phases(&self) -> &PhaseDecomposition {
        &self.phases
    }

    pub fn lattice_size(&self) -> usize {
        self.table.lattice_size()
    }

    /// Draw one configuration (site occupations in lattice order).
    pub fn sample<R: Rng + ?Sized>(&self, phase: CanonicalPhase, rng: &mut R) -> Result<Vec<u64>> {
        let mut eta = vec![0u64; self.lattice_size()];
        self.sample_into(phase, &mut eta, rng)?;
        Ok(eta)
    }

    pub fn sample_into<R: Rng + ?Sized>(
        &self,
        phase: CanonicalPhase,
        eta: &mut [u64],
        rng: &mut R,
    ) -> Result<()> {
        let l = self.lattice_size();
        assert_eq!(eta.len(), l, "output slice must have one entry per site");
        match phase {
            CanonicalPhase::Fluid => {
                if self.table.log_count_bounded(l, self.n as usize) == f64::NEG_INFINITY {
                    return Err(ZrpError::EmptyPhase(format!(
                        "no configuration of {} particles on {l} sites has all sites <= {}",
                        self.n,
                        self.table.cutoff()
                    )));
                }
                self.fill_fluid(eta, self.n, rng);
                Ok(())
            }
            CanonicalPhase::Condensed => {
                let law = self.condensed.as_ref().ok_or_else(|| {
                    ZrpError::EmptyPhase(format!(
                        "no configuration of {} particles on {l} sites has exactly one site > {}",
                        self.n,
                        self.table.cutoff()
                    ))
                })?;
                let k = law.sample(rng);
                let site = rng.random_range(0..l);
                self.place_large(eta, &[site], k, rng);
                Ok(())
            }
            CanonicalPhase::Unconditioned => {
                let m = self.phase_index.sample(rng) as u64;
                if m == 0 {
                    self.fill_fluid(eta, self.n, rng);
                    return Ok(());
                }
                let law = if m == 1 {
                    self.condensed.clone()
                } else {
                    ExcessLaw::new(self.table, l, self.n, m)
                }
                .expect("phase with positive probability has a weight law");
                let k = law.sample(rng);
                let sites = index::sample(rng, l, m as usize).into_vec();
                self.place_large(eta, &sites, k, rng);
                Ok(())
            }
        }
    }

    /// Put `k` particles on `sites`, each above `R`, uniformly over the ways to
    /// split the excess; fluid-fill the remaining sites with `N - k`.
    fn place_large<R: Rng + ?Sized>(&self, eta: &mut [u64], sites: &[usize], k: u64, rng: &mut R) {
        let r = self.table.cutoff();
        let m = sites.len();
        let excess = k - m as u64 * r;
        // m positive parts of `excess`: m - 1 distinct cuts in 1..excess
        let mut cuts: Vec<u64> = if m > 1 {
            index::sample(rng, (excess - 1) as usize, m - 1)
                .into_iter()
                .map(|c| c as u64 + 1)
                .collect()
        } else {
            Vec::new()
        };
        cuts.sort_unstable();
        cuts.push(excess);
        let mut prev = 0;
        let mut big = vec![None; eta.len()];
        for (&s, &c) in sites.iter().zip(&cuts) {
            big[s] = Some(r + c - prev);
            prev = c;
        }
        let mut background = vec![0u64; eta.len() - m];
        self.fill_fluid(&mut background, self.n - k, rng);
        let mut bg = background.into_iter();
        for (x, slot) in eta.iter_mut().zip(big) {
            *x = match slot {
                Some(v) => v,
                None => bg.next().unwrap(),
            };
        }
    }

    /// Uniform element of `X^0_{len, n}` by sequential conditioning.
    fn fill_fluid<R: Rng + ?Sized>(&self, eta: &mut [u64], n: u64, rng: &mut R) {
        let r = self.table.cutoff();
        let mut left = n;
        let sites = eta.len();
        for (i, x) in eta.iter_mut().enumerate() {
            let rest = sites - i;
            if rest == 1 {
                *x = left;
                break;
            }
            let total = self.table.log_count_bounded(rest, left as usize);
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = None;
            let mut last_ok = 0;
            for k in 0..=left.min(r) {
                let c = self.table.log_count_bounded(rest - 1, (left - k) as usize);
                if c == f64::NEG_INFINITY {
                    continue;
                }
                last_ok = k;
                acc += (c - total).exp();
                if u < acc {
                    pick = Some(k);
                    break;
                }
            }
            let k = pick.unwrap_or(last_ok);
            *x = k;
            left -= k;
        }
    }
}

/// One draw from the canonical measure on `L = table.lattice_size()` sites with `n` particles.
pub fn sample_canonical<R: Rng + ?Sized>(
    table: &CanonicalTable,
    n: u64,
    phase: CanonicalPhase,
    rng: &mut R,
) -> Result<Vec<u64>> {
    CanonicalSampler::new(table, n)?.sample(phase, rng)
}
