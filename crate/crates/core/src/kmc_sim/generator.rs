//! Exact generator on `X_{L,N}` for small systems, and the stationary oracle.

use rand::Rng;

use crate::ensemble_gc::log_weight;
use crate::error::{Result, ZrpError};
use crate::kmc_sim::dynamics::run_events;
use crate::kmc_sim::lattice::Lattice;
use crate::kmc_sim::state::SimState;
use crate::logspace::log_sum_exp;
use crate::model::RateModel;

/// Largest state space the dense generator will build.
pub const MAX_STATES: usize = 20_000;

/// All configurations of `n` particles on `l` sites, in lexicographic order.
pub fn enumerate_states(l: usize, n: u64) -> Vec<Vec<u64>> {
    fn rec(i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut vec![0; l], &mut out);
    out
}

/// Mixed-radix code of a configuration, `sum_x eta_x (N + 1)^x`.
fn code(eta: &[u64], base: u64) -> usize {
    eta.iter().rev().fold(0u64, |acc, &e| acc * base + e) as usize
}

/// Dense generator `Q` with its state list and the product-form measure.
#[derive(Debug, Clone)]
pub struct ExactChain {
    pub states: Vec<Vec<u64>>,
    /// Row-major `Q[i][j]`, rows summing to zero.
    pub q: Vec<f64>,
    pub pi: Vec<f64>,
    index_by_code: Vec<usize>,
    base: u64,
}

impl ExactChain {
    pub fn build(lattice: &Lattice, n: u64, r: u64, model: &RateModel) -> Result<Self> {
        let l = lattice.size();
        let states = enumerate_states(l, n);
        let k = states.len();
        let base = n + 1;
        let codes = (base as f64).powi(l as i32);
        if k > MAX_STATES || codes > 1e8 {
            return Err(ZrpError::Resource(format!(
                "{k} states on {l} sites exceed the exact-generator limit"
            )));
        }
        let mut index_by_code = vec![usize::MAX; codes as usize];
        for (i, s) in states.iter().enumerate() {
            index_by_code[code(s, base)] = i;
        }
        let mut q = vec![0.0; k * k];
        for (i, s) in states.iter().enumerate() {
            for x in 0..l {
                if s[x] == 0 {
                    continue;
                }
                let g = model.rate(s[x], r);
                for (y, p) in lattice.neighbours(x) {
                    let mut t = s.clone();
                    t[x] -= 1;
                    t[y] += 1;
                    let j = index_by_code[code(&t, base)];
                    q[i * k + j] += g * p;
                    q[i * k + i] -= g * p;
                }
            }
        }
        let logw: Vec<f64> = states
            .iter()
            .map(|s| s.iter().map(|&e| log_weight(e, r, model)).sum())
            .collect();
        let lz = log_sum_exp(&logw);
        let pi = logw.iter().map(|w| (w - lz).exp()).collect();
        Ok(Self {
            states,
            q,
            pi,
            index_by_code,
            base,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, eta: &[u64]) -> usize {
        self.index_by_code[code(eta, self.base)]
    }

    /// `max_j |(pi Q)_j|`.
    pub fn stationarity_residual(&self) -> f64 {
        let k = self.len();
        (0..k)
            .map(|j| {
                (0..k)
                    .map(|i| self.pi[i] * self.q[i * k + j])
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} |pi_i Q_ij - pi_j Q_ji|`.
    pub fn detailed_balance_gap(&self) -> f64 {
        let k = self.len();
        let mut worst = 0.0f64;
        for i in 0..k {
            for j in i + 1..k {
                let d = self.pi[i] * self.q[i * k + j] - self.pi[j] * self.q[j * k + i];
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    /// Time-weighted occupation of each state over `events` jumps from `start`.
    pub fn empirical_distribution<R: Rng + ?Sized>(
        &self,
        lattice: &Lattice,
        start: SimState,
        events: u64,
        rng: &mut R,
    ) -> Vec<f64> {
        let mut state = start;
        let mut time_in = vec![0.0; self.len()];
        run_events(&mut state, lattice, events, rng, |s, dt| {
            time_in[self.index_of(s.occupations())] += dt;
        });
        let total: f64 = time_in.iter().sum();
        time_in.iter().map(|t| t / total).collect()
    }
}
