//! Time series of macroscopic observables on a regular time grid.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZrpError};
use crate::kmc_sim::dynamics::next_event;
use crate::kmc_sim::lattice::Lattice;
use crate::kmc_sim::state::SimState;

/// Observables sampled at `t = t0, t0 + dt, ...` (piecewise-constant in between events).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub sigma_bg_per_l: Vec<f64>,
    pub max_per_l: Vec<f64>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn record(&mut self, t: f64, s: &SimState) {
        let l = s.size() as f64;
        self.t.push(t);
        self.sigma_bg_per_l.push(s.sigma_bg() as f64 / l);
        self.max_per_l.push(s.max_occupation() as f64 / l);
        self.a.push(s.count_a());
        self.b.push(s.count_b());
    }

    /// Time average of `Sigma_bg / L` over the recorded samples.
    pub fn mean_sigma_bg_per_l(&self) -> f64 {
        self.sigma_bg_per_l.iter().sum::<f64>() / self.len().max(1) as f64
    }

    /// CSV with columns `t,sigma_bg_per_L,max_per_L,A,B`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,sigma_bg_per_L,max_per_L,A,B\n");
        for i in 0..self.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.t[i], self.sigma_bg_per_l[i], self.max_per_l[i], self.a[i], self.b[i]
            ));
        }
        out
    }
}

/// Simulate for `duration` and sample every `sample_dt`; `floor(duration / sample_dt) + 1` samples.
pub fn trajectory_observables<R: Rng + ?Sized>(
    state: &mut SimState,
    lattice: &Lattice,
    duration: f64,
    sample_dt: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    if sample_dt.is_nan() || sample_dt <= 0.0 || duration.is_nan() || duration < 0.0 {
        return Err(ZrpError::Domain(format!(
            "need sample_dt > 0 and duration >= 0, got {sample_dt}, {duration}"
        )));
    }
    let samples = (duration / sample_dt).floor() as u64 + 1;
    let t0 = state.time;
    let mut out = Trajectory::default();
    let mut next = 0u64;
    while next < samples {
        let (dt, src, dest) = next_event(state, lattice, rng);
        let jump_at = state.time + dt;
        while next < samples && t0 + next as f64 * sample_dt < jump_at {
            out.record(next as f64 * sample_dt, state);
            next += 1;
        }
        state.apply(src, dest, dt);
    }
    Ok(out)
}
