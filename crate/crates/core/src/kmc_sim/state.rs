//! Occupations plus the bookkeeping needed for O(1) Gillespie steps.

use rand::Rng;

use crate::ensemble_can::{CanonicalPhase, CanonicalSampler, CanonicalTable};
use crate::error::{Result, ZrpError};
use crate::model::RateModel;

const NONE: u32 = u32::MAX;

/// Lattice occupations with class lists, occupancy histogram and running maximum.
///
/// Sites with `1 <= eta <= R` (class A) jump at rate `c0`, sites with
/// `eta > R` (class B) at rate `c1`. Each class is a list with a position map so
/// that membership changes are swap-removes.
#[derive(Debug, Clone)]
pub struct SimState {
    eta: Vec<u64>,
    n: u64,
    r: u64,
    c0: f64,
    c1: f64,
    class_a: Vec<u32>,
    class_b: Vec<u32>,
    /// Index of each site in its class list, `NONE` when empty.
    slot: Vec<u32>,
    /// `hist[k]` = number of sites holding exactly `k` particles.
    hist: Vec<u32>,
    max: u64,
    pub time: f64,
    pub events: u64,
}

impl SimState {
    /// State with the given occupations; the cutoff is `model.cutoff(L, N)` and
    /// stays fixed for the run.
    pub fn from_occupations(eta: Vec<u64>, model: &RateModel) -> Result<Self> {
        let n: u64 = eta.iter().sum();
        let r = model.cutoff(eta.len(), n);
        Self::with_cutoff(eta, r, model)
    }

    pub fn with_cutoff(eta: Vec<u64>, r: u64, model: &RateModel) -> Result<Self> {
        let l = eta.len();
        if l < 2 || l > u32::MAX as usize {
            return Err(ZrpError::BadInitial(format!(
                "unsupported lattice size {l}"
            )));
        }
        let n: u64 = eta.iter().sum();
        if n == 0 {
            return Err(ZrpError::BadInitial("simulation needs N >= 1".into()));
        }
        if n > u32::MAX as u64 {
            return Err(ZrpError::BadInitial(format!("N = {n} too large")));
        }
        let mut s = Self {
            eta,
            n,
            r,
            c0: model.c0(),
            c1: model.c1(),
            class_a: Vec::new(),
            class_b: Vec::new(),
            slot: vec![NONE; l],
            hist: vec![0; n as usize + 1],
            max: 0,
            time: 0.0,
            events: 0,
        };
        s.rebuild();
        Ok(s)
    }

    /// Draw an initial state: `Fluid`/`Condensed` exactly from the conditioned
    /// canonical measure, `Unconditioned` from the full one.
    pub fn sample<R: Rng + ?Sized>(
        sampler: &CanonicalSampler<'_>,
        phase: CanonicalPhase,
        model: &RateModel,
        r: u64,
        rng: &mut R,
    ) -> Result<Self> {
        let eta = sampler.sample(phase, rng)?;
        Self::with_cutoff(eta, r, model)
    }

    /// Each particle on an independent uniform site.
    pub fn uniform<R: Rng + ?Sized>(
        l: usize,
        n: u64,
        model: &RateModel,
        rng: &mut R,
    ) -> Result<Self> {
        let mut eta = vec![0u64; l];
        for _ in 0..n {
            eta[rng.random_range(0..l)] += 1;
        }
        Self::from_occupations(eta, model)
    }

    fn rebuild(&mut self) {
        self.class_a.clear();
        self.class_b.clear();
        self.hist.iter_mut().for_each(|h| *h = 0);
        self.max = 0;
        for (x, &e) in self.eta.iter().enumerate() {
            self.hist[e as usize] += 1;
            self.max = self.max.max(e);
            self.slot[x] = if e == 0 {
                NONE
            } else if e <= self.r {
                self.class_a.push(x as u32);
                (self.class_a.len() - 1) as u32
            } else {
                self.class_b.push(x as u32);
                (self.class_b.len() - 1) as u32
            };
        }
    }

    #[inline]
    pub fn occupations(&self) -> &[u64] {
        &self.eta
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.eta.len()
    }

    #[inline]
    pub fn particles(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn cutoff(&self) -> u64 {
        self.r
    }

    /// `#{x : 1 <= eta_x <= R}`.
    #[inline]
    pub fn count_a(&self) -> usize {
        self.class_a.len()
    }

    /// `#{x : eta_x > R}`.
    #[inline]
    pub fn count_b(&self) -> usize {
        self.class_b.len()
    }

    #[inline]
    pub fn max_occupation(&self) -> u64 {
        self.max
    }

    /// Particles outside the most occupied site.
    #[inline]
    pub fn sigma_bg(&self) -> u64 {
        self.n - self.max
    }

    /// Number of sites holding exactly `k` particles.
    pub fn sites_with(&self, k: u64) -> u32 {
        self.hist.get(k as usize).copied().unwrap_or(0)
    }

    /// Total exit rate `c0 |A| + c1 |B|`.
    #[inline]
    pub fn total_rate(&self) -> f64 {
        self.c0 * self.class_a.len() as f64 + self.c1 * self.class_b.len() as f64
    }

    /// Pick the jumping site from `u` uniform on `[0, total_rate)`; also returns
    /// the leftover uniform fraction, independent of the choice.
    #[inline]
    pub fn pick_source(&self, u: f64) -> (usize, f64) {
        let rate_a = self.c0 * self.class_a.len() as f64;
        // rounding can put u at the top of the range; never pick from an empty class
        let (list, x) = if u < rate_a || self.class_b.is_empty() {
            (&self.class_a, u / self.c0)
        } else {
            (&self.class_b, (u - rate_a) / self.c1)
        };
        let i = (x as usize).min(list.len() - 1);
        (
            list[i] as usize,
            (x - i as f64).clamp(0.0, 1.0 - f64::EPSILON),
        )
    }

    #[inline]
    fn remove_from_class(&mut self, x: usize, in_a: bool) {
        let list = if in_a {
            &mut self.class_a
        } else {
            &mut self.class_b
        };
        let i = self.slot[x] as usize;
        let last = list.pop().unwrap();
        if last as usize != x {
            list[i] = last;
            self.slot[last as usize] = i as u32;
        }
        self.slot[x] = NONE;
    }

    #[inline]
    fn add_to_class(&mut self, x: usize, in_a: bool) {
        let list = if in_a {
            &mut self.class_a
        } else {
            &mut self.class_b
        };
        self.slot[x] = list.len() as u32;
        list.push(x as u32);
    }

    /// Move one particle from `from` to `to` and advance time by `dt`.
    #[inline]
    pub fn apply(&mut self, from: usize, to: usize, dt: f64) {
        let r = self.r;
        let old = self.eta[from];
        debug_assert!(old >= 1);
        self.eta[from] = old - 1;
        self.hist[old as usize] -= 1;
        self.hist[old as usize - 1] += 1;
        if old == 1 {
            self.remove_from_class(from, r >= 1);
        } else if old == r + 1 {
            self.remove_from_class(from, false);
            self.add_to_class(from, true);
        }
        if old == self.max && self.hist[old as usize] == 0 {
            self.max -= 1;
        }

        let before = self.eta[to];
        let now = before + 1;
        self.eta[to] = now;
        self.hist[before as usize] -= 1;
        self.hist[now as usize] += 1;
        if before == 0 {
            self.add_to_class(to, r >= 1);
        } else if before == r {
            self.remove_from_class(to, true);
            self.add_to_class(to, false);
        }
        if now > self.max {
            self.max = now;
        }
        self.time += dt;
        self.events += 1;
    }

    /// Recompute every derived quantity from the occupations and compare.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let total: u64 = self.eta.iter().sum();
        if total != self.n {
            return Err(format!("particle count {total} != {}", self.n));
        }
        let mut fresh = self.clone();
        fresh.rebuild();
        if fresh.hist != self.hist {
            return Err("occupancy histogram out of sync".into());
        }
        if fresh.max != self.max {
            return Err(format!("max {} != recomputed {}", self.max, fresh.max));
        }
        if fresh.class_a.len() != self.class_a.len() || fresh.class_b.len() != self.class_b.len() {
            return Err("class sizes out of sync".into());
        }
        let empty = self.hist[0] as usize;
        if self.class_a.len() + self.class_b.len() + empty != self.size() {
            return Err("A + B + empty != L".into());
        }
        for (list, in_a) in [(&self.class_a, true), (&self.class_b, false)] {
            for (i, &x) in list.iter().enumerate() {
                let e = self.eta[x as usize];
                if self.slot[x as usize] as usize != i || (e == 0) || ((e <= self.r) != in_a) {
                    return Err(format!("site {x} misfiled (eta = {e})"));
                }
            }
        }
        Ok(())
    }
}

/// How to draw the starting configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitPhase {
    /// Canonical measure conditioned on `max <= R`.
    Fluid,
    /// Canonical measure conditioned on exactly one site above `R`.
    Condensed,
    /// Independent uniform sites per particle.
    Uniform,
}

/// Initial state of `n` particles on `l` sites with the model's cutoff.
pub fn init_state<R: Rng + ?Sized>(
    l: usize,
    n: u64,
    model: &RateModel,
    phase: InitPhase,
    rng: &mut R,
) -> Result<SimState> {
    let canonical = match phase {
        InitPhase::Uniform => return SimState::uniform(l, n, model, rng),
        InitPhase::Fluid => CanonicalPhase::Fluid,
        InitPhase::Condensed => CanonicalPhase::Condensed,
    };
    let table = CanonicalTable::for_target(l, n, model)?;
    let sampler = CanonicalSampler::new(&table, n)?;
    SimState::sample(&sampler, canonical, model, table.cutoff(), rng)
}
