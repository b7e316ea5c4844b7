//! Gillespie stepping and first-exit times.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZrpError};
use crate::kmc_sim::lattice::Lattice;
use crate::kmc_sim::state::SimState;

/// Events between full bookkeeping recomputations.
pub const CONSISTENCY_INTERVAL: u64 = 1_000_000;

/// One particle jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    /// Time at which the jump happens.
    pub time: f64,
    pub source: u32,
    pub dest: u32,
}

/// Draw the next jump without applying it: `(waiting time, source, destination)`.
#[inline]
pub fn next_event<R: Rng + ?Sized>(
    state: &SimState,
    lattice: &Lattice,
    rng: &mut R,
) -> (f64, usize, usize) {
    let rate = state.total_rate();
    let u: f64 = rng.random::<f64>() * rate;
    let (src, frac) = state.pick_source(u);
    let dest = lattice.destination(src, frac);
    let e: f64 = Exp1.sample(rng);
    (e / rate, src, dest)
}

/// Advance by one event.
#[inline]
pub fn step<R: Rng + ?Sized>(state: &mut SimState, lattice: &Lattice, rng: &mut R) -> Event {
    let (dt, src, dest) = next_event(state, lattice, rng);
    state.apply(src, dest, dt);
    Event {
        time: state.time,
        source: src as u32,
        dest: dest as u32,
    }
}

/// Which phase change to wait for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HitTarget {
    /// First time some site exceeds `R`, starting from `max <= R`.
    FluidExit,
    /// First time every site is at most `R`, starting from `max > R`.
    CondExit,
}

/// One first-exit measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HittingTime {
    /// Exit time, or `t_max` when censored.
    pub time: f64,
    pub censored: bool,
    pub events: u64,
}

/// Fluid and condensed exit times of one replica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HittingTimes {
    pub tau_fluid: Option<HittingTime>,
    pub tau_cond: Option<HittingTime>,
}

fn periodic_check(state: &SimState) {
    if state.events.is_multiple_of(CONSISTENCY_INTERVAL) {
        if let Err(e) = state.check_consistency() {
            panic!(
                "simulation bookkeeping diverged after {} events: {e}",
                state.events
            );
        }
    }
}

/// Run until the max-occupation condition flips or `t_max` of simulated time
/// passes (measured from the state's current time).
pub fn run_to_hit<R: Rng + ?Sized>(
    state: &mut SimState,
    lattice: &Lattice,
    target: HitTarget,
    t_max: f64,
    rng: &mut R,
) -> Result<HittingTime> {
    if lattice.size() != state.size() {
        return Err(ZrpError::BadInitial(format!(
            "state has {} sites, lattice {}",
            state.size(),
            lattice.size()
        )));
    }
    let r = state.cutoff();
    let start_ok = match target {
        HitTarget::FluidExit => state.max_occupation() <= r,
        HitTarget::CondExit => state.max_occupation() > r,
    };
    if !start_ok {
        return Err(ZrpError::BadInitial(format!(
            "{target:?} needs the opposite phase initially (max = {}, R = {r})",
            state.max_occupation()
        )));
    }
    let (t0, e0) = (state.time, state.events);
    let deadline = t0 + t_max;
    loop {
        let (dt, src, dest) = next_event(state, lattice, rng);
        if state.time + dt > deadline {
            state.time = deadline;
            return Ok(HittingTime {
                time: t_max,
                censored: true,
                events: state.events - e0,
            });
        }
        state.apply(src, dest, dt);
        periodic_check(state);
        let hit = match target {
            HitTarget::FluidExit => state.max_occupation() > r,
            HitTarget::CondExit => state.max_occupation() <= r,
        };
        if hit {
            return Ok(HittingTime {
                time: state.time - t0,
                censored: false,
                events: state.events - e0,
            });
        }
    }
}

/// Run for a fixed number of events, calling `visit` with the state and its
/// holding time before each jump.
pub fn run_events<R: Rng + ?Sized, F: FnMut(&SimState, f64)>(
    state: &mut SimState,
    lattice: &Lattice,
    events: u64,
    rng: &mut R,
    mut visit: F,
) {
    for _ in 0..events {
        let (dt, src, dest) = next_event(state, lattice, rng);
        visit(state, dt);
        state.apply(src, dest, dt);
        periodic_check(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RateModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_particle_on_two_sites() {
        let m = RateModel::lattice(2.0, 1.0, 0.5).unwrap();
        let lat = Lattice::ring(2).unwrap();
        let mut s = SimState::from_occupations(vec![1, 0], &m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 200_000;
        let mut where_ = 0;
        for _ in 0..n {
            let e = step(&mut s, &lat, &mut rng);
            assert_eq!(e.source as usize, where_);
            where_ = 1 - where_;
            assert_eq!(e.dest as usize, where_);
        }
        let mean_dt = s.time / n as f64;
        assert!((mean_dt - 0.5).abs() < 0.005, "{mean_dt}");
    }

    #[test]
    fn below_cutoff_rate_is_c0_times_a() {
        let m = RateModel::lattice(2.0, 1.0, 0.5).unwrap().with_cutoff(5);
        let s = SimState::from_occupations(vec![1, 2, 0, 5, 3], &m).unwrap();
        assert_eq!(s.total_rate(), 2.0 * 4.0);
    }

    #[test]
    fn conservation_and_reproducibility() {
        let m = RateModel::lattice(2.0, 1.0, 0.5).unwrap();
        let lat = Lattice::ring(12).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = SimState::uniform(12, 30, &m, &mut rng).unwrap();
            let events: Vec<Event> = (0..5000).map(|_| step(&mut s, &lat, &mut rng)).collect();
            assert_eq!(s.occupations().iter().sum::<u64>(), 30);
            s.check_consistency().unwrap();
            events
        };
        assert_eq!(run(4), run(4));
        assert_ne!(run(4), run(5));
    }

    #[test]
    fn hitting_preconditions_and_censoring() {
        let m = RateModel::lattice(2.0, 1.0, 0.5).unwrap().with_cutoff(3);
        let lat = Lattice::ring(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = SimState::from_occupations(vec![5, 0, 0, 0, 0, 0], &m).unwrap();
        assert!(matches!(
            run_to_hit(&mut s, &lat, HitTarget::FluidExit, 10.0, &mut rng),
            Err(ZrpError::BadInitial(_))
        ));
        let h = run_to_hit(&mut s, &lat, HitTarget::CondExit, 1e6, &mut rng).unwrap();
        assert!(!h.censored && s.max_occupation() <= 3);
        // 5 particles, R = 3: a site above 3 reappears, but not within a tiny window
        let h = run_to_hit(&mut s, &lat, HitTarget::FluidExit, 1e-9, &mut rng).unwrap();
        assert!(h.censored && h.time == 1e-9);
    }
}
