//! Continuous-time kinetic Monte Carlo of the process on rings and tori.

pub mod dynamics;
pub mod events;
pub mod generator;
pub mod lattice;
pub mod observe;
pub mod state;
pub mod sweep;

pub use dynamics::{
    next_event, run_events, run_to_hit, step, Event, HitTarget, HittingTime, HittingTimes,
};
pub use events::{read_events, EventWriter};
pub use generator::{enumerate_states, ExactChain};
pub use lattice::{Kernel, Lattice, Topology};
pub use observe::{trajectory_observables, Trajectory};
pub use state::{init_state, InitPhase, SimState};
pub use sweep::{lifetime_sweep, particles_for, replica_rng, LifetimeSample, SweepSpec};
