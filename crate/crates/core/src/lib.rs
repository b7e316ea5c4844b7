//! Exact ensembles, large-deviation asymptotics and kinetic Monte Carlo for a
//! zero-range process whose jump rate drops from `c0` to `c1` once a site holds
//! more than `R` particles.

pub mod ensemble_can;
pub mod ensemble_gc;
pub mod error;
pub mod kmc_sim;
pub mod logspace;
pub mod model;
pub mod record;
pub mod stats;

pub use error::{Result, ZrpError};
pub use model::{CutoffMode, RateModel};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/grand-canonical.md")]
    mod grand_canonical {}
    #[doc = include_str!("../../../book/src/canonical.md")]
    mod canonical {}
    #[doc = include_str!("../../../book/src/large-deviations.md")]
    mod large_deviations {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
