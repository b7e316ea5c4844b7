//! Exact finite-size canonical ensembles and their thermodynamic limits.

pub mod counts;
pub mod exact;
pub mod phases;
pub mod sample;
pub mod table;
pub mod thermo;

pub use counts::{chi, count_bounded, count_compositions, BoundedCounts};
pub use phases::{phase_decomposition, PhaseDecomposition};
pub use sample::{sample_canonical, CanonicalPhase, CanonicalSampler};
pub use table::{CanonicalTable, TableCache, DEFAULT_CELL_BUDGET};
pub use thermo::{
    lifetime_exponents, rate_function, relative_entropy_specific, rho_meta, rho_trans, s_can,
    LifetimeExponents, RateFunctionCurve,
};
