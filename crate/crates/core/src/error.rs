use thiserror::Error;

/// Errors raised by the ensemble computations and the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZrpError {
    /// Rate parameters violate `c0 > c1 > 0`, `a >= 0` (and `a < 1` in particle mode).
    #[error("invalid rate model: {0}")]
    InvalidModel(String),

    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A table or state space would exceed the configured size budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The requested phase contains no configurations (e.g. condensed with `N <= R`).
    #[error("empty phase: {0}")]
    EmptyPhase(String),

    /// A hitting-time run was started from a state outside the phase it should exit.
    #[error("bad initial state: {0}")]
    BadInitial(String),

    /// Malformed lattice or jump kernel.
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    /// Not enough data for a regression or summary statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("cache file: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, ZrpError>;
