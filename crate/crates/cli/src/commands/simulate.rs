//! Raw trajectory of the macroscopic observables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zrp_core::kmc_sim::{init_state, trajectory_observables, InitPhase};

use crate::config::{Config, StartPhase};
use crate::error::Result;
use crate::output::{num, Output};
use crate::svg::{Plot, Series, Style};

/// Density used when neither `N` nor `rho` is configured.
const DEFAULT_RHO: f64 = 2.5;

pub fn run(cfg: &Config, out: &Output) -> Result<()> {
    let e = &cfg.experiment;
    let l = e.l.unwrap_or(100);
    let n = match (e.n, e.rho) {
        (Some(n), _) => n,
        (None, Some(rho)) => (rho * l as f64).round() as u64,
        (None, None) => (DEFAULT_RHO * l as f64).round() as u64,
    };
    let m = cfg.rate_model()?;
    let lattice = cfg.lattice(l)?;
    let phase = match e.phase {
        StartPhase::Fluid => InitPhase::Fluid,
        StartPhase::Condensed => InitPhase::Condensed,
        StartPhase::Uniform => InitPhase::Uniform,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = init_state(l, n, &m, phase, &mut rng)?;
    let tr = trajectory_observables(&mut state, &lattice, e.duration, e.sample_dt, &mut rng)?;
    let rows: Vec<Vec<String>> = (0..tr.len())
        .map(|i| {
            vec![
                num(tr.t[i]),
                num(tr.sigma_bg_per_l[i]),
                num(tr.max_per_l[i]),
                tr.a[i].to_string(),
                tr.b[i].to_string(),
            ]
        })
        .collect();
    let notes = vec![format!(
        "L={l} N={n} R={} events={}",
        state.cutoff(),
        state.events
    )];
    out.csv(
        "trajectory.csv",
        &notes,
        &["t", "sigma_bg_per_L", "max_per_L", "A", "B"],
        &rows,
    )?;
    println!(
        "{} events, time-averaged background density {:.4}",
        state.events,
        tr.mean_sigma_bg_per_l()
    );
    let pts = |ys: &[f64]| {
        tr.t.iter()
            .copied()
            .zip(ys.iter().copied())
            .collect::<Vec<_>>()
    };
    out.figure(
        "trajectory.svg",
        &Plot::new("Trajectory", "t", "density")
            .with(Series::new(
                "Sigma_bg / L",
                pts(&tr.sigma_bg_per_l),
                Style::Line,
            ))
            .with(Series::new("max / L", pts(&tr.max_per_l), Style::Line)),
    )
}
