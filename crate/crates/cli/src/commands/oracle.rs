//! Exact stationarity check on a small lattice.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zrp_core::kmc_sim::{ExactChain, SimState};
use zrp_core::stats::total_variation;

use crate::config::{Config, KernelChoice};
use crate::error::{CliError, Result};
use crate::output::{num, Output};

pub const MAX_SITES: usize = 6;
pub const MAX_PARTICLES: u64 = 8;

pub fn run(cfg: &Config, out: &Output) -> Result<()> {
    let e = &cfg.experiment;
    let (l, n) = (e.l.unwrap_or(3), e.n.unwrap_or(4));
    if !(2..=MAX_SITES).contains(&l) || !(1..=MAX_PARTICLES).contains(&n) {
        return Err(CliError::Config(format!(
            "experiment: oracle needs 2 <= L <= {MAX_SITES} and 1 <= N <= {MAX_PARTICLES}, got L = {l}, N = {n}"
        )));
    }
    let m = cfg.rate_model()?;
    let r = m.cutoff(l, n);
    let lattice = cfg.lattice(l)?;
    let chain = ExactChain::build(&lattice, n, r, &m)?;
    let residual = chain.stationarity_residual();
    let balance = chain.detailed_balance_gap();
    let mut eta = vec![0; l];
    eta[0] = n;
    let start = SimState::with_cutoff(eta, r, &m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let emp = chain.empirical_distribution(&lattice, start, e.events, &mut rng);
    let tv = total_variation(&emp, &chain.pi);

    let rows: Vec<Vec<String>> = chain
        .states
        .iter()
        .zip(chain.pi.iter().zip(&emp))
        .map(|(s, (p, q))| {
            let label = s
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            vec![label, num(*p), num(*q)]
        })
        .collect();
    let symmetric = e.kernel != KernelChoice::Asymmetric;
    let notes = vec![
        format!(
            "L={l} N={n} R={r} states={} events={}",
            chain.len(),
            e.events
        ),
        format!("stationarity_residual={residual:e}"),
        format!("detailed_balance_gap={balance:e}"),
        format!("total_variation={tv}"),
    ];
    out.csv("oracle.csv", &notes, &["state", "pi", "empirical"], &rows)?;

    println!("{} states, L = {l}, N = {n}, R = {r}", chain.len());
    println!("max |pi Q| = {residual:e} (limit 1e-12)");
    println!(
        "detailed balance gap = {balance:e} ({})",
        if symmetric {
            "required <= 1e-12"
        } else {
            "not required for an asymmetric kernel"
        }
    );
    println!(
        "TV(empirical, pi) after {} events = {tv:.5} (limit 0.01)",
        e.events
    );
    let mut failures = Vec::new();
    if residual > 1e-12 {
        failures.push(format!("stationarity residual {residual:e}"));
    }
    if symmetric && balance > 1e-12 {
        failures.push(format!("detailed balance gap {balance:e}"));
    }
    if tv > 0.01 {
        failures.push(format!("total variation {tv:.5}"));
    }
    if failures.is_empty() {
        println!("PASS");
        Ok(())
    } else {
        Err(CliError::OracleFailed(failures.join(", ")))
    }
}
