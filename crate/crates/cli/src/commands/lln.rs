//! Batch means of grand-canonical marginals at finite cutoff.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zrp_core::ensemble_gc::{background_critical_density, invert_phi, MarginalSampler};

use crate::config::Config;
use crate::error::Result;
use crate::output::{num, Output};

/// Below this expected number of sites above `R` per batch the almost-sure
/// regime is assumed.
const TAIL_THRESHOLD: f64 = 0.01;

pub fn run(cfg: &Config, out: &Output) -> Result<()> {
    let m = cfg.rate_model()?;
    let rhos = cfg.grid("rho", vec![0.5, 2.0])?;
    let sizes = cfg.int_grid("L", &[10_000], 1)?;
    let cutoffs = cfg.int_grid("R", &[100], 0)?;
    let rc = background_critical_density(&m);
    let batches = cfg.experiment.batches;
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for &l in &sizes {
        for &r in &cutoffs {
            if (r as f64) < 4.0 * (l as f64).ln() {
                eprintln!(
                    "warning: R = {r} is not large compared with log L = {:.2}",
                    (l as f64).ln()
                );
            }
            for &rho in &rhos {
                let point = invert_phi(rho, r, &m.with_cutoff(r))?;
                let sampler = MarginalSampler::new(&point);
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(stream);
                stream += 1;
                let target = rho.min(rc);
                let (mut sum_means, mut worst, mut exceeded) = (0.0, 0.0f64, 0u32);
                for _ in 0..batches {
                    let (mut sum, mut above) = (0u64, false);
                    for _ in 0..l {
                        let k = sampler.sample(&mut rng);
                        sum += k;
                        above |= k > r;
                    }
                    let mean = sum as f64 / l as f64;
                    sum_means += mean;
                    worst = worst.max((mean - target).abs());
                    exceeded += u32::from(above);
                }
                let bound = l as f64 * (m.c1() / m.c0()).powf(r as f64 / 2.0);
                let regime = if bound <= TAIL_THRESHOLD {
                    "almost_sure"
                } else {
                    "outside"
                };
                let mean = sum_means / batches as f64;
                println!(
                    "rho = {rho}, L = {l}, R = {r}: mean of batch means {mean:.4} (target {target:.4}), max deviation {worst:.4}, batches with eta > R: {exceeded}/{batches} [{regime}]"
                );
                rows.push(vec![
                    num(rho),
                    l.to_string(),
                    r.to_string(),
                    batches.to_string(),
                    num(target),
                    num(mean),
                    num(worst),
                    num(exceeded as f64 / batches as f64),
                    num(bound),
                    regime.to_string(),
                ]);
            }
        }
    }
    out.csv(
        "lln.csv",
        &[],
        &[
            "rho",
            "L",
            "R",
            "batches",
            "target",
            "mean_of_batch_means",
            "max_abs_deviation",
            "exceed_fraction",
            "tail_bound",
            "regime",
        ],
        &rows,
    )?;
    Ok(())
}
