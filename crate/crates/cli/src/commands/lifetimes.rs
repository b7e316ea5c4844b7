//! Replica sweeps of fluid and condensed exit times with exponential-rate fits.

use zrp_core::ensemble_can::{lifetime_exponents, rho_meta};
use zrp_core::kmc_sim::{lifetime_sweep, HitTarget, LifetimeSample, SweepSpec};
use zrp_core::stats::{ks_exp1, linear_fit, LinearFit};
use zrp_core::ZrpError;

use super::range;
use crate::config::Config;
use crate::error::{CliError, Result};
use crate::output::{num, Output};
use crate::svg::{Plot, Series, Style};

/// Largest censoring fraction tolerated at the smallest size.
pub const MAX_CENSORED_SMALLEST: f64 = 0.2;

/// Sizes entering the fit: the smallest is dropped when more than 20% of its
/// replicas were censored, sizes without any uncensored replica are skipped.
pub fn regression_points(samples: &[LifetimeSample]) -> Vec<&LifetimeSample> {
    let mut pts: Vec<&LifetimeSample> = samples.iter().collect();
    pts.sort_by_key(|s| s.l);
    if pts
        .first()
        .is_some_and(|s| s.censored_fraction() > MAX_CENSORED_SMALLEST)
    {
        pts.remove(0);
    }
    pts.retain(|s| !s.uncensored().is_empty());
    pts
}

/// Least-squares fit of `log(mean tau)` against `L`; needs three sizes.
pub fn fit_exponent(samples: &[LifetimeSample]) -> Result<(LinearFit, Vec<usize>)> {
    let pts = regression_points(samples);
    if pts.len() < 3 {
        return Err(ZrpError::InsufficientData(format!(
            "{} usable system sizes, need 3",
            pts.len()
        ))
        .into());
    }
    let xs: Vec<f64> = pts.iter().map(|s| s.l as f64).collect();
    let ys: Vec<f64> = pts.iter().map(|s| s.mean_stderr().0.ln()).collect();
    Ok((linear_fit(&xs, &ys)?, pts.iter().map(|s| s.l).collect()))
}

fn target_name(t: HitTarget) -> &'static str {
    match t {
        HitTarget::FluidExit => "fluid_exit",
        HitTarget::CondExit => "cond_exit",
    }
}

pub fn run(cfg: &Config, out: &Output) -> Result<()> {
    let m = cfg.rate_model()?;
    let meta = rho_meta(&m).map_err(|e| CliError::Config(format!("lifetimes need a > 0: {e}")))?;
    let rhos = cfg.grid("rho", vec![2.5])?;
    if let Some(bad) = rhos.iter().find(|&&r| r <= meta) {
        return Err(CliError::Config(format!(
            "grid.rho: {bad} is not above rho_meta = {meta}"
        )));
    }
    let sizes: Vec<usize> = cfg
        .int_grid("L", &[20, 28, 36, 44, 52], 2)?
        .into_iter()
        .map(|l| l as usize)
        .collect();

    let exps: Vec<Vec<String>> = rhos
        .iter()
        .map(|&r| {
            let xi = lifetime_exponents(r, &m)?;
            Ok(vec![num(r), num(xi.xi_fluid), num(xi.xi_cond)])
        })
        .collect::<Result<_>>()?;
    out.csv("exponents.csv", &[], &["rho", "xi_fluid", "xi_cond"], &exps)?;

    let (mut per_size, mut fits, mut tails) = (Vec::new(), Vec::new(), Vec::new());
    let mut plot = Plot::new("Mean lifetimes", "L", "log mean tau");
    for (i, &rho) in rhos.iter().enumerate() {
        let xi = lifetime_exponents(rho, &m)?;
        for (target, expected) in [
            (HitTarget::FluidExit, xi.xi_fluid),
            (HitTarget::CondExit, xi.xi_cond),
        ] {
            let spec = SweepSpec {
                sizes: sizes.clone(),
                rho,
                replicas: cfg.experiment.replicas,
                t_max: cfg.experiment.t_max,
                // one independent family of streams per density
                seed: cfg.seed.wrapping_add(i as u64),
            };
            let samples = lifetime_sweep(&spec, &m, target)?;
            for s in &samples {
                let (mean, err) = s.mean_stderr();
                per_size.push(vec![
                    num(rho),
                    s.l.to_string(),
                    s.n.to_string(),
                    s.r.to_string(),
                    target_name(target).into(),
                    s.times.len().to_string(),
                    s.uncensored().len().to_string(),
                    num(s.censored_fraction()),
                    num(mean),
                    num(err),
                ]);
            }
            let (fit, used) = fit_exponent(&samples)?;
            let largest = samples.iter().max_by_key(|s| s.l).unwrap();
            let times = largest.uncensored();
            let mean = largest.mean_stderr().0;
            let mut scaled: Vec<f64> = times.iter().map(|t| t / mean).collect();
            scaled.sort_by(f64::total_cmp);
            let ks = ks_exp1(&scaled);
            for (k, x) in scaled.iter().enumerate() {
                let survival = 1.0 - k as f64 / scaled.len() as f64;
                tails.push(vec![
                    num(rho),
                    target_name(target).into(),
                    largest.l.to_string(),
                    num(*x),
                    num(survival),
                    num((-x).exp()),
                ]);
            }
            let rel = (fit.slope - expected).abs() / expected;
            println!(
                "rho = {rho}, {}: xi fit {:.4} +- {:.4}, analytic {expected:.4} (rel. err {rel:.3}), KS {ks:.3}",
                target_name(target),
                fit.slope,
                fit.slope_stderr
            );
            fits.push(vec![
                num(rho),
                target_name(target).into(),
                num(fit.slope),
                num(fit.slope_stderr),
                num(fit.intercept),
                num(expected),
                num(rel),
                used.iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                num(ks),
            ]);
            let pts: Vec<(f64, f64)> = samples
                .iter()
                .map(|s| (s.l as f64, s.mean_stderr().0.ln()))
                .collect();
            let label = format!("rho = {rho}, {}", target_name(target));
            let (lo, hi) = (sizes[0] as f64, *sizes.last().unwrap() as f64);
            plot = plot
                .with(Series::new(label.clone(), pts, Style::Markers))
                .with(Series::new(
                    format!("{label} fit"),
                    vec![
                        (lo, fit.intercept + fit.slope * lo),
                        (hi, fit.intercept + fit.slope * hi),
                    ],
                    Style::Dashed,
                ));
        }
    }
    out.csv(
        "lifetimes.csv",
        &[],
        &[
            "rho",
            "L",
            "N",
            "R",
            "target",
            "replicas",
            "uncensored",
            "censored_fraction",
            "mean_tau",
            "stderr_tau",
        ],
        &per_size,
    )?;
    out.csv(
        "regression.csv",
        &[],
        &[
            "rho",
            "target",
            "xi_fit",
            "xi_fit_stderr",
            "intercept",
            "xi_analytic",
            "rel_err",
            "L_used",
            "ks_exp1",
        ],
        &fits,
    )?;
    out.csv(
        "lifetime_tail.csv",
        &[],
        &[
            "rho",
            "target",
            "L",
            "tau_over_mean",
            "survival",
            "exp1_survival",
        ],
        &tails,
    )?;
    let grid = range(meta, meta + 3.0, 0.02);
    let xi: Vec<_> = grid
        .iter()
        .map(|&r| (r, lifetime_exponents(r, &m)))
        .collect();
    out.figure("lifetimes.svg", &plot)?;
    out.figure(
        "exponents.svg",
        &Plot::new("Lifetime exponents", "rho", "xi")
            .with(Series::new(
                "xi_fluid",
                xi.iter()
                    .filter_map(|(r, x)| x.as_ref().ok().map(|x| (*r, x.xi_fluid)))
                    .collect(),
                Style::Line,
            ))
            .with(Series::new(
                "xi_cond",
                xi.iter()
                    .filter_map(|(r, x)| x.as_ref().ok().map(|x| (*r, x.xi_cond)))
                    .collect(),
                Style::Line,
            )),
    )
}
