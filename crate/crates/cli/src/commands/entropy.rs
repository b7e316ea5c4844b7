//! Entropy densities against finite-size recursion values, and the pressure panel.

use zrp_core::ensemble_can::{s_can, CanonicalTable};
use zrp_core::ensemble_gc::{critical_density, log_z, p_fluid, p_gcan, s_fluid, s_gcan};
use zrp_core::{CutoffMode, RateModel};

use super::{range, row};
use crate::config::Config;
use crate::error::Result;
use crate::output::Output;
use crate::svg::{Plot, Series, Style};

const PRESSURE_SIZES: [usize; 3] = [2, 4, 8];

/// `(1/L) log Z_{L,N}` at `N = round(rho L)` for every density.
pub fn recursion_entropy(model: &RateModel, l: usize, rhos: &[f64]) -> Result<Vec<f64>> {
    let ns: Vec<u64> = rhos.iter().map(|r| (r * l as f64).round() as u64).collect();
    match model.mode() {
        CutoffMode::LatticeDep => {
            let n_max = ns.iter().copied().max().unwrap_or(0) as usize;
            let t = CanonicalTable::build(l, n_max, model)?;
            Ok(ns
                .iter()
                .map(|&n| t.log_z(l, n as usize) / l as f64)
                .collect())
        }
        CutoffMode::ParticleDep => ns
            .iter()
            .map(|&n| Ok(CanonicalTable::for_target(l, n, model)?.log_z(l, n as usize) / l as f64))
            .collect(),
    }
}

pub fn run(cfg: &Config, out: &Output) -> Result<()> {
    let m = cfg.rate_model()?;
    let rhos = cfg.grid("rho", range(0.05, 4.0, 0.05))?;
    let sizes = cfg.int_grid("L", &[100, 200, 400], 1)?;
    let rec: Vec<Vec<f64>> = sizes
        .iter()
        .map(|&l| recursion_entropy(&m, l as usize, &rhos))
        .collect::<Result<_>>()?;

    let mut columns = vec![
        "rho".to_string(),
        "s_fluid".into(),
        "s_gcan".into(),
        "s_can".into(),
    ];
    columns.extend(sizes.iter().map(|l| format!("s_can_recursion_L{l}")));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = rhos
        .iter()
        .enumerate()
        .map(|(i, &rho)| {
            let mut v = vec![rho, s_fluid(rho, &m), s_gcan(rho, &m), s_can(rho, &m)];
            v.extend(rec.iter().map(|r| r[i]));
            row(&v)
        })
        .collect();
    out.csv("entropy.csv", &[], &cols, &rows)?;

    let curve = |f: &dyn Fn(f64) -> f64| rhos.iter().map(|&r| (r, f(r))).collect::<Vec<_>>();
    let mut plot = Plot::new("Entropy densities", "rho", "s")
        .with(Series::new(
            "s_fluid",
            curve(&|r| s_fluid(r, &m)),
            Style::Dashed,
        ))
        .with(Series::new(
            "s_gcan",
            curve(&|r| s_gcan(r, &m)),
            Style::Line,
        ))
        .with(Series::new("s_can", curve(&|r| s_can(r, &m)), Style::Line));
    for (l, r) in sizes.iter().zip(&rec) {
        plot = plot.with(Series::new(
            format!("L = {l}"),
            rhos.iter().copied().zip(r.iter().copied()).collect(),
            Style::Markers,
        ));
    }
    out.figure("entropy.svg", &plot)?;

    // pressure: finite-R log z_R needs phi < c1
    let lattice = m.mode() == CutoffMode::LatticeDep;
    let phi_top = if lattice {
        m.c1()
    } else {
        critical_density(&m).phi_c
    };
    let phis = cfg.grid(
        "phi",
        range(0.01, 0.99, 0.01)
            .iter()
            .map(|f| f * phi_top)
            .collect(),
    )?;
    let mut columns = vec!["phi".to_string(), "p_fluid".into(), "p_gcan".into()];
    if lattice {
        columns.extend(PRESSURE_SIZES.iter().map(|l| format!("log_z_R_L{l}")));
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    let mut series: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 2 + PRESSURE_SIZES.len()];
    for &phi in &phis {
        let mut v = vec![phi, p_fluid(phi, &m).unwrap_or(f64::NAN), p_gcan(phi, &m)];
        if lattice {
            for &l in &PRESSURE_SIZES {
                v.push(log_z(phi, m.cutoff(l, 0), &m).unwrap_or(f64::INFINITY));
            }
        }
        for (s, &y) in series.iter_mut().zip(&v[1..]) {
            s.push((phi, y));
        }
        rows.push(row(&v));
    }
    out.csv("pressure.csv", &[], &cols, &rows)?;
    let mut plot = Plot::new("Pressure", "phi", "p")
        .with(Series::new("p_fluid", series[0].clone(), Style::Dashed))
        .with(Series::new("p_gcan", series[1].clone(), Style::Line));
    if lattice {
        for (l, s) in PRESSURE_SIZES.iter().zip(&series[2..]) {
            plot = plot.with(Series::new(
                format!("log z_R, L = {l}"),
                s.clone(),
                Style::Dashed,
            ));
        }
    }
    out.figure("pressure.svg", &plot)
}
