//! Transition lines `rho_c`, `rho_meta`, `rho_trans` over a grid of `a`.

use zrp_core::ensemble_can::{rho_meta, rho_trans};
use zrp_core::ensemble_gc::{background_critical_density, critical_density};
use zrp_core::CutoffMode;

use super::{range, row};
use crate::config::Config;
use crate::error::Result;
use crate::output::{num, Output};
use crate::svg::{Plot, Series, Style};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundaries {
    pub a: f64,
    pub rho_c: f64,
    pub rho_meta: f64,
    pub rho_trans: f64,
}

impl Boundaries {
    /// Phase intervals `(label, lo, hi)`; empty intervals are dropped. In
    /// particle mode `F(E)` and `F/C` overlap on `[rho_meta, rho_c]`.
    pub fn phases(&self, mode: CutoffMode) -> Vec<(&'static str, f64, f64)> {
        let Boundaries {
            rho_c,
            rho_meta,
            rho_trans,
            ..
        } = *self;
        let all = match mode {
            CutoffMode::LatticeDep => vec![
                ("F(E)", 0.0, rho_c),
                ("F", rho_c, rho_meta),
                ("F/C", rho_meta, rho_trans),
                ("C/F", rho_trans, f64::INFINITY),
            ],
            CutoffMode::ParticleDep => vec![
                ("F(E)", 0.0, rho_meta.min(rho_c)),
                ("F(E)+F/C", rho_meta.min(rho_c), rho_c),
                ("F/C", rho_c.max(rho_meta), rho_trans),
                ("C/F", rho_trans, f64::INFINITY),
            ],
        };
        all.into_iter().filter(|(_, lo, hi)| hi > lo).collect()
    }
}

pub fn boundaries(cfg: &Config, a: f64) -> Result<Boundaries> {
    let m = cfg.model_with_a(a)?;
    let meta = if a == 0.0 {
        background_critical_density(&m)
    } else {
        rho_meta(&m)?
    };
    Ok(Boundaries {
        a,
        rho_c: critical_density(&m).rho_c,
        rho_meta: meta,
        rho_trans: rho_trans(&m),
    })
}

pub fn run(cfg: &Config, out: &Output) -> Result<()> {
    let mode = cfg.rate_model()?.mode();
    let a_max = match mode {
        CutoffMode::LatticeDep => 2.0,
        CutoffMode::ParticleDep => 0.9,
    };
    let grid = cfg.grid("a", range(0.0, a_max, 0.05))?;
    let lines = grid
        .iter()
        .map(|&a| boundaries(cfg, a))
        .collect::<Result<Vec<_>>>()?;

    let rows: Vec<Vec<String>> = lines
        .iter()
        .map(|b| {
            let overlap = mode == CutoffMode::ParticleDep && b.rho_meta < b.rho_c;
            let mut r = row(&[b.a, b.rho_c, b.rho_meta, b.rho_trans]);
            r.push(u8::from(overlap).to_string());
            r
        })
        .collect();
    out.csv(
        "phase_diagram.csv",
        &[],
        &["a", "rho_c", "rho_meta", "rho_trans", "overlap"],
        &rows,
    )?;
    let labels: Vec<Vec<String>> = lines
        .iter()
        .flat_map(|b| {
            b.phases(mode)
                .into_iter()
                .map(move |(p, lo, hi)| vec![num(b.a), p.to_string(), num(lo), num(hi)])
        })
        .collect();
    out.csv(
        "phase_labels.csv",
        &[],
        &["a", "phase", "rho_lo", "rho_hi"],
        &labels,
    )?;

    let curve = |f: fn(&Boundaries) -> f64| lines.iter().map(|b| (b.a, f(b))).collect();
    out.figure(
        "phase_diagram.svg",
        &Plot::new("Stationary phase diagram", "a", "rho")
            .with(Series::new("rho_c", curve(|b| b.rho_c), Style::Line))
            .with(Series::new(
                "rho_meta",
                curve(|b| b.rho_meta),
                Style::Dashed,
            ))
            .with(Series::new(
                "rho_trans",
                curve(|b| b.rho_trans),
                Style::Line,
            )),
    )
}
