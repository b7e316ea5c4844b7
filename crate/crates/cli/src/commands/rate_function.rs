//! Rate function of the background density for several total densities.

use zrp_core::ensemble_can::{rate_function, rho_trans, RateFunctionCurve};
use zrp_core::ensemble_gc::background_critical_density;

use super::range;
use crate::config::Config;
use crate::error::Result;
use crate::output::{num, Output};
use crate::svg::{Plot, Series, Style};

pub fn run(cfg: &Config, out: &Output) -> Result<()> {
    let m = cfg.rate_model()?;
    let rhos = cfg.grid("rho", vec![1.2, 1.8, rho_trans(&m), 3.0])?;
    let top = rhos.iter().copied().fold(0.0, f64::max) + 0.5;
    let base = cfg.grid("rho_bg", range(0.0, top, top / 1000.0))?;

    let mut rows = Vec::new();
    let mut extrema = Vec::new();
    let mut plot = Plot::new("Rate function of the background density", "rho_bg", "I");
    let mut gap = 0.0f64;
    for &rho in &rhos {
        let mut grid = base.clone();
        grid.extend([
            background_critical_density(&m),
            rho - m.effective_a(rho),
            rho,
        ]);
        let c = RateFunctionCurve::on_grid(rho, &grid, &m);
        for (b, v) in c.rho_bg.iter().zip(&c.values) {
            rows.push(vec![num(rho), num(*b), num(*v)]);
        }
        for (kind, xs) in [("min", &c.minima), ("max", &c.maxima)] {
            for &x in xs.iter() {
                extrema.push(vec![
                    num(rho),
                    kind.to_string(),
                    num(x),
                    num(rate_function(rho, x, &m)),
                ]);
            }
        }
        let knee = rho - m.effective_a(rho);
        if knee > 0.0 {
            gap = gap.max(
                (rate_function(rho, knee.next_down(), &m) - rate_function(rho, knee, &m)).abs(),
            );
        }
        plot = plot.with(Series::new(
            format!("rho = {rho:.4}"),
            c.rho_bg
                .iter()
                .copied()
                .zip(c.values.iter().copied())
                .collect(),
            Style::Line,
        ));
    }
    let note = format!("max_branch_gap={gap:e}");
    println!("branch continuity at rho_bg = rho - a: max gap {gap:e}");
    out.csv(
        "rate_function.csv",
        std::slice::from_ref(&note),
        &["rho", "rho_bg", "I"],
        &rows,
    )?;
    out.csv(
        "rate_function_extrema.csv",
        &[note],
        &["rho", "kind", "rho_bg", "I"],
        &extrema,
    )?;
    out.figure("rate_function.svg", &plot)
}
