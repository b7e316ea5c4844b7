//! Thermodynamic-limit quantities of the canonical ensemble.

use serde::{Deserialize, Serialize};

use crate::ensemble_can::table::CanonicalTable;
use crate::ensemble_gc::{background_critical_density, s_fluid, GrandCanonicalPoint};
use crate::error::{Result, ZrpError};
use crate::model::{CutoffMode, RateModel};

const MAX_BISECTION_STEPS: usize = 300;

/// Entropy cost of the condensed branch relative to the fluid one, in units of
/// `log(c0/c1)`: positive once the condensate is favourable.
fn transition_gap(rho: f64, model: &RateModel) -> f64 {
    let rc = background_critical_density(model);
    let lhs = (s_fluid(rc, model) - (rho - rc) * model.c1().ln() - s_fluid(rho, model))
        / model.log_rate_ratio();
    match model.mode() {
        CutoffMode::LatticeDep => lhs - model.a(),
        CutoffMode::ParticleDep => lhs / rho - model.a(),
    }
}

/// Density above which a single condensate carries the canonical entropy.
///
/// Bisection on `[rho_c, rho_hi]`, `rho_hi` doubled until it brackets the root.
pub fn rho_trans(model: &RateModel) -> f64 {
    let rc = background_critical_density(model);
    if model.a() == 0.0 {
        return rc;
    }
    let mut lo = rc;
    let mut hi = 2.0 * rc.max(model.a()).max(1.0);
    while transition_gap(hi, model) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if transition_gap(mid, model) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Onset of the metastable condensed well: `rho_c + a` (lattice mode) or
/// `rho_c(0) / (1 - a)` (particle mode).
pub fn rho_meta(model: &RateModel) -> Result<f64> {
    if model.a() == 0.0 {
        return Err(ZrpError::Domain("no metastable region at a = 0".into()));
    }
    let rc = background_critical_density(model);
    Ok(match model.mode() {
        CutoffMode::LatticeDep => rc + model.a(),
        CutoffMode::ParticleDep => rc / (1.0 - model.a()),
    })
}

/// Canonical entropy density; the condensed branch applies from `rho_trans` on.
pub fn s_can(rho: f64, model: &RateModel) -> f64 {
    if rho < rho_trans(model) {
        s_fluid(rho, model)
    } else {
        s_condensed(rho, model)
    }
}

/// Entropy of configurations with one condensate and a critical background.
fn s_condensed(rho: f64, model: &RateModel) -> f64 {
    let rc = background_critical_density(model);
    s_fluid(rc, model)
        - (rho - rc) * model.c1().ln()
        - model.effective_a(rho) * model.log_rate_ratio()
}

/// Rate function of the background density `rho_bg` at total density `rho`;
/// `+inf` for `rho_bg > rho`.
pub fn rate_function(rho: f64, rho_bg: f64, model: &RateModel) -> f64 {
    rate_function_with(rho, rho_bg, model, s_can(rho, model))
}

fn rate_function_with(rho: f64, rho_bg: f64, model: &RateModel, s_total: f64) -> f64 {
    if rho_bg > rho {
        return f64::INFINITY;
    }
    let a = model.effective_a(rho);
    let base = s_total - s_fluid(rho_bg, model);
    if rho_bg >= rho - a {
        base + (rho - rho_bg) * model.c0().ln()
    } else {
        base + (rho - rho_bg) * model.c1().ln() + a * model.log_rate_ratio()
    }
}

/// `I_rho` on a grid of background densities with its local extrema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFunctionCurve {
    pub rho: f64,
    pub rho_bg: Vec<f64>,
    pub values: Vec<f64>,
    pub minima: Vec<f64>,
    pub maxima: Vec<f64>,
}

impl RateFunctionCurve {
    /// Evaluate on `grid` (sorted, deduplicated internally).
    pub fn on_grid(rho: f64, grid: &[f64], model: &RateModel) -> Self {
        let mut xs: Vec<f64> = grid.iter().copied().filter(|x| *x >= 0.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let s_total = s_can(rho, model);
        let values: Vec<f64> = xs
            .iter()
            .map(|&b| rate_function_with(rho, b, model, s_total))
            .collect();
        let (mut minima, mut maxima) = (Vec::new(), Vec::new());
        for i in 0..xs.len() {
            let v = values[i];
            if !v.is_finite() {
                continue;
            }
            let left = if i > 0 { values[i - 1] } else { f64::INFINITY };
            let right = values.get(i + 1).copied().unwrap_or(f64::INFINITY);
            if v < left && v < right {
                minima.push(xs[i]);
            } else if i > 0 && left.is_finite() && right.is_finite() && v > left && v > right {
                maxima.push(xs[i]);
            }
        }
        Self {
            rho,
            rho_bg: xs,
            values,
            minima,
            maxima,
        }
    }

    /// Uniform grid on `[0, span]` with the special points `rho_c`, `rho - a`
    /// and `rho` inserted.
    pub fn standard(rho: f64, model: &RateModel, points: usize, span: f64) -> Self {
        let mut grid: Vec<f64> = (0..=points)
            .map(|i| span * i as f64 / points as f64)
            .collect();
        grid.push(background_critical_density(model));
        grid.push(rho - model.effective_a(rho));
        grid.push(rho);
        Self::on_grid(rho, &grid, model)
    }

    /// Location of the smallest finite value.
    pub fn global_minimum(&self) -> Option<f64> {
        self.rho_bg
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(x, _)| *x)
    }
}

/// Exponential growth rates in `L` of the expected fluid and condensed lifetimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifetimeExponents {
    pub xi_fluid: f64,
    pub xi_cond: f64,
}

/// Barrier heights `I(rho - a) - I(rho)` and `I(rho - a) - I(rho_c)`.
///
/// Defined for `rho >= rho_meta`; at `rho_meta` the condensed barrier vanishes.
pub fn lifetime_exponents(rho: f64, model: &RateModel) -> Result<LifetimeExponents> {
    let meta = rho_meta(model)?;
    if rho.is_nan() || rho < meta {
        return Err(ZrpError::Domain(format!(
            "lifetimes need rho >= rho_meta = {meta}, got {rho}"
        )));
    }
    let a = model.effective_a(rho);
    let rc = background_critical_density(model);
    let s_bar = s_fluid(rho - a, model);
    Ok(LifetimeExponents {
        xi_fluid: s_fluid(rho, model) - s_bar + a * model.c0().ln(),
        xi_cond: s_fluid(rc, model) - s_bar + (rc + a - rho) * model.c1().ln(),
    })
}

/// `h = log z_R(phi) - (N/L) log phi - (1/L) log Z_{L,N}`, the specific relative
/// entropy of the canonical measure with respect to the product measure.
pub fn relative_entropy_specific(
    table: &CanonicalTable,
    n: u64,
    point: &GrandCanonicalPoint,
) -> Result<f64> {
    let l = table.lattice_size();
    if point.r != table.cutoff() {
        return Err(ZrpError::Domain(format!(
            "point cutoff {} differs from table cutoff {}",
            point.r,
            table.cutoff()
        )));
    }
    if point.phi <= 0.0 {
        return Err(ZrpError::Domain("relative entropy needs phi > 0".into()));
    }
    let c1 = point.model().c1();
    let ln_phi = if point.phi < 0.5 * c1 {
        point.phi.ln()
    } else {
        // log c1 + log(1 - gap / c1), exact even when phi rounds to c1
        c1.ln() + (-(point.log_gap - c1.ln()).exp()).ln_1p()
    };
    Ok(point.log_z - (n as f64 / l as f64) * ln_phi - table.log_z(l, n as usize) / l as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble_gc::{critical_density, s_gcan};

    fn lattice(a: f64) -> RateModel {
        RateModel::lattice(2.0, 1.0, a).unwrap()
    }

    #[test]
    fn transition_density() {
        assert_eq!(rho_trans(&lattice(0.0)), 1.0);
        let m = lattice(0.5);
        let rt = rho_trans(&m);
        assert!(rt > 1.5);
        let ln2 = 2f64.ln();
        // s_fluid(rho_c = 1) = log 2
        let rhs = (ln2 - ((1.0 + rt) * (1.0 + rt).ln() - rt * (2.0 * rt).ln())) / ln2;
        assert!((rhs - 0.5).abs() < 1e-10);
        assert!((rt - 2.5404).abs() < 1e-3, "{rt}");
    }

    #[test]
    fn transition_slope_exceeds_one() {
        for i in 1..10 {
            let a = i as f64 / 10.0;
            let h = 1e-5;
            let d = (rho_trans(&lattice(a + h)) - rho_trans(&lattice(a - h))) / (2.0 * h);
            assert!(d > 1.0, "a={a}: {d}");
        }
    }

    #[test]
    fn canonical_entropy() {
        let m0 = lattice(0.0);
        for i in 0..60 {
            let r = i as f64 * 0.1;
            assert!((s_can(r, &m0) - s_gcan(r, &m0)).abs() < 1e-14);
        }
        let m = lattice(0.5);
        assert!(3.0 > rho_trans(&m));
        assert!((s_can(3.0, &m) - 0.5 * 2f64.ln()).abs() < 1e-14);
        // non-concave: the condensed branch jumps above the fluid chord
        let rt = rho_trans(&m);
        let (r1, r2) = (rt - 0.6, rt + 0.6);
        assert!(s_can(0.5 * (r1 + r2), &m) < 0.5 * (s_can(r1, &m) + s_can(r2, &m)));
    }

    #[test]
    fn particle_mode_transition() {
        let m = RateModel::particle(2.0, 1.0, 0.2).unwrap();
        let rt = rho_trans(&m);
        assert!((rt - 2.56).abs() < 0.02, "{rt}");
        // both branches agree at the transition
        assert!((s_fluid(rt, &m) - s_condensed(rt, &m)).abs() < 1e-9);
    }

    #[test]
    fn metastability_onset() {
        assert!((rho_meta(&lattice(0.5)).unwrap() - 1.5).abs() < 1e-15);
        let p = RateModel::particle(2.0, 1.0, 0.5).unwrap();
        assert!((rho_meta(&p).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(rho_meta(&lattice(0.0)), Err(ZrpError::Domain(_))));
        for i in 1..20 {
            let p = RateModel::particle(2.0, 1.0, i as f64 / 20.0).unwrap();
            assert!(rho_meta(&p).unwrap() <= critical_density(&p).rho_c);
        }
    }

    #[test]
    fn rate_function_values() {
        let m = lattice(0.5);
        assert_eq!(rate_function(1.2, 1.2, &m), 0.0);
        assert_eq!(rate_function(1.2, 1.3, &m), f64::INFINITY);
        assert!(rate_function(3.0, 1.0, &m).abs() < 1e-14);
        // the two branches meet at rho_bg = rho - a
        let g = RateModel::lattice(3.0, 0.7, 0.4).unwrap();
        for rho in [0.8, 1.5, 3.0, 5.0] {
            let (s, b, a) = (s_can(rho, &g), rho - 0.4, 0.4);
            let fluid = s - s_fluid(b, &g) + a * 3f64.ln();
            let cond = s - s_fluid(b, &g) + a * 0.7f64.ln() + a * (3.0f64 / 0.7).ln();
            assert!((fluid - cond).abs() < 1e-12);
            assert!((rate_function(rho, b, &g) - fluid).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_function_wells() {
        let m = lattice(0.5);
        let c = RateFunctionCurve::standard(2.0, &m, 400, 2.4);
        assert_eq!(c.minima, vec![1.0, 2.0]);
        assert_eq!(c.maxima, vec![1.5]);
        assert!(c.values.iter().all(|v| *v >= -1e-14));
    }

    #[test]
    fn exponents() {
        let m = lattice(0.5);
        let x = lifetime_exponents(2.5, &m).unwrap();
        assert!((x.xi_fluid - 0.1845).abs() < 1e-3 && (x.xi_cond - 0.1699).abs() < 1e-3);
        let i = |b: f64| rate_function(2.5, b, &m);
        assert!((x.xi_fluid - (i(2.0) - i(2.5))).abs() < 1e-12);
        assert!((x.xi_cond - (i(2.0) - i(1.0))).abs() < 1e-12);
        let at_meta = lifetime_exponents(1.5, &m).unwrap();
        assert!(at_meta.xi_cond.abs() < 1e-14 && at_meta.xi_fluid > 0.0);
        let rt = lifetime_exponents(rho_trans(&m), &m).unwrap();
        assert!((rt.xi_fluid - rt.xi_cond).abs() < 1e-10);
        assert!(matches!(
            lifetime_exponents(1.4, &m),
            Err(ZrpError::Domain(_))
        ));
    }

    #[test]
    fn relative_entropy_by_convolution() {
        let m = lattice(0.5).with_cutoff(2);
        let t = CanonicalTable::build(3, 4, &m).unwrap();
        let p = GrandCanonicalPoint::new(&m, 2, 0.7).unwrap();
        // P(sum of 3 iid marginals = 4) by direct convolution
        let pmf: Vec<f64> = (0..=4).map(|k| p.log_pmf(k).exp()).collect();
        let mut conv = vec![1.0, 0.0, 0.0, 0.0, 0.0];
        for _ in 0..3 {
            conv = (0..=4)
                .map(|n| (0..=n).map(|k| pmf[k] * conv[n - k]).sum())
                .collect();
        }
        let h = relative_entropy_specific(&t, 4, &p).unwrap();
        assert!((h + conv[4].ln() / 3.0).abs() < 1e-12);
        let wrong = GrandCanonicalPoint::new(&m, 3, 0.7).unwrap();
        assert!(relative_entropy_specific(&t, 4, &wrong).is_err());
    }
}
