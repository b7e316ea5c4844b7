//! Grand-canonical and fluid-limit quantities.
//!
//! A grand-canonical point at cutoff `R` is a product measure whose single-site
//! marginal is `w_R(k) phi^k / z_R(phi)`. For `rho > rho_c` the fugacity that
//! realises density `rho` sits within `(c1/c0)^(R/2)` of `c1`, far below the
//! resolution of an `f64` near `c1` once `R` is a few hundred. Points therefore
//! carry `log(c1 - phi)` alongside `phi`, and every closed form below is written
//! in terms of that gap.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZrpError};
use crate::logspace::{log_add, log_sigmoid, softplus, xlogx};
use crate::model::{CutoffMode, RateModel};

const MAX_BISECTION_STEPS: usize = 400;

/// `log w_R(k)`: `-k log c0` for `k <= R`, `-R log c0 + (R - k) log c1` beyond.
pub fn log_weight(k: u64, r: u64, model: &RateModel) -> f64 {
    if k == 0 {
        0.0
    } else if k <= r {
        -(k as f64) * model.c0().ln()
    } else {
        -(r as f64) * model.c0().ln() - ((k - r) as f64) * model.c1().ln()
    }
}

/// Fugacity, cutoff and the derived normalisation and density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrandCanonicalPoint {
    pub phi: f64,
    pub r: u64,
    /// `log(c1 - phi)`.
    pub log_gap: f64,
    /// `log z_R(phi)`.
    pub log_z: f64,
    /// `rho_R(phi)`.
    pub rho: f64,
    model: RateModel,
}

impl GrandCanonicalPoint {
    pub fn new(model: &RateModel, r: u64, phi: f64) -> Result<Self> {
        check_phi(phi, model)?;
        let log_gap = (model.c1() - phi).ln();
        Ok(Self::assemble(model, r, phi, log_gap))
    }

    /// Point with `phi = c1 - exp(log_gap)`; usable arbitrarily close to `c1`.
    pub fn from_log_gap(model: &RateModel, r: u64, log_gap: f64) -> Result<Self> {
        let ln_c1 = model.c1().ln();
        if log_gap.is_nan() || log_gap > ln_c1 || log_gap == f64::NEG_INFINITY {
            return Err(ZrpError::Domain(format!(
                "log(c1 - phi) = {log_gap} outside (-inf, log c1]"
            )));
        }
        Ok(Self::from_scaled_gap(model, r, log_gap - ln_c1))
    }

    /// `s = log(1 - phi/c1)`, which resolves both `phi -> 0` and `phi -> c1`.
    fn from_scaled_gap(model: &RateModel, r: u64, s: f64) -> Self {
        let phi = -model.c1() * s.exp_m1();
        Self::assemble(model, r, phi.max(0.0), s + model.c1().ln())
    }

    fn assemble(model: &RateModel, r: u64, phi: f64, log_gap: f64) -> Self {
        let (log_z, rho) = evaluate(model, r, phi, log_gap);
        Self {
            phi,
            r,
            log_gap,
            log_z,
            rho,
            model: *model,
        }
    }

    pub fn model(&self) -> &RateModel {
        &self.model
    }

    /// `log nu^1(k) = log w_R(k) + k log phi - log z_R(phi)`.
    pub fn log_pmf(&self, k: u64) -> f64 {
        if self.phi == 0.0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        log_weight(k, self.r, &self.model) + k as f64 * self.phi.ln() - self.log_z
    }

    /// Log-probability that a site holds more than `R` particles.
    pub fn log_tail_probability(&self) -> f64 {
        if self.phi == 0.0 {
            return f64::NEG_INFINITY;
        }
        let ln_c1 = self.model.c1().ln();
        // r0^R * r1 / (1 - r1) / z with r0 = phi/c0, r1 = phi/c1
        self.r as f64 * (self.phi.ln() - self.model.c0().ln()) + self.phi.ln()
            - ln_c1
            - (self.log_gap - ln_c1)
            - self.log_z
    }

    /// Mean and variance of the single-site marginal from its exact probabilities.
    pub fn moments(&self) -> (f64, f64) {
        if self.phi == 0.0 {
            return (0.0, 0.0);
        }
        let log_r0 = self.phi.ln() - self.model.c0().ln();
        let (mut m1, mut m2) = (0.0, 0.0);
        for k in 1..=self.r {
            let p = (k as f64 * log_r0 - self.log_z).exp();
            m1 += k as f64 * p;
            m2 += (k * k) as f64 * p;
        }
        let ln_c1 = self.model.c1().ln();
        let r = self.r as f64;
        let r1 = self.phi / self.model.c1();
        let log_p = self.log_gap - ln_c1;
        let p = log_p.exp();
        let log_coef = r * log_r0 + r1.ln() - self.log_z;
        // sum_{j>=1} r1^j (R + j)^m for m = 1, 2 divided by r1
        let first = r / p + 1.0 / (p * p);
        let second = r * r / p + 2.0 * r / (p * p) + (1.0 + r1) / (p * p * p);
        m1 += (log_coef + first.ln()).exp();
        m2 += (log_coef + second.ln()).exp();
        (m1, m2 - m1 * m1)
    }
}

fn check_phi(phi: f64, model: &RateModel) -> Result<()> {
    if phi.is_nan() || phi < 0.0 {
        return Err(ZrpError::Domain(format!("fugacity {phi} must be >= 0")));
    }
    if phi >= model.c1() {
        return Err(ZrpError::Domain(format!(
            "z_R(phi) diverges for phi = {phi} >= c1 = {}",
            model.c1()
        )));
    }
    Ok(())
}

/// `(log z_R, rho_R)` at fugacity `phi` with `log_gap = log(c1 - phi)`.
fn evaluate(model: &RateModel, r: u64, phi: f64, log_gap: f64) -> (f64, f64) {
    if phi == 0.0 {
        return (0.0, 0.0);
    }
    let (c0, c1) = (model.c0(), model.c1());
    let ln_phi = phi.ln();
    // t = (phi/c0)^{R+1} (c0 - c1) / (c1 - phi), so z_R = z_inf (1 + t)
    let log_t = (r as f64 + 1.0) * (ln_phi - c0.ln()) + (c0 - c1).ln() - log_gap;
    let log_z = c0.ln() - (c0 - phi).ln() + softplus(log_t);
    let excess = (log_sigmoid(log_t) + log_add((r as f64 + 1.0).ln(), ln_phi - log_gap)).exp();
    (log_z, phi / (c0 - phi) + excess)
}

/// `log z_R(phi)`.
pub fn log_z(phi: f64, r: u64, model: &RateModel) -> Result<f64> {
    Ok(GrandCanonicalPoint::new(model, r, phi)?.log_z)
}

/// `rho_R(phi)`, the mean occupation under the marginal.
pub fn rho(phi: f64, r: u64, model: &RateModel) -> Result<f64> {
    Ok(GrandCanonicalPoint::new(model, r, phi)?.rho)
}

/// The fugacity `phi_R(rho)` at which the marginal has mean `rho`.
///
/// Bisects on `log(1 - phi/c1)`, on which `rho_R` is strictly decreasing.
pub fn invert_phi(rho: f64, r: u64, model: &RateModel) -> Result<GrandCanonicalPoint> {
    if rho.is_nan() || rho < 0.0 || rho.is_infinite() {
        return Err(ZrpError::Domain(format!(
            "density {rho} must be finite and >= 0"
        )));
    }
    if rho == 0.0 {
        return GrandCanonicalPoint::new(model, r, 0.0);
    }
    let at = |s: f64| GrandCanonicalPoint::from_scaled_gap(model, r, s);
    let mut hi = 0.0f64; // phi = 0
    let mut lo = -1.0f64;
    while at(lo).rho < rho {
        hi = lo;
        lo *= 2.0;
        if lo < -1.0e6 {
            return Err(ZrpError::Domain(format!(
                "cannot bracket phi_R({rho}) at R = {r}"
            )));
        }
    }
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid).rho < rho {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (a, b) = (at(lo), at(hi));
    Ok(if (a.rho - rho).abs() <= (b.rho - rho).abs() {
        a
    } else {
        b
    })
}

/// Quantities of the `R = infinity` (fluid) product measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidPoint {
    pub phi: f64,
    pub rho: f64,
    pub log_z: f64,
    pub pressure: f64,
    pub entropy: f64,
}

/// `phi_inf(rho) = c0 rho / (1 + rho)`.
pub fn phi_inf(rho: f64, model: &RateModel) -> f64 {
    model.c0() * rho / (1.0 + rho)
}

/// `rho_inf(phi) = phi / (c0 - phi)`.
pub fn rho_inf(phi: f64, model: &RateModel) -> Result<f64> {
    check_fluid_phi(phi, model)?;
    Ok(phi / (model.c0() - phi))
}

/// `p_fluid(phi) = log(c0 / (c0 - phi))`.
pub fn p_fluid(phi: f64, model: &RateModel) -> Result<f64> {
    check_fluid_phi(phi, model)?;
    Ok(model.c0().ln() - (model.c0() - phi).ln())
}

/// `s_fluid(rho) = (1 + rho) log(1 + rho) - rho (log c0 + log rho)`, zero at `rho = 0`.
pub fn s_fluid(rho: f64, model: &RateModel) -> f64 {
    (1.0 + rho) * rho.ln_1p() - rho * model.c0().ln() - xlogx(rho)
}

fn check_fluid_phi(phi: f64, model: &RateModel) -> Result<()> {
    if phi.is_nan() || phi < 0.0 || phi >= model.c0() {
        return Err(ZrpError::Domain(format!(
            "fluid fugacity {phi} outside [0, c0 = {})",
            model.c0()
        )));
    }
    Ok(())
}

pub fn fluid_from_phi(phi: f64, model: &RateModel) -> Result<FluidPoint> {
    let rho = rho_inf(phi, model)?;
    let pressure = p_fluid(phi, model)?;
    Ok(FluidPoint {
        phi,
        rho,
        log_z: pressure,
        pressure,
        entropy: s_fluid(rho, model),
    })
}

pub fn fluid_from_rho(rho: f64, model: &RateModel) -> Result<FluidPoint> {
    if rho.is_nan() || rho < 0.0 || rho.is_infinite() {
        return Err(ZrpError::Domain(format!(
            "density {rho} must be finite and >= 0"
        )));
    }
    let phi = phi_inf(rho, model);
    let pressure = -(1.0 / (1.0 + rho)).ln();
    Ok(FluidPoint {
        phi,
        rho,
        log_z: pressure,
        pressure,
        entropy: s_fluid(rho, model),
    })
}

/// Critical density and the fugacity at which the grand-canonical pressure blows up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub rho_c: f64,
    pub phi_c: f64,
}

/// `rho_c = c1/(c0 - c1)` (lattice mode) or `c1^{1-a}/(c0^{1-a} - c1^{1-a})`
/// with `phi_c = c1 (c0/c1)^a` (particle mode).
pub fn critical_density(model: &RateModel) -> CriticalPoint {
    let (c0, c1) = (model.c0(), model.c1());
    match model.mode() {
        CutoffMode::LatticeDep => CriticalPoint {
            rho_c: c1 / (c0 - c1),
            phi_c: c1,
        },
        CutoffMode::ParticleDep => {
            let e = 1.0 - model.a();
            CriticalPoint {
                rho_c: c1.powf(e) / (c0.powf(e) - c1.powf(e)),
                phi_c: c1 * (c0 / c1).powf(model.a()),
            }
        }
    }
}

/// `rho_c` of the lattice-dependent model with the same rates; the background
/// density of a condensed state in either mode.
pub fn background_critical_density(model: &RateModel) -> f64 {
    model.c1() / (model.c0() - model.c1())
}

/// Grand-canonical pressure in the thermodynamic limit.
pub fn p_gcan(phi: f64, model: &RateModel) -> f64 {
    let crit = critical_density(model);
    if phi < crit.phi_c {
        model.c0().ln() - (model.c0() - phi).ln()
    } else {
        f64::INFINITY
    }
}

/// Negative Legendre transform of the grand-canonical pressure.
pub fn s_gcan(rho: f64, model: &RateModel) -> f64 {
    let crit = critical_density(model);
    if rho <= crit.rho_c {
        s_fluid(rho, model)
    } else {
        s_fluid(crit.rho_c, model) - (rho - crit.rho_c) * crit.phi_c.ln()
    }
}

/// Exact sampler for the single-site marginal at a grand-canonical point.
///
/// Inverts the two geometric pieces separately: ratio `phi/c0` on `0..=R`
/// and ratio `phi/c1` beyond. Tail events are selected with a Bernoulli draw
/// that stays exact for probabilities far below `2^-53`.
#[derive(Debug, Clone)]
pub struct MarginalSampler {
    r: u64,
    log_r0: f64,
    /// `1 - (phi/c0)^{R+1}`.
    fluid_span: f64,
    log_tail: f64,
    /// `log(phi/c1)`.
    log_r1: f64,
}

impl MarginalSampler {
    pub fn new(point: &GrandCanonicalPoint) -> Self {
        let model = point.model();
        if point.phi == 0.0 {
            return Self {
                r: point.r,
                log_r0: f64::NEG_INFINITY,
                fluid_span: 1.0,
                log_tail: f64::NEG_INFINITY,
                log_r1: f64::NEG_INFINITY,
            };
        }
        let log_r0 = point.phi.ln() - model.c0().ln();
        let p = (point.log_gap - model.c1().ln()).exp();
        let log_r1 = if p < 0.5 {
            (-p).ln_1p()
        } else {
            point.phi.ln() - model.c1().ln()
        };
        Self {
            r: point.r,
            log_r0,
            fluid_span: -((point.r as f64 + 1.0) * log_r0).exp_m1(),
            log_tail: point.log_tail_probability(),
            log_r1,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if bernoulli_log(self.log_tail, rng) {
            // excess j >= 1 with P(j) proportional to r1^j
            let u = 1.0 - rng.random::<f64>();
            let j = 1.0 + (u.ln() / self.log_r1).floor();
            let cap = (u64::MAX - self.r) as f64;
            return self.r
                + if j >= cap {
                    u64::MAX - self.r
                } else {
                    j as u64
                };
        }
        if self.log_r0 == f64::NEG_INFINITY {
            return 0;
        }
        let u = rng.random::<f64>();
        let k = ((-u * self.fluid_span).ln_1p() / self.log_r0).floor();
        if k.is_nan() || k < 0.0 {
            0
        } else {
            (k as u64).min(self.r)
        }
    }
}

/// Draw `true` with probability `exp(log_p)`, exact to `f64` resolution of `p`
/// even when `p` is far below `2^-53`.
pub fn bernoulli_log<R: Rng + ?Sized>(log_p: f64, rng: &mut R) -> bool {
    if log_p == f64::NEG_INFINITY {
        return false;
    }
    if log_p >= 0.0 {
        return true;
    }
    const SCALE_BITS: f64 = 32.0;
    let step = SCALE_BITS * std::f64::consts::LN_2;
    let mut lp = log_p;
    while lp < -step {
        // continue only on the 2^-32 event that all 32 bits are zero
        if rng.random::<u32>() != 0 {
            return false;
        }
        lp += step;
    }
    rng.random::<f64>() < lp.exp()
}

/// One draw from the marginal at `point`.
pub fn sample_marginal<R: Rng + ?Sized>(point: &GrandCanonicalPoint, rng: &mut R) -> u64 {
    MarginalSampler::new(point).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model() -> RateModel {
        RateModel::lattice(2.0, 1.0, 0.5).unwrap()
    }

    /// Brute-force series for z_R, independent of the closed form.
    fn series_log_z(phi: f64, r: u64, m: &RateModel, terms: u64) -> f64 {
        let s: f64 = (0..=terms)
            .map(|k| (log_weight(k, r, m) + k as f64 * phi.ln()).exp())
            .sum();
        s.ln()
    }

    #[test]
    fn weights_by_direct_product() {
        let m = model();
        assert_eq!(log_weight(0, 5, &m), 0.0);
        assert_eq!(log_weight(0, 0, &m), 0.0);
        // product of 1/g(i) for i = 1..=k
        for (k, r) in [(3u64, 5u64), (7, 5), (1, 0), (12, 3)] {
            let direct: f64 = (1..=k).map(|i| -m.rate(i, r).ln()).sum();
            assert!((log_weight(k, r, &m) - direct).abs() < 1e-14);
        }
        assert!((log_weight(3, 5, &m) + 3.0 * 2f64.ln()).abs() < 1e-15);
        assert!((log_weight(7, 5, &m) + 5.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn z_matches_series() {
        let m = model();
        assert_eq!(log_z(0.0, 7, &m).unwrap(), 0.0);
        let closed = log_z(0.5, 4, &m).unwrap();
        let series = series_log_z(0.5, 4, &m, 200);
        assert!(((closed - series) / series).abs() < 1e-10);
        for (phi, r) in [(0.1, 0), (0.7, 3), (0.95, 10), (0.3, 40)] {
            let c = log_z(phi, r, &m).unwrap();
            let s = series_log_z(phi, r, &m, 4000);
            assert!(
                (c.exp() - s.exp()).abs() / s.exp() < 1e-10,
                "phi={phi} r={r}"
            );
        }
    }

    #[test]
    fn z_diverges_at_c1() {
        let m = model();
        let a = log_z(0.99, 10, &m).unwrap();
        let b = log_z(0.999, 10, &m).unwrap();
        let c = log_z(0.999_999, 10, &m).unwrap();
        assert!(a < b && b < c);
        assert!(matches!(log_z(1.0, 10, &m), Err(ZrpError::Domain(_))));
        assert!(matches!(rho(1.5, 10, &m), Err(ZrpError::Domain(_))));
    }

    #[test]
    fn rho_is_log_derivative() {
        let m = model();
        assert_eq!(rho(0.0, 6, &m).unwrap(), 0.0);
        let (phi, h) = (0.5, 1e-6);
        let fd =
            phi * (log_z(phi + h, 6, &m).unwrap() - log_z(phi - h, 6, &m).unwrap()) / (2.0 * h);
        assert!((rho(phi, 6, &m).unwrap() - fd).abs() < 1e-6);
        // large R: approaches the fluid density 0.9 / 1.1
        let big = rho(0.9, 400, &m).unwrap();
        assert!((big - 0.9 / 1.1).abs() < 1e-12);
    }

    #[test]
    fn inversion_near_criticality() {
        let m = model();
        assert_eq!(invert_phi(0.0, 40, &m).unwrap().phi, 0.0);
        let at_c = invert_phi(1.0, 40, &m).unwrap();
        assert!(at_c.phi < 1.0 && at_c.phi > 0.99);
        assert!((at_c.rho - 1.0).abs() <= 1e-10);
        let above = invert_phi(2.0, 40, &m).unwrap();
        assert!((above.rho - 2.0).abs() <= 2e-10);
        // leading order: 1 - phi = (1/2)^20 / sqrt(z_inf(1) (rho - rho_c)), z_inf(1) = 2
        let predicted = 0.5f64.powi(20) / (2.0f64 * 1.0).sqrt();
        let gap = at_c_gap(&above);
        assert!(
            (gap / predicted - 1.0).abs() < 0.05,
            "gap {gap} vs {predicted}"
        );
    }

    fn at_c_gap(p: &GrandCanonicalPoint) -> f64 {
        p.log_gap.exp()
    }

    #[test]
    fn inversion_beyond_double_resolution() {
        // at R = 200 the gap to c1 is ~1e-31, invisible in phi itself
        let m = model();
        let p = invert_phi(3.0, 200, &m).unwrap();
        assert!((p.rho - 3.0).abs() <= 3e-10);
        assert!(p.log_gap < -60.0);
        assert_eq!(p.phi, 1.0);
    }

    #[test]
    fn critical_exponent_at_rho_c() {
        // at rho = rho_c the fluid deficit ~ gap balances the tail excess ~ r0^R / gap^2,
        // so the gap scales like (c1/c0)^{R/3}
        let m = model();
        let g = |r: u64| invert_phi(1.0, r, &m).unwrap().log_gap;
        let slope = (g(160) - g(80)) / 80.0;
        assert!(
            (slope / (-2f64.ln() / 3.0) - 1.0).abs() < 0.05,
            "slope {slope}"
        );
    }

    #[test]
    fn fluid_quantities() {
        let m = model();
        let f0 = fluid_from_rho(0.0, &m).unwrap();
        assert_eq!(f0.entropy, 0.0);
        assert_eq!(f0.phi, 0.0);
        let f1 = fluid_from_rho(1.0, &m).unwrap();
        assert!((f1.entropy - 2f64.ln()).abs() < 1e-15);
        for r in [0.1, 1.0, 10.0] {
            let back = rho_inf(phi_inf(r, &m), &m).unwrap();
            assert!((back - r).abs() < 1e-12 * r.max(1.0));
        }
        assert!(fluid_from_phi(2.0, &m).is_err());
        let fp = fluid_from_phi(1.5, &m).unwrap();
        assert!((fp.rho - 3.0).abs() < 1e-12);
        assert!((fp.pressure - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn critical_densities() {
        let m = model();
        assert_eq!(critical_density(&m).rho_c, 1.0);
        let p0 = RateModel::particle(2.0, 1.0, 0.0).unwrap();
        assert!((critical_density(&p0).rho_c - 1.0).abs() < 1e-15);
        let p5 = RateModel::particle(2.0, 1.0, 0.5).unwrap();
        let c = critical_density(&p5);
        assert!((c.rho_c - 1.0 / (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((c.rho_c - 2.414_213_562_373_095).abs() < 1e-9);
        assert!((c.phi_c - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn grand_canonical_entropy() {
        let m = model();
        assert_eq!(s_gcan(0.4, &m), s_fluid(0.4, &m));
        assert!((s_gcan(2.0, &m) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(p_gcan(1.0, &m), f64::INFINITY);
        assert!((p_gcan(0.5, &m) - (2.0f64 / 1.5).ln()).abs() < 1e-15);
    }

    #[test]
    fn legendre_duality() {
        let m = RateModel::lattice(3.0, 0.7, 0.2).unwrap();
        for i in 1..200 {
            let r = i as f64 * 0.05;
            let phi = phi_inf(r, &m);
            let dual = p_fluid(phi, &m).unwrap() - r * phi.ln();
            assert!((s_fluid(r, &m) - dual).abs() < 1e-10);
        }
    }

    #[test]
    fn moments_match_closed_form() {
        let m = model();
        for (rho_target, r) in [(0.5, 10), (1.0, 30), (2.0, 40), (4.0, 12)] {
            let p = invert_phi(rho_target, r, &m).unwrap();
            let (mean, var) = p.moments();
            assert!(
                (mean - p.rho).abs() < 1e-8 * rho_target.max(1.0),
                "{mean} vs {}",
                p.rho
            );
            // variance = phi d rho / d phi, by finite differences in the gap coordinate
            let h = 1e-5;
            let up = GrandCanonicalPoint::from_log_gap(&m, r, p.log_gap - h).unwrap();
            let dn = GrandCanonicalPoint::from_log_gap(&m, r, p.log_gap + h).unwrap();
            // d phi / d log_gap = -(c1 - phi)
            let drho_dphi = (up.rho - dn.rho) / (2.0 * h * p.log_gap.exp());
            assert!((var / (p.phi * drho_dphi) - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn sampler_degenerate_cases() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let zero = GrandCanonicalPoint::new(&m, 5, 0.0).unwrap();
        assert!((0..1000).all(|_| sample_marginal(&zero, &mut rng) == 0));
        let s = MarginalSampler::new(&GrandCanonicalPoint::new(&m, 0, 0.5).unwrap());
        // R = 0: pure geometric with ratio phi/c1 = 1/2, mean 1
        let mean = (0..200_000).map(|_| s.sample(&mut rng) as f64).sum::<f64>() / 200_000.0;
        assert!((mean - 1.0).abs() < 0.02);
    }

    #[test]
    fn bernoulli_tiny_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // p = 2^-40 * 0.75 via two rounds of scaling
        let lp = (0.75f64).ln() - 40.0 * std::f64::consts::LN_2;
        let n = 4_000_000;
        let hits = (0..n)
            .filter(|_| bernoulli_log(lp + 38.0 * std::f64::consts::LN_2, &mut rng))
            .count();
        // effective p = 0.75 / 4
        let p_hat = hits as f64 / n as f64;
        assert!((p_hat - 0.1875).abs() < 0.001);
        assert!(!bernoulli_log(f64::NEG_INFINITY, &mut rng));
        assert!(bernoulli_log(0.0, &mut rng));
    }
}
