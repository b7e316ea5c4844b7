use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zrp_core::ensemble_gc::*;
use zrp_core::RateModel;

fn std_model() -> RateModel {
    RateModel::lattice(2.0, 1.0, 0.5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_increases_with_fugacity(c1 in 0.1f64..2.0, ratio in 1.05f64..5.0, r in 0u64..120) {
        let m = RateModel::lattice(c1 * ratio, c1, 0.5).unwrap();
        let mut prev = -1.0;
        for i in 0..100 {
            let phi = c1 * i as f64 / 100.0;
            let now = rho(phi, r, &m).unwrap();
            prop_assert!(now > prev, "rho not increasing at phi = {}", phi);
            prev = now;
        }
    }

    #[test]
    fn inversion_roundtrip(c1 in 0.1f64..2.0, ratio in 1.05f64..5.0, r in 0u64..200, frac in 0.1f64..0.99) {
        let m = RateModel::lattice(c1 * ratio, c1, 0.5).unwrap();
        let phi = frac * c1;
        let target = rho(phi, r, &m).unwrap();
        let p = invert_phi(target, r, &m).unwrap();
        prop_assert!((p.phi - phi).abs() <= 1e-8, "{} vs {}", p.phi, phi);
        prop_assert!((p.rho - target).abs() <= 1e-10 * target.max(1.0));
    }

    #[test]
    fn inversion_meets_density_tolerance(rho_t in 0.0f64..50.0, r in 0u64..300) {
        let m = std_model();
        let p = invert_phi(rho_t, r, &m).unwrap();
        prop_assert!(p.phi >= 0.0 && p.phi <= 1.0);
        prop_assert!((p.rho - rho_t).abs() <= 1e-10 * rho_t.max(1.0), "{} vs {}", p.rho, rho_t);
    }

    #[test]
    fn legendre_duality_random(c1 in 0.1f64..2.0, ratio in 1.05f64..5.0, r in 0.001f64..30.0) {
        let m = RateModel::lattice(c1 * ratio, c1, 0.5).unwrap();
        let phi = phi_inf(r, &m);
        let dual = p_fluid(phi, &m).unwrap() - r * phi.ln();
        prop_assert!((s_fluid(r, &m) - dual).abs() < 1e-10);
    }
}

#[test]
fn marginal_converges_pointwise() {
    let m = std_model();
    let phi = 0.9;
    let z_inf = 2.0 / (2.0 - phi);
    let dist = |r: u64| {
        let p = GrandCanonicalPoint::new(&m, r, phi).unwrap();
        (0..=20u64)
            .map(|k| (p.log_pmf(k).exp() - (phi / 2.0f64).powi(k as i32) / z_inf).abs())
            .fold(0.0, f64::max)
    };
    let d: Vec<f64> = [5, 10, 20, 40].iter().map(|&r| dist(r)).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    assert!(d[3] < 1e-6);
}

#[test]
fn fugacity_approaches_its_limit() {
    let m = std_model();
    for rho_t in [0.5, 1.0, 2.0] {
        let limit = if rho_t < 1.0 { phi_inf(rho_t, &m) } else { 1.0 };
        let err: Vec<f64> = [10, 20, 40, 80]
            .iter()
            .map(|&r| {
                let p = invert_phi(rho_t, r, &m).unwrap();
                // distance to c1 is the gap itself, exact even below f64 resolution
                if rho_t < 1.0 {
                    (p.phi - limit).abs()
                } else {
                    p.log_gap.exp()
                }
            })
            .collect();
        // strictly decreasing until the difference vanishes at f64 resolution
        assert!(
            err.windows(2).all(|w| w[1] < w[0] || w[1] == 0.0),
            "rho {rho_t}: {err:?}"
        );
    }
}

#[test]
fn variance_blows_up_above_criticality() {
    let m = std_model();
    let p = invert_phi(2.0, 80, &m).unwrap();
    let (_, var) = p.moments();
    let rate = var.ln() / 80.0;
    let expected = 0.5 * 2f64.ln();
    assert!((rate / expected - 1.0).abs() < 0.10, "{rate} vs {expected}");
}

#[test]
fn sampler_matches_exact_probabilities() {
    let m = std_model();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // R = 5 keeps the tail heavy enough to be tested directly
    let p = invert_phi(2.0, 5, &m).unwrap();
    let s = MarginalSampler::new(&p);
    let n = 1_000_000usize;
    let mut hist = vec![0usize; 51];
    let mut over = 0usize;
    for _ in 0..n {
        let k = s.sample(&mut rng);
        if k <= 50 {
            hist[k as usize] += 1;
        } else {
            over += 1;
        }
    }
    let mut chi2 = 0.0;
    let mut cells = 0;
    let mut p_over = 1.0;
    for (k, &h) in hist.iter().enumerate() {
        let pk = p.log_pmf(k as u64).exp();
        p_over -= pk;
        let e = pk * n as f64;
        if e >= 5.0 {
            chi2 += (h as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    let e = p_over * n as f64;
    chi2 += (over as f64 - e).powi(2) / e;
    cells += 1;
    // 99.9% quantile of chi^2 with < 60 dof is below 100
    assert!(chi2 < 100.0, "chi2 = {chi2} over {cells} cells");
}

#[test]
fn sampler_mean_below_criticality() {
    let m = std_model();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = invert_phi(0.5, 30, &m).unwrap();
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n)
        .map(|_| sample_marginal(&p, &mut rng) as f64)
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let (_, var) = p.moments();
    assert!(
        (mean - 0.5).abs() < 3.0 * (var / n as f64).sqrt(),
        "mean {mean}"
    );
}

#[test]
fn law_of_large_numbers_dichotomy() {
    let m = std_model();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let l = 10_000;
    for (rho_t, expected) in [(0.5, 0.5), (2.0, 1.0)] {
        let p = invert_phi(rho_t, 60, &m).unwrap();
        let s = MarginalSampler::new(&p);
        for _ in 0..10 {
            let mean = (0..l).map(|_| s.sample(&mut rng) as f64).sum::<f64>() / l as f64;
            assert!(
                (mean - expected).abs() < 0.06,
                "rho {rho_t}: batch mean {mean}"
            );
        }
    }
}
