use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zrp_core::ensemble_can::rho_trans;
use zrp_core::ensemble_gc::phi_inf;
use zrp_core::kmc_sim::*;
use zrp_core::stats::total_variation;
use zrp_core::{RateModel, ZrpError};

fn std_model() -> RateModel {
    RateModel::lattice(2.0, 1.0, 0.5).unwrap()
}

/// Time-weighted single-site occupation law over `events` jumps, pooled over sites.
fn occupation_law(
    state: &mut SimState,
    lattice: &Lattice,
    events: u64,
    seed: u64,
    k_max: usize,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = vec![0.0; k_max + 1];
    run_events(state, lattice, events, &mut rng, |s, dt| {
        for k in 0..=s.max_occupation().min(k_max as u64) {
            acc[k as usize] += dt * s.sites_with(k) as f64;
        }
    });
    let total: f64 = acc.iter().sum();
    acc.iter().map(|x| x / total).collect()
}

fn geometric(ratio: f64, k_max: usize) -> Vec<f64> {
    (0..=k_max)
        .map(|k| (1.0 - ratio) * ratio.powi(k as i32))
        .collect()
}

#[test]
fn fluid_occupations_are_geometric() {
    let m = std_model();
    let lat = Lattice::ring(50).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut s = init_state(50, 25, &m, InitPhase::Fluid, &mut rng).unwrap();
    let law = occupation_law(&mut s, &lat, 10_000_000, 32, 25);
    let phi = phi_inf(0.5, &m);
    let tv = total_variation(&law, &geometric(phi / m.c0(), 25));
    assert!(tv <= 0.02, "TV = {tv}");
}

#[test]
fn kernel_does_not_change_the_stationary_law() {
    let m = std_model();
    let sym = Lattice::ring(20).unwrap();
    let tasep = Lattice::new(Topology::Ring { size: 20 }, Kernel::TotallyAsymmetric).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let start = init_state(20, 16, &m, InitPhase::Fluid, &mut rng).unwrap();
    let a = occupation_law(&mut start.clone(), &sym, 4_000_000, 42, 10);
    let b = occupation_law(&mut start.clone(), &tasep, 4_000_000, 43, 10);
    let tv = total_variation(&a, &b);
    assert!(tv < 0.01, "TV = {tv}");
}

fn event_bytes(seed: u64) -> Vec<u8> {
    let m = std_model();
    let lat = Lattice::ring(30).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = init_state(30, 60, &m, InitPhase::Uniform, &mut rng).unwrap();
    let mut w = EventWriter::new(Vec::new());
    for _ in 0..50_000 {
        w.write(&step(&mut s, &lat, &mut rng)).unwrap();
    }
    w.finish().unwrap()
}

#[test]
fn identical_seeds_give_identical_event_streams() {
    let a = event_bytes(7);
    assert_eq!(a, event_bytes(7));
    assert_ne!(a, event_bytes(8));
    let events = read_events(&a[..]).unwrap();
    assert_eq!(events.len(), 50_000);
    assert!(events.windows(2).all(|w| w[1].time > w[0].time));
}

#[test]
fn single_particle_hops_at_rate_c0() {
    let m = std_model();
    let lat = Lattice::ring(2).unwrap();
    let mut s = SimState::from_occupations(vec![1, 0], &m).unwrap();
    assert_eq!(s.total_rate(), 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut site = 0;
    let n = 200_000;
    for _ in 0..n {
        let e = step(&mut s, &lat, &mut rng);
        assert_eq!(e.source as usize, site);
        site = 1 - site;
    }
    let mean = s.time / n as f64;
    assert!((mean - 0.5).abs() < 0.005, "mean = {mean}");
}

#[test]
fn background_density_in_each_phase() {
    let m = std_model();
    let mut rng = ChaCha8Rng::seed_from_u64(51);

    let lat = Lattice::ring(200).unwrap();
    let mut fluid = init_state(200, 100, &m, InitPhase::Fluid, &mut rng).unwrap();
    let tr = trajectory_observables(&mut fluid, &lat, 2_000.0, 1.0, &mut rng).unwrap();
    assert!(
        (tr.mean_sigma_bg_per_l() - 0.5).abs() < 0.05,
        "{}",
        tr.mean_sigma_bg_per_l()
    );

    let lat = Lattice::ring(100).unwrap();
    let mut cond = init_state(100, 300, &m, InitPhase::Condensed, &mut rng).unwrap();
    let tr = trajectory_observables(&mut cond, &lat, 20_000.0, 1.0, &mut rng).unwrap();
    assert!(tr.b.iter().all(|&b| b >= 1), "condensate dissolved");
    assert!(
        (tr.mean_sigma_bg_per_l() - 1.0).abs() < 0.1,
        "{}",
        tr.mean_sigma_bg_per_l()
    );
}

#[test]
fn hitting_time_regimes() {
    let m = std_model();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    // below rho_c + a the fluid never builds a large site in practice
    let lat = Lattice::ring(40).unwrap();
    let mut s = init_state(40, 48, &m, InitPhase::Fluid, &mut rng).unwrap();
    let h = run_to_hit(&mut s, &lat, HitTarget::FluidExit, 1e4, &mut rng).unwrap();
    assert!(h.censored && h.time == 1e4);
    // and a condensed start must be rejected for a fluid exit
    let mut c = init_state(40, 120, &m, InitPhase::Condensed, &mut rng).unwrap();
    assert!(matches!(
        run_to_hit(&mut c, &lat, HitTarget::FluidExit, 1.0, &mut rng),
        Err(ZrpError::BadInitial(_))
    ));
    // just above rho_meta the condensate is barely stable
    let lat = Lattice::ring(60).unwrap();
    let times: Vec<f64> = (0..20)
        .map(|_| {
            let mut c = init_state(60, 93, &m, InitPhase::Condensed, &mut rng).unwrap();
            run_to_hit(&mut c, &lat, HitTarget::CondExit, 1e7, &mut rng)
                .unwrap()
                .time
        })
        .collect();
    let mean = times.iter().sum::<f64>() / 20.0;
    assert!(mean < 1e3, "mean condensed lifetime {mean}");
}

#[test]
fn condensate_outlives_fluid_at_the_transition() {
    let m = std_model();
    let rho = rho_trans(&m);
    let spec = SweepSpec {
        sizes: vec![24],
        rho,
        replicas: 40,
        t_max: 1e9,
        seed: 3,
    };
    let fluid = &lifetime_sweep(&spec, &m, HitTarget::FluidExit).unwrap()[0];
    let cond = &lifetime_sweep(&spec, &m, HitTarget::CondExit).unwrap()[0];
    assert_eq!(fluid.censored_fraction(), 0.0);
    assert!(cond.mean_stderr().0 > fluid.mean_stderr().0);
}
