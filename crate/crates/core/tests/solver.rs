use std::f64::consts::TAU;

use jetmodes::field::{Grid2D, ScalarField};
use jetmodes::jet::{build_initial_conditions, preset, JetConfig};
use jetmodes::solver::{poisson_streamfunction, run_collect, SimConfig, Solver, Spectral2D};
use jetmodes::Error;

fn grid(n: usize) -> Grid2D {
    Grid2D::new(n, TAU).unwrap()
}

fn field(g: Grid2D, f: impl Fn(f64, f64) -> f64) -> ScalarField {
    ScalarField::from_fn(g, f).unwrap()
}

fn small_jet(case: u32) -> JetConfig {
    JetConfig { n: 64, ..preset(case).unwrap() }
}

#[test]
fn init_state_vorticity_of_shear() {
    let g = grid(32);
    let mut s = Solver::new(&g, SimConfig::default()).unwrap();
    let st = s
        .init_state(&field(g, |_, y| y.sin()), &ScalarField::zeros(g), &ScalarField::zeros(g))
        .unwrap();
    let w = s.spectral().inverse(&st.omega_hat);
    for ((i, _), v) in w.indexed_iter() {
        let y = i as f64 * g.dx();
        assert!((v + y.cos()).abs() < 1e-10);
    }
    assert_eq!(st.time, 0.0);

    let z = s
        .init_state(&ScalarField::zeros(g), &ScalarField::zeros(g), &ScalarField::zeros(g))
        .unwrap();
    assert!(z.omega_hat.iter().all(|c| c.norm() == 0.0));
}

#[test]
fn init_state_scalar_round_trip() {
    let jet = small_jet(1);
    let ic = build_initial_conditions(&jet).unwrap();
    let g = jet.grid().unwrap();
    let mut s = Solver::new(&g, SimConfig::default()).unwrap();
    let st = s.init_state(&ic.u, &ic.v, &ic.scalar).unwrap();
    let back = s.scalar(&st);
    let err = back
        .iter()
        .zip(ic.scalar.values().iter())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err < 1e-12, "{err:e}");
}

#[test]
fn init_state_rejects_mixed_grids() {
    let (a, b) = (grid(16), grid(32));
    let mut s = Solver::new(&a, SimConfig::default()).unwrap();
    let r = s.init_state(&ScalarField::zeros(a), &ScalarField::zeros(b), &ScalarField::zeros(a));
    assert!(matches!(r, Err(Error::Dimension(_))));
}

#[test]
fn poisson_single_modes() {
    let g = grid(32);
    let mut sp = Spectral2D::new(&g);
    for (f, scale) in [
        (Box::new(|x: f64, _: f64| x.sin()) as Box<dyn Fn(f64, f64) -> f64>, 1.0),
        (Box::new(|_: f64, y: f64| (2.0 * y).sin()), 0.25),
        (Box::new(|_: f64, _: f64| 0.0), 0.0),
    ] {
        let w = field(g, &f);
        let psi_hat = poisson_streamfunction(&g, &sp.forward(w.values()));
        let psi = sp.inverse(&psi_hat);
        for (p, wv) in psi.iter().zip(w.values().iter()) {
            assert!((p - scale * wv).abs() < 1e-12);
        }
    }
}

#[test]
fn taylor_green_energy_decay() {
    let g = grid(64);
    let nu = 0.01;
    let cfg = SimConfig { dt: Some(0.01), ..Default::default() };
    let mut s = Solver::with_coefficients(&g, cfg, nu, nu);
    let u = field(g, |x, y| x.sin() * y.cos());
    let v = field(g, |x, y| -x.cos() * y.sin());
    let mut st = s.init_state(&u, &v, &ScalarField::zeros(g)).unwrap();
    let e0 = s.kinetic_energy(&st);
    assert!((e0 - 0.25).abs() < 1e-12);
    for _ in 0..100 {
        st = s.step(&st).unwrap();
    }
    let expect = e0 * (-4.0 * nu * st.time).exp();
    let rel = (s.kinetic_energy(&st) - expect).abs() / expect;
    assert!(rel < 1e-6, "relative error {rel:e}");
}

#[test]
fn still_fluid_without_diffusion_is_frozen() {
    let g = grid(32);
    let cfg = SimConfig { dt: Some(0.05), dealias: false, ..Default::default() };
    let mut s = Solver::with_coefficients(&g, cfg, 0.0, 0.0);
    let c = field(g, |x, y| (x * y).sin() + (3.0 * x).cos());
    let st0 = s.init_state(&ScalarField::zeros(g), &ScalarField::zeros(g), &c).unwrap();
    let mut st = st0.clone();
    for _ in 0..10 {
        st = s.step(&st).unwrap();
    }
    assert_eq!(st.omega_hat, st0.omega_hat);
    assert_eq!(st.scalar_hat, st0.scalar_hat);
}

#[test]
fn uniform_scalar_stays_uniform() {
    let jet = small_jet(1);
    let ic = build_initial_conditions(&jet).unwrap();
    let g = jet.grid().unwrap();
    let mut s = Solver::new(&g, SimConfig::default()).unwrap();
    let ones = field(g, |_, _| 1.0);
    let mut st = s.init_state(&ic.u, &ic.v, &ones).unwrap();
    for _ in 0..20 {
        st = s.step(&st).unwrap();
    }
    assert!(s.scalar(&st).iter().all(|c| (c - 1.0).abs() < 1e-12));
}

#[test]
fn jet_run_invariants() {
    let jet = small_jet(1);
    let ic = build_initial_conditions(&jet).unwrap();
    let g = jet.grid().unwrap();
    let mut s = Solver::new(&g, SimConfig::default()).unwrap();
    let mut st = s.init_state(&ic.u, &ic.v, &ic.scalar).unwrap();
    let mean0 = ic.scalar.mean();
    let mut energy = s.kinetic_energy(&st);
    for _ in 0..150 {
        st = s.step(&st).unwrap();
        assert!(s.max_divergence(&st) < 1e-12);
        let mean = s.scalar(&st).mean().unwrap();
        assert!((mean - mean0).abs() < 1e-10);
        let e = s.kinetic_energy(&st);
        assert!(e <= energy + 1e-12, "energy rose from {energy} to {e}");
        energy = e;
    }
}

#[test]
fn collect_thirty_snapshots() {
    let jet = small_jet(2);
    let ic = build_initial_conditions(&jet).unwrap();
    let g = jet.grid().unwrap();
    let cfg = SimConfig { n_steps: 160, ..Default::default() };
    let st0 = Solver::new(&g, cfg).unwrap().init_state(&ic.u, &ic.v, &ic.scalar).unwrap();
    let run = run_collect(&cfg, &st0).unwrap();
    assert_eq!(run.snapshots.cols(), 30);
    assert_eq!(run.snapshots.rows(), 64 * 64);
    assert_eq!(run.snapshots.dt_snap(), 5.0 * run.dt);
    assert_eq!(run.times.len(), 30);
    assert!((run.times[29] - 160.0 * run.dt).abs() < 1e-9);
    assert!((run.times[0] - 15.0 * run.dt).abs() < 1e-9);

    let again = run_collect(&cfg, &st0).unwrap();
    assert_eq!(run.snapshots.data(), again.snapshots.data());
}

#[test]
fn collect_two_snapshots() {
    let jet = small_jet(1);
    let ic = build_initial_conditions(&jet).unwrap();
    let g = jet.grid().unwrap();
    let cfg = SimConfig { n_steps: 12, collect_count: 2, ..Default::default() };
    let st0 = Solver::new(&g, cfg).unwrap().init_state(&ic.u, &ic.v, &ic.scalar).unwrap();
    let run = run_collect(&cfg, &st0).unwrap();
    assert_eq!(run.snapshots.cols(), 2);
}

#[test]
fn unstable_step_reports_divergence() {
    let jet = small_jet(1);
    let ic = build_initial_conditions(&jet).unwrap();
    let g = jet.grid().unwrap();
    let cfg = SimConfig { dt: Some(500.0), n_steps: 400, collect_count: 2, ..Default::default() };
    let st0 = Solver::new(&g, cfg).unwrap().init_state(&ic.u, &ic.v, &ic.scalar).unwrap();
    match run_collect(&cfg, &st0) {
        Err(Error::Divergence { step, .. }) => assert!(step >= 1),
        other => panic!("expected divergence, got {:?}", other.map(|r| r.snapshots.cols())),
    }
}

#[test]
fn invalid_config_rejected() {
    let g = grid(16);
    for cfg in [
        SimConfig { re: 0.0, ..Default::default() },
        SimConfig { dt: Some(-1.0), ..Default::default() },
        SimConfig { snapshot_interval: 0, ..Default::default() },
        SimConfig { collect_count: 1, ..Default::default() },
        SimConfig { n_steps: 10, ..Default::default() },
    ] {
        assert!(matches!(Solver::new(&g, cfg), Err(Error::Config(_))));
    }
}
