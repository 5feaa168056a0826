use std::f64::consts::PI;

use proptest::prelude::*;

use cnse_core::diagnostics::{kato_integral, relative_energy};
use cnse_core::grid::{Grid, ScalarField, VectorField};
use cnse_core::reference::{family_manufactured, family_shear, DerivativePath, TravellingDensity};
use cnse_core::solver::snapshot::{read_trajectory, write_trajectory};
use cnse_core::solver::{energy_total, run, BcSpec, DensityProfile, InitialData, RunConfig, ShearProfile, State, Trajectory, VelocityProfile, DEFAULT_RHO_FLOOR};
use cnse_core::stress::{contract, stress_at};
use cnse_core::{GasModel, SlipLaw};

fn model(gamma: f64, mu: f64, eta: f64) -> GasModel {
    GasModel::new(1.0, gamma, mu, eta, SlipLaw::NoSlip).unwrap()
}

fn pulse_run(n: usize, amplitude: f64, bc: BcSpec, eps: f64, t: f64) -> (RunConfig, Trajectory) {
    let grid = match bc {
        BcSpec::Periodic => Grid::torus(n, 1.0).unwrap(),
        _ => Grid::channel(n, n, 1.0, 1.0).unwrap(),
    };
    let cfg = RunConfig {
        grid,
        model: model(1.4, 1.0, 1.0),
        bc,
        epsilon: eps,
        t_final: t,
        cfl: 0.4,
        snapshot_interval: t / 4.0,
        initial: InitialData {
            density: DensityProfile::Pulse { base: 1.0, amplitude, width: 0.15, center: [0.5, 0.5] },
            velocity: VelocityProfile::Cellular { amplitude: 0.1 },
        },
        rho_floor: DEFAULT_RHO_FLOOR,
    };
    let tr = run(&cfg).unwrap();
    (cfg, tr)
}

proptest! {
    #[test]
    fn relative_entropy_is_nonnegative(gamma in 1.05f64..3.0, rho in 0.0f64..10.0, r in 0.5f64..2.0) {
        let m = model(gamma, 1.0, 1.0);
        let h = m.h_relative(rho, r).unwrap();
        prop_assert!(h >= -1e-14 * m.h_unchecked(rho).max(1.0));
        prop_assert!(m.h_relative(r, r).unwrap().abs() <= 1e-14);
    }

    #[test]
    fn stress_is_symmetric_and_dissipative(
        g in prop::array::uniform2(prop::array::uniform2(-5.0f64..5.0)),
        mu in 0.0f64..3.0,
        eta in 0.0f64..3.0,
    ) {
        let m = model(1.4, mu, eta);
        let s = stress_at(&m, g);
        prop_assert_eq!(s[0][1], s[1][0]);
        prop_assert!(contract(s, g) >= -1e-12);
    }

    #[test]
    fn relative_energy_vanishes_on_the_reference(a in 0.05f64..0.4, speed in -1.0f64..1.0, t in 0.0f64..1.0) {
        let g = Grid::torus(24, 1.0).unwrap();
        let m = model(1.4, 1.0, 1.0);
        let fam = TravellingDensity { amplitude: a, mode: 1, speed, flux_speed: 0.3, cross: 0.2, cross_mode: 1, phase: 0.0, lx: 1.0 };
        let pair = family_manufactured(&fam, DerivativePath::Exact, &m, g, &[t]).unwrap();
        let f = &pair.frames[0];
        let mom = VectorField::from_components(
            f.r.zip_with(&f.w.component(0), |r, w| r * w),
            f.r.zip_with(&f.w.component(1), |r, w| r * w),
        ).unwrap();
        let s = State::new(f.r.clone(), mom, t, 0.0).unwrap();
        prop_assert!(relative_energy(&s, &m, f).unwrap().abs() <= 1e-14);
        let shifted = State::new(f.r.map(|r| 1.1 * r), s.mom.clone(), t, 0.0).unwrap();
        prop_assert!(relative_energy(&shifted, &m, f).unwrap() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn torus_runs_conserve_mass(amplitude in 0.0f64..0.3, eps in 0.0f64..0.05) {
        let (_, tr) = pulse_run(24, amplitude, BcSpec::Periodic, eps, 0.1);
        let m0 = tr.snapshots[0].state.mass();
        for s in &tr.snapshots {
            prop_assert!((s.state.mass() - m0).abs() <= 1e-12 * m0);
            prop_assert!(s.state.rho.min() > 0.0);
        }
    }

    #[test]
    fn kato_components_are_nonnegative_and_additive(eps in 1e-3f64..5e-2, lambda in 0.0f64..2.0) {
        let (cfg, tr) = pulse_run(16, 0.2, BcSpec::NavierSlip { lambda }, eps, 0.08);
        let whole = kato_integral(&tr, &cfg.model, None).unwrap();
        prop_assert!(whole.k_h >= 0.0 && whole.k_u >= 0.0 && whole.k_grad >= 0.0);
        let split = 2;
        let part = |range: std::ops::RangeInclusive<usize>| {
            let sub = Trajectory { snapshots: tr.snapshots[range].to_vec(), ..tr.clone() };
            kato_integral(&sub, &cfg.model, None).unwrap().total()
        };
        let sum = part(0..=split) + part(split..=tr.snapshots.len() - 1);
        prop_assert!((sum - whole.total()).abs() <= 1e-12 * whole.total().max(1e-300));
    }
}

#[test]
fn viscous_torus_energy_decreases() {
    let (cfg, tr) = pulse_run(32, 0.2, BcSpec::Periodic, 1e-2, 0.2);
    let e: Vec<f64> = tr.snapshots.iter().map(|s| energy_total(&s.state, &cfg.model)).collect();
    assert!(e.windows(2).all(|w| w[1] <= w[0]), "{e:?}");
}

#[test]
fn steady_shear_stays_close_to_its_reference() {
    // free slip keeps the cosine shear an exact solution up to viscous decay
    let cfg = RunConfig {
        grid: Grid::channel(8, 64, 1.0, 1.0).unwrap(),
        model: GasModel::new(1.0, 1.4, 1.0, 1.0, SlipLaw::free_slip()).unwrap(),
        bc: BcSpec::NavierSlip { lambda: 0.0 },
        epsilon: 1e-3,
        t_final: 0.2,
        cfl: 0.4,
        snapshot_interval: 0.1,
        initial: InitialData::shear(ShearProfile::Cosine, 1.0),
        rho_floor: DEFAULT_RHO_FLOOR,
    };
    let tr = run(&cfg).unwrap();
    let pair = family_shear(ShearProfile::Cosine, 1.0, 1.0, &cfg.model, cfg.grid, &tr.times()).unwrap();
    let last = tr.snapshots.last().unwrap();
    let e = relative_energy(&last.state, &cfg.model, pair.frames.last().unwrap()).unwrap();
    let decay = 1.0 - (-1e-3 * PI * PI * 0.2f64).exp();
    // E_rel ≈ ¼ (1 − e^{−επ²t})² for pure viscous decay
    assert!(e < 0.25 * decay * decay * 1.5 + 1e-7, "E_rel = {e:e}");
}

#[test]
fn snapshots_round_trip_through_files() {
    let (_, tr) = pulse_run(12, 0.1, BcSpec::NoSlip, 1e-2, 0.05);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.cnse");
    write_trajectory(&p, &tr).unwrap();
    let back = read_trajectory(&p).unwrap();
    assert_eq!(back.snapshots, tr.snapshots);
    assert_eq!(back.model, tr.model);
    assert_eq!(back.bc, tr.bc);
}

#[test]
fn rejects_inconsistent_states() {
    let g = Grid::channel(8, 8, 1.0, 1.0).unwrap();
    let other = Grid::torus(8, 1.0).unwrap();
    assert!(State::new(ScalarField::constant(g, 1.0), VectorField::zeros(other), 0.0, 0.0).is_err());
    assert!(State::new(ScalarField::constant(g, -1.0), VectorField::zeros(g), 0.0, 0.0).is_err());
    assert!(State::new(ScalarField::constant(g, 1.0), VectorField::zeros(g), 0.0, -1.0).is_err());
}
