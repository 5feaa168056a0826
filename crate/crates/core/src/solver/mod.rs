//! Explicit finite-volume integration of the barotropic Navier-Stokes system
//! `ρ_t + div(ρu) = 0`, `(ρu)_t + div(ρu⊗u) + ∇p = div(εσ(∇u))`.
//!
//! Time stepping is SSP-RK2. `ε = 0` gives the Euler system used for references.

pub mod bc;
pub mod energy;
pub mod initial;
mod scheme;
pub mod snapshot;

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField, VectorField};
use crate::quadrature::{integrate, Region};
use crate::thermo::GasModel;

pub use bc::{apply_bc, wall_record, wall_velocity, BcSpec, GhostCells, WallRecord, WallVelocity};
pub use energy::{energy_balance_residual, energy_total, weak_form_residual, BalanceSeries, WeakResidual};
pub use initial::{DensityProfile, InitialData, ShearProfile, VelocityProfile};

pub const DEFAULT_RHO_FLOOR: f64 = 1e-10;

/// Conserved variables at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub grid: Grid,
    pub rho: ScalarField,
    /// Momentum `m = ρu`.
    pub mom: VectorField,
    pub time: f64,
    pub epsilon: f64,
}

impl State {
    pub fn new(rho: ScalarField, mom: VectorField, time: f64, epsilon: f64) -> Result<Self> {
        if rho.grid != mom.grid {
            return Err(Error::GridMismatch);
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be finite and nonnegative, got {epsilon}")));
        }
        if !rho.is_finite() || !mom.is_finite() {
            return Err(Error::BlowUp { time, reason: "non-finite values in state".into() });
        }
        if rho.min() < 0.0 {
            return Err(Error::Domain("negative density in state".into()));
        }
        Ok(State { grid: rho.grid, rho, mom, time, epsilon })
    }

    /// Velocity `m/ρ`, set to zero where `ρ ≤ ρ_floor`.
    pub fn velocity(&self) -> VectorField {
        let (x, y) = scheme::primitives(&self.rho.data, &self.mom.x, &self.mom.y, DEFAULT_RHO_FLOOR);
        VectorField { grid: self.grid, x, y }
    }

    pub fn mass(&self) -> f64 {
        integrate(&self.rho, Region::All).expect("whole-domain integral")
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.mom.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub model: GasModel,
    pub bc: BcSpec,
    pub epsilon: f64,
    pub t_final: f64,
    pub cfl: f64,
    /// Time between stored snapshots; the final time is always stored.
    pub snapshot_interval: f64,
    pub initial: InitialData,
    pub rho_floor: f64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.bc.validate(&self.grid)?;
        let bad = |m: String| Err(Error::Config(m));
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be finite and nonnegative, got {}", self.epsilon));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final must be finite and nonnegative, got {}", self.t_final));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return bad(format!("cfl must lie in (0, 0.9], got {}", self.cfl));
        }
        if !(self.snapshot_interval > 0.0 && self.snapshot_interval.is_finite()) {
            return bad(format!("snapshot_interval must be positive, got {}", self.snapshot_interval));
        }
        if !(self.rho_floor > 0.0 && self.rho_floor < 1e-3) {
            return bad(format!("rho_floor must lie in (0, 1e-3), got {}", self.rho_floor));
        }
        self.initial.validate(&self.grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub state: State,
    /// Present for channel runs.
    pub walls: Option<WallRecord>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    /// Cells lifted to `ρ_floor` over the run (stage-level count).
    pub floor_activations: usize,
    /// How many of those had `ρ < 0` before flooring.
    pub negative_density: usize,
    pub min_dt: f64,
    pub max_dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: GasModel,
    pub bc: BcSpec,
    pub snapshots: Vec<Snapshot>,
    pub stats: RunStats,
}

impl Trajectory {
    pub fn grid(&self) -> Grid {
        self.snapshots[0].state.grid
    }

    pub fn epsilon(&self) -> f64 {
        self.snapshots[0].state.epsilon
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.state.time).collect()
    }

    /// Wall velocity of snapshot `k`, from the stored record when present and
    /// otherwise by quadratic extrapolation.
    pub fn wall_velocity_at(&self, k: usize) -> Option<WallVelocity> {
        let s = &self.snapshots[k];
        let g = s.state.grid;
        if !g.has_walls() {
            return None;
        }
        Some(match &s.walls {
            Some(rec) => rec.velocity(&g),
            None => extrapolated_walls(&s.state.velocity()),
        })
    }

    /// Builds a trajectory from given states, filling wall records from `bc`.
    pub fn from_states(model: GasModel, bc: BcSpec, states: Vec<State>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Config("a trajectory needs at least one state".into()));
        }
        let snapshots = states
            .into_iter()
            .map(|state| {
                let walls = wall_record(&state, &model, &bc)?;
                Ok(Snapshot { state, walls })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory { model, bc, snapshots, stats: RunStats::default() })
    }
}

pub(crate) fn extrapolated_walls(u: &VectorField) -> WallVelocity {
    use crate::grid::Wall;
    use crate::ops::{wall_extrapolate, WallValues};
    let g = &u.grid;
    WallVelocity {
        u: WallValues { bottom: wall_extrapolate(&u.x, g, Wall::Bottom), top: wall_extrapolate(&u.x, g, Wall::Top) },
        v: WallValues::zeros(g),
    }
}

/// Largest stable step for `state`: the acoustic and viscous limits times `cfl`.
pub fn stable_dt(state: &State, model: &GasModel, cfl: f64) -> f64 {
    let g = &state.grid;
    let (hx, hy) = (g.hx(), g.hy());
    let vel = state.velocity();
    let mut acoustic = 0.0_f64;
    let mut rho_min = f64::INFINITY;
    for k in 0..g.len() {
        let r = state.rho.data[k];
        let c = model.sound_speed(r);
        acoustic = acoustic.max((vel.x[k].abs() + c) / hx + (vel.y[k].abs() + c) / hy);
        rho_min = rho_min.min(r);
    }
    let mut dt = if acoustic > 0.0 { cfl / acoustic } else { f64::INFINITY };
    if state.epsilon > 0.0 {
        let nu = (7.0 / 3.0 * model.mu + model.eta) / rho_min.max(DEFAULT_RHO_FLOOR);
        dt = dt.min(cfl / (2.0 * state.epsilon * nu * (1.0 / (hx * hx) + 1.0 / (hy * hy))));
    }
    dt
}

struct FloorCount {
    activations: usize,
    negative: usize,
}

fn floor_density(rho: &mut [f64], floor: f64, count: &mut FloorCount) {
    for r in rho.iter_mut() {
        if *r < floor {
            count.activations += 1;
            if *r < 0.0 {
                count.negative += 1;
            }
            *r = floor;
        }
    }
}

fn ssp_rk2(state: &State, model: &GasModel, bc: &BcSpec, dt: f64, floor: f64, count: &mut FloorCount) -> Result<State> {
    let g = state.grid;
    let eps = state.epsilon;
    let (r0, a0, b0) = (&state.rho.data, &state.mom.x, &state.mom.y);
    let l0 = scheme::rates(&g, model, bc, eps, floor, r0, a0, b0);
    let stage = |q: &[f64], d: &[f64]| q.iter().zip(d).map(|(a, b)| a + dt * b).collect::<Vec<_>>();
    let mut r1 = stage(r0, &l0.rho);
    floor_density(&mut r1, floor, count);
    let a1 = stage(a0, &l0.m1);
    let b1 = stage(b0, &l0.m2);
    let l1 = scheme::rates(&g, model, bc, eps, floor, &r1, &a1, &b1);
    let combine = |q0: &[f64], q1: &[f64], d: &[f64]| {
        q0.iter().zip(q1).zip(d).map(|((a, b), c)| 0.5 * a + 0.5 * (b + dt * c)).collect::<Vec<_>>()
    };
    let mut r2 = combine(r0, &r1, &l1.rho);
    floor_density(&mut r2, floor, count);
    let a2 = combine(a0, &a1, &l1.m1);
    let b2 = combine(b0, &b1, &l1.m2);
    let time = state.time + dt;
    let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
    if !(finite(&r2) && finite(&a2) && finite(&b2)) {
        return Err(Error::BlowUp { time, reason: "non-finite conserved variables".into() });
    }
    Ok(State {
        grid: g,
        rho: ScalarField { grid: g, data: r2 },
        mom: VectorField { grid: g, x: a2, y: b2 },
        time,
        epsilon: eps,
    })
}

/// Advances `state` by one SSP-RK2 step of size `dt`.
pub fn step(state: &State, model: &GasModel, bc: &BcSpec, dt: f64) -> Result<State> {
    let mut count = FloorCount { activations: 0, negative: 0 };
    ssp_rk2(state, model, bc, dt, DEFAULT_RHO_FLOOR, &mut count)
}

/// Integrates `config` to `t_final`, storing snapshots at multiples of the
/// snapshot interval and at the final time.
pub fn run(config: &RunConfig) -> Result<Trajectory> {
    config.validate()?;
    let model = config.model;
    let bc = config.bc;
    let mut state = config.initial.build(config.grid, config.epsilon)?;
    let mut snapshots = vec![Snapshot { walls: wall_record(&state, &model, &bc)?, state: state.clone() }];
    let mut stats = RunStats { min_dt: f64::INFINITY, ..RunStats::default() };
    let mut count = FloorCount { activations: 0, negative: 0 };
    let t_final = config.t_final;
    let tol = 1e-12 * t_final.max(1.0);
    let mut k_next = 1usize;
    while state.time < t_final - tol {
        let target = (k_next as f64 * config.snapshot_interval).min(t_final);
        let mut dt = stable_dt(&state, &model, config.cfl);
        if !(dt.is_finite() && dt > 0.0) {
            // a motionless, inviscid state with zero sound speed cannot occur for ρ > 0
            dt = target - state.time;
        }
        let hit = state.time + dt >= target - tol;
        if hit {
            dt = target - state.time;
        }
        let mut next = ssp_rk2(&state, &model, &bc, dt, config.rho_floor, &mut count)?;
        stats.steps += 1;
        stats.min_dt = stats.min_dt.min(dt);
        stats.max_dt = stats.max_dt.max(dt);
        if hit {
            next.time = target;
            snapshots.push(Snapshot { walls: wall_record(&next, &model, &bc)?, state: next.clone() });
            if target < t_final {
                k_next += 1;
            }
        }
        state = next;
    }
    stats.floor_activations = count.activations;
    stats.negative_density = count.negative;
    if stats.steps == 0 {
        stats.min_dt = 0.0;
    }
    Ok(Trajectory { model, bc, snapshots, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::SlipLaw;

    fn model() -> GasModel {
        GasModel::new(1.0, 1.4, 1.0, 1.0, SlipLaw::NoSlip).unwrap()
    }

    fn config(grid: Grid, bc: BcSpec, eps: f64, initial: InitialData, t: f64) -> RunConfig {
        RunConfig {
            grid,
            model: model(),
            bc,
            epsilon: eps,
            t_final: t,
            cfl: 0.4,
            snapshot_interval: 0.05,
            initial,
            rho_floor: DEFAULT_RHO_FLOOR,
        }
    }

    #[test]
    fn rest_state_is_a_fixed_point() {
        for (g, bc) in [
            (Grid::torus(16, 1.0).unwrap(), BcSpec::Periodic),
            (Grid::channel(16, 16, 1.0, 1.0).unwrap(), BcSpec::NoSlip),
            (Grid::channel(16, 16, 1.0, 1.0).unwrap(), BcSpec::NavierSlip { lambda: 0.3 }),
        ] {
            let s = InitialData::rest(1.0).build(g, 1e-2).unwrap();
            let n = step(&s, &model(), &bc, 1e-3).unwrap();
            for k in 0..g.len() {
                assert!((n.rho.data[k] - 1.0).abs() < 1e-14);
                assert!(n.mom.x[k].abs() < 1e-14 && n.mom.y[k].abs() < 1e-14);
            }
        }
    }

    #[test]
    fn uniform_flow_is_steady_on_torus() {
        let g = Grid::torus(16, 1.0).unwrap();
        let init = InitialData { density: DensityProfile::Uniform(1.3), velocity: VelocityProfile::Uniform([0.4, -0.2]) };
        let tr = run(&config(g, BcSpec::Periodic, 0.0, init, 0.1)).unwrap();
        let last = &tr.snapshots.last().unwrap().state;
        for k in 0..g.len() {
            assert!((last.rho.data[k] - 1.3).abs() < 1e-12);
            assert!((last.mom.x[k] - 1.3 * 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_final_time_gives_initial_snapshot() {
        let g = Grid::torus(8, 1.0).unwrap();
        let tr = run(&config(g, BcSpec::Periodic, 0.0, InitialData::rest(1.0), 0.0)).unwrap();
        assert_eq!(tr.snapshots.len(), 1);
        assert_eq!(tr.stats.steps, 0);
    }

    #[test]
    fn snapshots_land_on_the_cadence() {
        let g = Grid::channel(16, 16, 1.0, 1.0).unwrap();
        let init = InitialData::shear(ShearProfile::Sine, 1.0);
        let tr = run(&config(g, BcSpec::NoSlip, 1e-2, init, 0.12)).unwrap();
        let t = tr.times();
        assert_eq!(t, vec![0.0, 0.05, 0.1, 0.12]);
        assert!(tr.snapshots.iter().all(|s| s.walls.is_some()));
    }

    #[test]
    fn mass_is_conserved() {
        let g = Grid::channel(24, 24, 1.0, 1.0).unwrap();
        let init = InitialData {
            density: DensityProfile::Pulse { base: 1.0, amplitude: 0.1, width: 0.15, center: [0.5, 0.5] },
            velocity: VelocityProfile::Cellular { amplitude: 0.2 },
        };
        let tr = run(&config(g, BcSpec::NavierSlip { lambda: 0.1 }, 1e-2, init, 0.2)).unwrap();
        let m0 = tr.snapshots[0].state.mass();
        for s in &tr.snapshots {
            assert!(((s.state.mass() - m0) / m0).abs() < 1e-12);
        }
        assert_eq!(tr.stats.floor_activations, 0);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let g = Grid::torus(8, 1.0).unwrap();
        let mut c = config(g, BcSpec::Periodic, 0.0, InitialData::rest(1.0), 1.0);
        c.cfl = 0.95;
        assert!(run(&c).is_err());
        c.cfl = 0.4;
        c.bc = BcSpec::NoSlip;
        assert!(run(&c).is_err());
        c.bc = BcSpec::Periodic;
        c.t_final = -1.0;
        assert!(run(&c).is_err());
    }
}
