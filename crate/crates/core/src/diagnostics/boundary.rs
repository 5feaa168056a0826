//! Boundary-layer functionals: the strip integral, the wall-stress pairing and
//! the one-sided vorticity defect.

use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::ops::velocity_gradient;
use crate::quadrature::{cumulative_trapezoid, integrate, trapezoid, Region};
use crate::reference::{fake_layer, TestPair};
use crate::solver::energy::{momentum_integrand, wall_pairing};
use crate::solver::{wall_record, State, Trajectory, WallRecord, WallVelocity};
use crate::stress::wall_vorticity;
use crate::thermo::GasModel;

#[derive(Debug, Clone, PartialEq)]
pub struct KatoIntegral {
    pub times: Vec<f64>,
    /// `∫_{d≤δ} H(ρ)` per snapshot.
    pub h_series: Vec<f64>,
    /// `ε∫_{d≤δ} ρ|u|²/d²` per snapshot.
    pub u_series: Vec<f64>,
    /// `ε∫_{d≤δ} |∇u|²` per snapshot.
    pub grad_series: Vec<f64>,
    pub k_h: f64,
    pub k_u: f64,
    pub k_grad: f64,
}

impl KatoIntegral {
    pub fn total(&self) -> f64 {
        self.k_h + self.k_u + self.k_grad
    }
}

/// Time integral over the strip `d ≤ width` (default `ε`) of
/// `H(ρ) + ερ|u|²/d² + ε|∇u|²`, with `d` taken at cell centres.
pub fn kato_integral(traj: &Trajectory, model: &GasModel, width: Option<f64>) -> Result<KatoIntegral> {
    let g = traj.grid();
    g.require_channel("kato_integral")?;
    let eps = traj.epsilon();
    let region = Region::Strip(width.unwrap_or(eps));
    let times = traj.times();
    let n = times.len();
    let (mut hs, mut us, mut gs) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let s = &snap.state;
        let u = s.velocity();
        let walls = traj.wall_velocity_at(k);
        let grad = velocity_gradient(&u, walls.as_ref().map(|w| w.pair()));
        let h = s.rho.map(|r| model.h_unchecked(r));
        let mut q = ScalarField::zeros(g);
        for j in 0..g.ny {
            let d = g.wall_distance_row(j);
            for i in 0..g.nx {
                let c = g.idx(i, j);
                q.data[c] = eps * s.rho.data[c] * (u.x[c] * u.x[c] + u.y[c] * u.y[c]) / (d * d);
            }
        }
        let gn = grad.norm_sq().map(|v| eps * v);
        hs.push(integrate(&h, region)?);
        us.push(integrate(&q, region)?);
        gs.push(integrate(&gn, region)?);
    }
    Ok(KatoIntegral {
        k_h: trapezoid(&times, &hs),
        k_u: trapezoid(&times, &us),
        k_grad: trapezoid(&times, &gs),
        times,
        h_series: hs,
        u_series: us,
        grad_series: gs,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub times: Vec<f64>,
    /// `∫_{∂Ω} εσ(∇u)n·τ (w·τ)` per snapshot.
    pub increments: Vec<f64>,
    /// Route (a): time integral of the wall traces.
    pub direct: f64,
    /// Route (b): the momentum weak form tested with the cut-off field.
    pub volume: f64,
    pub discrepancy: f64,
}

fn record_for(traj: &Trajectory, model: &GasModel, k: usize) -> Result<WallRecord> {
    let snap = &traj.snapshots[k];
    match &snap.walls {
        Some(r) => Ok(r.clone()),
        None => wall_record(&snap.state, model, &traj.bc)?
            .ok_or(Error::Topology { op: "bardos_titi_pairing", required: "channel" }),
    }
}

/// `∫₀ᵀ∫_{∂Ω} εσ(∇u)n·τ (w·τ)` computed from wall traces and, independently, as
/// `∫ρu·w_ε|₀ᵀ − ∫₀ᵀ∫[ρu·∂t w_ε + ρu⊗u:∇w_ε + p div w_ε − εσ(∇u):∇w_ε]`
/// with the cut-off field `w_ε` of width `c0·ε`.
pub fn bardos_titi_pairing(traj: &Trajectory, model: &GasModel, pair: &TestPair, c0: f64) -> Result<Pairing> {
    let g = traj.grid();
    g.require_channel("bardos_titi_pairing")?;
    pair.check_against(traj)?;
    let eps = traj.epsilon();
    let times = traj.times();
    let mut increments = Vec::with_capacity(times.len());
    for (k, f) in pair.frames.iter().enumerate() {
        let rec = record_for(traj, model, k)?;
        let ww = f.w_wall.as_ref().ok_or_else(|| Error::InvalidTestPair("channel test pair lacks wall values".into()))?;
        increments.push(wall_pairing(&rec.traction, &ww.tangential(&g)));
    }
    let direct = trapezoid(&times, &increments);
    let volume = if eps > 0.0 {
        let layer = fake_layer(pair, eps, c0)?;
        let mut state_term = Vec::with_capacity(times.len());
        let mut rate = Vec::with_capacity(times.len());
        for (k, (snap, fl)) in traj.snapshots.iter().zip(&layer).enumerate() {
            let s = &snap.state;
            let u = s.velocity();
            let walls = traj.wall_velocity_at(k);
            let grad_u = velocity_gradient(&u, walls.as_ref().map(|w| w.pair()));
            let d = momentum_integrand(model, eps, s, &u, &grad_u, &fl.w_t, &fl.grad_w);
            rate.push(integrate(&ScalarField { grid: g, data: d }, Region::All)?);
            let m = s.mom.dot(&fl.w);
            state_term.push(integrate(&m, Region::All)?);
        }
        let n = times.len();
        state_term[n - 1] - state_term[0] - cumulative_trapezoid(&times, &rate)[n - 1]
    } else {
        0.0
    };
    Ok(Pairing { discrepancy: (direct - volume).abs(), times, increments, direct, volume })
}

/// `max(0, −min_{∂Ω} εω)`, using `(ω×n)·τ = ω` for `τ = n^⊥`.
pub fn ckv_defect(state: &State, walls: Option<&WallVelocity>) -> Result<f64> {
    let omega = wall_vorticity(&state.velocity(), walls.map(|w| w.pair()))?;
    Ok((-state.epsilon * omega.min()).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CkvMargin {
    pub times: Vec<f64>,
    pub m: Vec<f64>,
    pub integral: f64,
    /// Whether the reference has `w·τ ≥ −1e-10` on the walls.
    pub reference_nonnegative: Option<bool>,
}

pub fn ckv_margin(traj: &Trajectory, reference: Option<&TestPair>) -> Result<CkvMargin> {
    traj.grid().require_channel("ckv_margin")?;
    let times = traj.times();
    let m = (0..traj.snapshots.len())
        .map(|k| ckv_defect(&traj.snapshots[k].state, traj.wall_velocity_at(k).as_ref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CkvMargin {
        integral: trapezoid(&times, &m),
        times,
        m,
        reference_nonnegative: reference.map(|p| p.wall_tangential_nonnegative(1e-10)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, VectorField};
    use crate::solver::{BcSpec, RunStats, Snapshot};
    use crate::thermo::SlipLaw;
    use std::f64::consts::PI;

    fn model(gamma: f64) -> GasModel {
        GasModel::new(1.0, gamma, 1.0, 1.0, SlipLaw::NoSlip).unwrap()
    }

    /// A trajectory repeating one state, without wall records.
    fn frozen(rho: f64, u: impl Fn(f64, f64) -> [f64; 2], eps: f64, n: usize, t: f64) -> Trajectory {
        let g = Grid::channel(16, n, 1.0, 1.0).unwrap();
        let mom = VectorField::from_fn(g, |x, y| {
            let v = u(x, y);
            [rho * v[0], rho * v[1]]
        });
        let snapshots = [0.0, t]
            .iter()
            .map(|&time| Snapshot { state: State::new(ScalarField::constant(g, rho), mom.clone(), time, eps).unwrap(), walls: None })
            .collect();
        Trajectory { model: model(2.0), bc: BcSpec::NoSlip, snapshots, stats: RunStats::default() }
    }

    #[test]
    fn kato_gradient_term_for_linear_shear() {
        let (eps, t) = (1.0 / 16.0, 0.5);
        let tr = frozen(1.0, |_, y| [y, 0.0], eps, 64, t);
        let k = kato_integral(&tr, &model(2.0), None).unwrap();
        assert!((k.k_grad - 2.0 * eps * eps * t).abs() < 1e-14);
    }

    #[test]
    fn kato_density_term_at_rest() {
        let (eps, t) = (1.0 / 16.0, 0.5);
        let tr = frozen(1.0, |_, _| [0.0, 0.0], eps, 64, t);
        let k = kato_integral(&tr, &model(2.0), None).unwrap();
        assert!((k.k_h - 2.0 * eps * t).abs() < 1e-14);
        assert_eq!(k.k_u, 0.0);
        assert_eq!(k.k_grad, 0.0);
    }

    #[test]
    fn kato_velocity_term_against_fine_quadrature() {
        let (eps, t) = (1.0 / 16.0, 1.0);
        let tr = frozen(1.0, |_, y| [(PI * y).sin(), 0.0], eps, 256, t);
        let k = kato_integral(&tr, &model(2.0), None).unwrap();
        // ε ∫ sin²(πy)/y² over [0, ε], both walls, by a fine midpoint rule
        let n = 200_000;
        let h = eps / n as f64;
        let exact: f64 = 2.0 * eps * (0..n).map(|i| {
            let y = (i as f64 + 0.5) * h;
            (PI * y).sin().powi(2) / (y * y) * h
        }).sum::<f64>();
        assert!((k.k_u - exact).abs() < 1e-3 * exact, "{} vs {exact}", k.k_u);
    }

    #[test]
    fn kato_requires_walls() {
        let g = Grid::torus(8, 1.0).unwrap();
        let s = State::new(ScalarField::constant(g, 1.0), VectorField::zeros(g), 0.0, 0.1).unwrap();
        let tr = Trajectory { model: model(2.0), bc: BcSpec::Periodic, snapshots: vec![Snapshot { state: s, walls: None }], stats: RunStats::default() };
        assert!(kato_integral(&tr, &model(2.0), None).is_err());
    }

    #[test]
    fn ckv_examples() {
        let eps = 0.01;
        let tr = frozen(1.0, |_, y| [y, 0.0], eps, 32, 1.0);
        let c = ckv_margin(&tr, None).unwrap();
        for m in &c.m {
            assert!((m - eps).abs() < 1e-13);
        }
        // ω = −∂y u = −1 also from the cell-centred curl
        let omega = crate::ops::curl2d(&tr.snapshots[0].state.velocity());
        assert!(omega.data.iter().all(|w| (w + 1.0).abs() < 1e-12));
        let tr = frozen(1.0, |_, y| [1.0 - y, 0.0], eps, 32, 1.0);
        // ω = +1 everywhere
        assert_eq!(ckv_margin(&tr, None).unwrap().integral, 0.0);
    }
}
