//! Inviscid-limit functionals evaluated on trajectories and test pairs.

mod boundary;
mod gronwall;
mod report;

use crate::error::{Error, Result};
use crate::grid::{boundary_integrate, ScalarField, TensorField, VectorField};
use crate::ops::velocity_gradient;
use crate::quadrature::{integrate, Region};
use crate::reference::TestFrame;
use crate::solver::{wall_record, BcSpec, State, WallRecord};
use crate::stress::{contract, stress_at};
use crate::thermo::GasModel;

pub use boundary::{bardos_titi_pairing, ckv_defect, ckv_margin, kato_integral, CkvMargin, KatoIntegral, Pairing};
pub use gronwall::{gronwall_check, GronwallVerdict};
pub use report::{criteria_report, CriteriaReport, ReportOptions, CSV_HEADER};

fn check_frame(state: &State, frame: &TestFrame) -> Result<()> {
    if state.grid != frame.r.grid {
        return Err(Error::GridMismatch);
    }
    let rmin = frame.r.min();
    if !(rmin > 0.0) {
        return Err(Error::InvalidTestPair(format!("r must be positive, min {rmin}")));
    }
    Ok(())
}

fn int(field: ScalarField) -> f64 {
    integrate(&field, Region::All).expect("whole-domain integral")
}

/// `∫ ½ρ|u − w|² + H(ρ; r)`.
pub fn relative_energy(state: &State, model: &GasModel, frame: &TestFrame) -> Result<f64> {
    check_frame(state, frame)?;
    let u = state.velocity();
    let data = (0..state.grid.len())
        .map(|k| {
            let rho = state.rho.data[k];
            let (a, b) = (u.x[k] - frame.w.x[k], u.y[k] - frame.w.y[k]);
            0.5 * rho * (a * a + b * b) + model.h_relative_unchecked(rho, frame.r.data[k])
        })
        .collect();
    Ok(int(ScalarField { grid: state.grid, data }))
}

/// Velocity, wall-consistent velocity gradient and wall record of a state.
struct Kinematics {
    u: VectorField,
    grad_u: TensorField,
    walls: Option<WallRecord>,
}

fn kinematics(state: &State, model: &GasModel, bc: &BcSpec) -> Result<Kinematics> {
    let u = state.velocity();
    let walls = wall_record(state, model, bc)?;
    let wv = walls.as_ref().map(|w| w.velocity(&state.grid));
    let grad_u = velocity_gradient(&u, wv.as_ref().map(|w| w.pair()));
    Ok(Kinematics { u, grad_u, walls })
}

/// `∫_{∂Ω} λu·w`, written as `−∫_{∂Ω} εσ(∇u)n·τ (w·τ)` so that it also covers no-slip walls.
fn wall_term(walls: Option<&WallRecord>, frame: &TestFrame) -> f64 {
    match (walls, &frame.w_wall) {
        (Some(rec), Some(ww)) => {
            let g = frame.r.grid;
            -boundary_integrate(&rec.traction.zip_with(&ww.tangential(&g), |a, b| a * b))
        }
        _ => 0.0,
    }
}

/// Full remainder
/// `∫[ρ(∂t + u·∇)w·(w − u) + εσ(∇u):∇w] + ∫_{∂Ω}λu·w
///  + ∫[(r − ρ)∂t H′(r) + (rw − ρu)·∇H′(r)] − ∫[ρ(H′(ρ) − H′(r)) − H(ρ; r)] div w`.
pub fn remainder(state: &State, model: &GasModel, bc: &BcSpec, frame: &TestFrame) -> Result<f64> {
    check_frame(state, frame)?;
    let kin = kinematics(state, model, bc)?;
    let (u, f) = (&kin.u, frame);
    let eps = state.epsilon;
    let data = (0..state.grid.len())
        .map(|k| {
            let rho = state.rho.data[k];
            let r = f.r.data[k];
            let gw = f.grad_w.at_index(k);
            let (u1, u2) = (u.x[k], u.y[k]);
            let (w1, w2) = (f.w.x[k], f.w.y[k]);
            let dw = [
                f.w_t.x[k] + gw[0][0] * u1 + gw[0][1] * u2,
                f.w_t.y[k] + gw[1][0] * u1 + gw[1][1] * u2,
            ];
            let transport = rho * (dw[0] * (w1 - u1) + dw[1] * (w2 - u2));
            let visc = eps * contract(stress_at(model, kin.grad_u.at_index(k)), gw);
            let h2 = model.h_second(r);
            let entropy = (r - rho) * h2 * f.r_t.data[k]
                + h2 * ((r * w1 - rho * u1) * f.grad_r.x[k] + (r * w2 - rho * u2) * f.grad_r.y[k]);
            let bregman = rho * (model.h_prime(rho) - model.h_prime(r)) - model.h_relative_unchecked(rho, r);
            transport + visc + entropy - bregman * (gw[0][0] + gw[1][1])
        })
        .collect();
    Ok(int(ScalarField { grid: state.grid, data }) + wall_term(kin.walls.as_ref(), frame))
}

/// The remainder rewritten with the residuals of `(r, w)`:
/// `∫[ρE·(w − u) + εσ(∇u):∇w] + ∫_{∂Ω}λu·w
///  − ∫[ρ(H′(ρ) − H′(r)) − r(ρ − r)H″(r) − H(ρ; r)] div w
///  − ∫ρ((u − w)·∇)w·(u − w) + ∫(r − ρ)H″(r)(∂t r + div(rw))`.
///
/// The last two integrals are absent from the commonly quoted reduced form; the
/// convective one is needed whenever `∇w ≠ 0` and the mass one vanishes for
/// mass-consistent pairs.
pub fn remainder_reduced(state: &State, model: &GasModel, bc: &BcSpec, frame: &TestFrame) -> Result<f64> {
    check_frame(state, frame)?;
    let kin = kinematics(state, model, bc)?;
    let (u, f) = (&kin.u, frame);
    let eps = state.epsilon;
    let data = (0..state.grid.len())
        .map(|k| {
            let rho = state.rho.data[k];
            let r = f.r.data[k];
            let gw = f.grad_w.at_index(k);
            let d = [u.x[k] - f.w.x[k], u.y[k] - f.w.y[k]];
            let forcing = -rho * (f.residual.x[k] * d[0] + f.residual.y[k] * d[1]);
            let visc = eps * contract(stress_at(model, kin.grad_u.at_index(k)), gw);
            let h2 = model.h_second(r);
            let bregman = rho * (model.h_prime(rho) - model.h_prime(r)) - r * (rho - r) * h2 - model.h_relative_unchecked(rho, r);
            let shear = rho * (d[0] * (gw[0][0] * d[0] + gw[0][1] * d[1]) + d[1] * (gw[1][0] * d[0] + gw[1][1] * d[1]));
            let mass = (r - rho) * h2 * f.mass_residual.data[k];
            forcing + visc - bregman * (gw[0][0] + gw[1][1]) - shear + mass
        })
        .collect();
    Ok(int(ScalarField { grid: state.grid, data }) + wall_term(kin.walls.as_ref(), frame))
}
