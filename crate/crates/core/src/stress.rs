//! Viscous stress `σ(∇u) = μ[(∇u + ∇uᵗ) − ⅔(div u)I] + η(div u)I`, its dissipation,
//! and tangential wall traces.
//!
//! The ⅔ factor is kept as written for three dimensions even though the grids
//! here are planar.

use crate::error::Result;
use crate::grid::{TensorField, VectorField, Wall, WallTraces};
use crate::ops::{curl2d, trace_ddx, velocity_gradient, wall_ddy, wall_extrapolate, WallValues};
use crate::quadrature::{integrate, Region};
use crate::thermo::GasModel;

pub type Mat2 = [[f64; 2]; 2];

/// Symmetric stress per cell; symmetry holds by storage.
#[derive(Debug, Clone, PartialEq)]
pub struct StressField {
    pub grid: crate::grid::Grid,
    pub xx: Vec<f64>,
    pub xy: Vec<f64>,
    pub yy: Vec<f64>,
}

impl StressField {
    pub fn at_index(&self, k: usize) -> Mat2 {
        [[self.xx[k], self.xy[k]], [self.xy[k], self.yy[k]]]
    }

    pub fn as_tensor(&self) -> TensorField {
        TensorField { grid: self.grid, xx: self.xx.clone(), xy: self.xy.clone(), yx: self.xy.clone(), yy: self.yy.clone() }
    }
}

#[inline]
pub fn stress_at(model: &GasModel, g: Mat2) -> Mat2 {
    let div = g[0][0] + g[1][1];
    let bulk = (model.eta - 2.0 / 3.0 * model.mu) * div;
    let shear = model.mu * (g[0][1] + g[1][0]);
    [[2.0 * model.mu * g[0][0] + bulk, shear], [shear, 2.0 * model.mu * g[1][1] + bulk]]
}

#[inline]
pub fn contract(a: Mat2, b: Mat2) -> f64 {
    a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
}

pub fn stress_tensor(model: &GasModel, grad_u: &TensorField) -> StressField {
    let n = grad_u.grid.len();
    let mut out = StressField { grid: grad_u.grid, xx: vec![0.0; n], xy: vec![0.0; n], yy: vec![0.0; n] };
    for k in 0..n {
        let s = stress_at(model, grad_u.at_index(k));
        out.xx[k] = s[0][0];
        out.xy[k] = s[0][1];
        out.yy[k] = s[1][1];
    }
    out
}

/// Pointwise `σ(∇u) : ∇u`.
pub fn dissipation(model: &GasModel, grad_u: &TensorField) -> crate::grid::ScalarField {
    let data = (0..grad_u.grid.len())
        .map(|k| {
            let g = grad_u.at_index(k);
            contract(stress_at(model, g), g)
        })
        .collect();
    crate::grid::ScalarField { grid: grad_u.grid, data }
}

/// Integrals in `∫σ(∇u):∇u ≥ θ₀ ∫|∇u|²` and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coercivity {
    pub lhs: f64,
    pub rhs: f64,
    /// `None` when `∫|∇u|² = 0`.
    pub theta0_hat: Option<f64>,
}

pub fn dissipation_coercivity(model: &GasModel, u: &VectorField, walls: Option<(&WallValues, &WallValues)>) -> Result<Coercivity> {
    let g = velocity_gradient(u, walls);
    let lhs = integrate(&dissipation(model, &g), Region::All)?;
    let rhs = integrate(&g.norm_sq(), Region::All)?;
    let theta0_hat = (rhs > 0.0).then(|| lhs / rhs);
    Ok(Coercivity { lhs, rhs, theta0_hat })
}

/// Wall values and wall-normal derivatives of a velocity on one wall.
struct WallJet {
    u: [Vec<f64>; 2],
    dudy: [Vec<f64>; 2],
}

fn wall_jet(u: &VectorField, wall: Wall, wall_velocity: Option<(&WallValues, &WallValues)>) -> WallJet {
    let g = &u.grid;
    match wall_velocity {
        Some((wx, wy)) => WallJet {
            u: [wx.get(wall).to_vec(), wy.get(wall).to_vec()],
            dudy: [wall_ddy(&u.x, g, wall, Some(wx.get(wall))), wall_ddy(&u.y, g, wall, Some(wy.get(wall)))],
        },
        None => WallJet {
            u: [wall_extrapolate(&u.x, g, wall), wall_extrapolate(&u.y, g, wall)],
            dudy: [wall_ddy(&u.x, g, wall, None), wall_ddy(&u.y, g, wall, None)],
        },
    }
}

fn stress_trace(model: &GasModel, u: &VectorField, wall_velocity: Option<(&WallValues, &WallValues)>) -> Result<WallTraces> {
    let g = u.grid;
    g.require_channel("boundary_stress_tangential")?;
    let mut per_wall = Vec::with_capacity(2);
    for wall in Wall::BOTH {
        let jet = wall_jet(u, wall, wall_velocity);
        let du1dx = trace_ddx(&jet.u[0], &g);
        let du2dx = trace_ddx(&jet.u[1], &g);
        let n = wall.normal();
        let t = wall.tangent();
        let vals: Vec<f64> = (0..g.nx)
            .map(|i| {
                let grad = [[du1dx[i], jet.dudy[0][i]], [du2dx[i], jet.dudy[1][i]]];
                let s = stress_at(model, grad);
                t[0] * (s[0][0] * n[0] + s[0][1] * n[1]) + t[1] * (s[1][0] * n[0] + s[1][1] * n[1])
            })
            .collect();
        per_wall.push(vals);
    }
    let top = per_wall.pop().unwrap_or_default();
    let bottom = per_wall.pop().unwrap_or_default();
    Ok(WallTraces {
        bottom: crate::grid::BoundaryTrace::new(&g, Wall::Bottom, bottom)?,
        top: crate::grid::BoundaryTrace::new(&g, Wall::Top, top)?,
    })
}

/// `σ(∇u)n·τ` on both walls from one-sided second-order wall derivatives.
pub fn boundary_stress_tangential(model: &GasModel, u: &VectorField) -> Result<WallTraces> {
    stress_trace(model, u, None)
}

/// Same trace, but using known wall velocities (e.g. those enforced by a boundary condition).
pub fn boundary_stress_tangential_with_walls(
    model: &GasModel,
    u: &VectorField,
    wall_u: &WallValues,
    wall_v: &WallValues,
) -> Result<WallTraces> {
    stress_trace(model, u, Some((wall_u, wall_v)))
}

/// `μ(ω×n)·τ − κ u·τ` on both walls. With `τ = n^⊥`, `(ω×n)·τ = ω`.
///
/// Vorticity comes from the cell-centred curl extrapolated to the wall, which is
/// an independent route from [`boundary_stress_tangential`]. Flat walls have
/// `κ = 0`; a nonzero `kappa` is accepted for operator-level checks.
pub fn vorticity_trace_form(model: &GasModel, u: &VectorField, kappa: f64) -> Result<WallTraces> {
    let g = u.grid;
    g.require_channel("vorticity_trace_form")?;
    let omega = curl2d(u);
    let mut out = Vec::with_capacity(2);
    for wall in Wall::BOTH {
        let w = wall_extrapolate(&omega.data, &g, wall);
        let ux = wall_extrapolate(&u.x, &g, wall);
        let uy = wall_extrapolate(&u.y, &g, wall);
        let t = wall.tangent();
        let vals = (0..g.nx).map(|i| model.mu * w[i] - kappa * (ux[i] * t[0] + uy[i] * t[1])).collect();
        out.push(crate::grid::BoundaryTrace::new(&g, wall, vals)?);
    }
    let top = out.pop().expect("two walls");
    let bottom = out.pop().expect("two walls");
    Ok(WallTraces { bottom, top })
}

/// Wall vorticity `ω = ∂x u₂ − ∂y u₁` from wall-consistent derivatives.
pub fn wall_vorticity(u: &VectorField, wall_velocity: Option<(&WallValues, &WallValues)>) -> Result<WallTraces> {
    let g = u.grid;
    g.require_channel("wall_vorticity")?;
    let f = |wall: Wall| {
        let jet = wall_jet(u, wall, wall_velocity);
        let du2dx = trace_ddx(&jet.u[1], &g);
        (0..g.nx).map(|i| du2dx[i] - jet.dudy[0][i]).collect::<Vec<_>>()
    };
    Ok(WallTraces {
        bottom: crate::grid::BoundaryTrace::new(&g, Wall::Bottom, f(Wall::Bottom))?,
        top: crate::grid::BoundaryTrace::new(&g, Wall::Top, f(Wall::Top))?,
    })
}
