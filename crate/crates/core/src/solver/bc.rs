//! Wall conditions: impermeability plus either the Navier slip law
//! `εσ(∇u)n·τ + λ u·τ = 0` or no-slip.
//!
//! The tangential wall velocity solves the slip law with the second-order wall
//! derivative `∂s u|w = (−8/3 u_w + 3u₀ − u₁/3)/h` (s the inward normal
//! coordinate). On flat walls `σn·τ = −μ ∂s u_τ`, so the law becomes a scalar
//! linear equation per boundary face.

use crate::error::{Error, Result};
use crate::grid::{Grid, Topology, VectorField, Wall, WallTraces};
use crate::ops::WallValues;
use crate::stress::boundary_stress_tangential_with_walls;
use crate::thermo::{GasModel, SlipLaw};

use super::State;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcSpec {
    /// No walls (torus).
    Periodic,
    /// `εσn·τ = −λ u·τ` with finite `λ ≥ 0`.
    NavierSlip { lambda: f64 },
    /// `u = 0` on the walls; the `λ = ∞` member of the family.
    NoSlip,
}

impl BcSpec {
    /// The condition a slip law prescribes at viscosity scale `epsilon`.
    pub fn from_slip_law(law: SlipLaw, epsilon: f64, topology: Topology) -> Self {
        match (topology, law) {
            (Topology::Torus, _) => BcSpec::Periodic,
            (Topology::Channel, SlipLaw::NoSlip) => BcSpec::NoSlip,
            (Topology::Channel, law) => BcSpec::NavierSlip { lambda: law.coefficient(epsilon) },
        }
    }

    /// `λ`; zero when periodic, infinite for no-slip.
    pub fn lambda(&self) -> f64 {
        match *self {
            BcSpec::Periodic => 0.0,
            BcSpec::NavierSlip { lambda } => lambda,
            BcSpec::NoSlip => f64::INFINITY,
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        match (*self, grid.topology) {
            (BcSpec::Periodic, Topology::Torus) => Ok(()),
            (BcSpec::Periodic, Topology::Channel) => Err(Error::Config("a channel needs wall conditions".into())),
            (_, Topology::Torus) => Err(Error::Config("wall conditions given for a torus".into())),
            (BcSpec::NavierSlip { lambda }, _) if !(lambda >= 0.0 && lambda.is_finite()) => {
                Err(Error::Config(format!("slip coefficient must be finite and nonnegative, got {lambda}")))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn code(&self) -> (u8, f64) {
        match *self {
            BcSpec::Periodic => (0, 0.0),
            BcSpec::NavierSlip { lambda } => (1, lambda),
            BcSpec::NoSlip => (2, 0.0),
        }
    }

    pub(crate) fn from_code(code: u8, lambda: f64) -> Option<Self> {
        match code {
            0 => Some(BcSpec::Periodic),
            1 => Some(BcSpec::NavierSlip { lambda }),
            2 => Some(BcSpec::NoSlip),
            _ => None,
        }
    }
}

/// Velocity components on the walls.
#[derive(Debug, Clone, PartialEq)]
pub struct WallVelocity {
    pub u: WallValues,
    pub v: WallValues,
}

impl WallVelocity {
    pub fn pair(&self) -> (&WallValues, &WallValues) {
        (&self.u, &self.v)
    }

    /// `u·τ` on each wall.
    pub fn tangential(&self, grid: &Grid) -> WallTraces {
        WallTraces::from_fn(grid, |wall, i| {
            let t = wall.tangent();
            self.u.get(wall)[i] * t[0] + self.v.get(wall)[i] * t[1]
        })
    }

    /// Recovers wall velocities from recorded `u·τ` (the normal part is zero).
    pub fn from_tangential(grid: &Grid, u_tau: &WallTraces) -> Self {
        let mut u = WallValues::zeros(grid);
        for wall in Wall::BOTH {
            let t = wall.tangent();
            let dst = match wall {
                Wall::Bottom => &mut u.bottom,
                Wall::Top => &mut u.top,
            };
            for (d, s) in dst.iter_mut().zip(&u_tau.get(wall).values) {
                *d = s * t[0];
            }
        }
        WallVelocity { u, v: WallValues::zeros(grid) }
    }
}

/// Wall velocity enforced by `bc` for the cell velocities `u`.
///
/// `None` on a torus.
pub fn wall_velocity(u: &VectorField, model: &GasModel, bc: &BcSpec, epsilon: f64) -> Option<WallVelocity> {
    let g = &u.grid;
    if !g.has_walls() {
        return None;
    }
    let nx = g.nx;
    let h = g.hy();
    let mut out = WallVelocity { u: WallValues::zeros(g), v: WallValues::zeros(g) };
    if let BcSpec::NavierSlip { lambda } = *bc {
        let k = epsilon * model.mu / h;
        let denom = lambda + 8.0 / 3.0 * k;
        for (wall, j0, j1) in [(Wall::Bottom, 0, 1), (Wall::Top, g.ny - 1, g.ny - 2)] {
            let dst = match wall {
                Wall::Bottom => &mut out.u.bottom,
                Wall::Top => &mut out.u.top,
            };
            for (i, d) in dst.iter_mut().enumerate() {
                let u0 = u.x[j0 * nx + i];
                let u1 = u.x[j1 * nx + i];
                *d = if denom > 0.0 { k * (3.0 * u0 - u1 / 3.0) / denom } else { (9.0 * u0 - u1) / 8.0 };
            }
        }
    }
    Some(out)
}

/// One ghost row beyond each wall.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostCells {
    pub walls: WallVelocity,
    /// Density ghosts copy the adjacent cell (zero normal gradient).
    pub rho: WallValues,
    /// Velocity ghosts are reflections through the wall value, `2u_w − u₀`.
    pub u: WallValues,
    pub v: WallValues,
}

/// Ghost layers realising the wall condition for `state`.
pub fn apply_bc(state: &State, model: &GasModel, bc: &BcSpec) -> Result<GhostCells> {
    let g = state.grid;
    g.require_channel("apply_bc")?;
    bc.validate(&g)?;
    let vel = state.velocity();
    let walls = wall_velocity(&vel, model, bc, state.epsilon).expect("channel has walls");
    let nx = g.nx;
    let row = |f: &[f64], j: usize| f[j * nx..(j + 1) * nx].to_vec();
    let reflect = |wall: &[f64], f: &[f64], j: usize| (0..nx).map(|i| 2.0 * wall[i] - f[j * nx + i]).collect::<Vec<_>>();
    let top = g.ny - 1;
    Ok(GhostCells {
        rho: WallValues { bottom: row(&state.rho.data, 0), top: row(&state.rho.data, top) },
        u: WallValues { bottom: reflect(&walls.u.bottom, &vel.x, 0), top: reflect(&walls.u.top, &vel.x, top) },
        v: WallValues { bottom: reflect(&walls.v.bottom, &vel.y, 0), top: reflect(&walls.v.top, &vel.y, top) },
        walls,
    })
}

/// Wall quantities stored with each channel snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct WallRecord {
    /// `u·τ` on each wall.
    pub u_tau: WallTraces,
    /// `εσ(∇u)n·τ` evaluated with the enforced wall velocity.
    pub traction: WallTraces,
}

impl WallRecord {
    pub fn velocity(&self, grid: &Grid) -> WallVelocity {
        WallVelocity::from_tangential(grid, &self.u_tau)
    }
}

pub fn wall_record(state: &State, model: &GasModel, bc: &BcSpec) -> Result<Option<WallRecord>> {
    let g = state.grid;
    if !g.has_walls() {
        return Ok(None);
    }
    let vel = state.velocity();
    let walls = wall_velocity(&vel, model, bc, state.epsilon).expect("channel has walls");
    let traction = boundary_stress_tangential_with_walls(model, &vel, &walls.u, &walls.v)?.map(|s| state.epsilon * s);
    Ok(Some(WallRecord { u_tau: walls.tangential(&g), traction }))
}
