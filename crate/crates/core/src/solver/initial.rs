//! Named initial data, sampled as cell averages with a 3×3 Gauss rule.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField, Topology, VectorField};

use super::State;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityProfile {
    Uniform(f64),
    /// `base + amplitude · exp(−d²/width²)`, with `d` the periodic distance in x
    /// (and in y on a torus) to `center`.
    Pulse { base: f64, amplitude: f64, width: f64, center: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShearProfile {
    /// `sin(πy/Ly)`: vanishes on both walls.
    Sine,
    /// `cos(πy/Ly)`
    Cosine,
    /// `y/Ly`
    Linear,
    Constant,
}

impl ShearProfile {
    /// `(W, W′, W″)` at `y` for a channel of height `ly`.
    pub fn eval(self, y: f64, ly: f64) -> (f64, f64, f64) {
        let k = PI / ly;
        match self {
            ShearProfile::Sine => ((k * y).sin(), k * (k * y).cos(), -k * k * (k * y).sin()),
            ShearProfile::Cosine => ((k * y).cos(), -k * (k * y).sin(), -k * k * (k * y).cos()),
            ShearProfile::Linear => (y / ly, 1.0 / ly, 0.0),
            ShearProfile::Constant => (1.0, 0.0, 0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShearProfile::Sine => "sine",
            ShearProfile::Cosine => "cosine",
            ShearProfile::Linear => "linear",
            ShearProfile::Constant => "constant",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "sine" | "sin" => Some(ShearProfile::Sine),
            "cosine" | "cos" => Some(ShearProfile::Cosine),
            "linear" => Some(ShearProfile::Linear),
            "constant" => Some(ShearProfile::Constant),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocityProfile {
    Rest,
    Uniform([f64; 2]),
    /// `u = (amplitude · W(y), 0)`.
    Shear { profile: ShearProfile, amplitude: f64 },
    /// Divergence-free cells `u = ∇^⊥ψ`, `ψ = A sin(2πx/Lx) sin(mπy/Ly)`, with
    /// `m = 1` in a channel (so `u·n = 0` on the walls) and `m = 2` on a torus.
    Cellular { amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub density: DensityProfile,
    pub velocity: VelocityProfile,
}

impl InitialData {
    pub fn rest(rho: f64) -> Self {
        InitialData { density: DensityProfile::Uniform(rho), velocity: VelocityProfile::Rest }
    }

    pub fn shear(profile: ShearProfile, amplitude: f64) -> Self {
        InitialData { density: DensityProfile::Uniform(1.0), velocity: VelocityProfile::Shear { profile, amplitude } }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let ok = match self.density {
            DensityProfile::Uniform(r) => r > 0.0 && r.is_finite(),
            DensityProfile::Pulse { base, amplitude, width, .. } => {
                base > 0.0 && base + amplitude.min(0.0) > 0.0 && width > 0.0 && amplitude.is_finite()
            }
        };
        if !ok {
            return Err(Error::Config("initial density must stay positive".into()));
        }
        if let VelocityProfile::Uniform([_, v]) = self.velocity {
            if grid.has_walls() && v != 0.0 {
                return Err(Error::Config("uniform flow through a wall violates u·n = 0".into()));
            }
        }
        Ok(())
    }

    pub fn density_at(&self, grid: &Grid, x: f64, y: f64) -> f64 {
        match self.density {
            DensityProfile::Uniform(r) => r,
            DensityProfile::Pulse { base, amplitude, width, center } => {
                let dx = grid.lx / PI * (PI * (x - center[0]) / grid.lx).sin();
                let dy = match grid.topology {
                    Topology::Torus => grid.ly / PI * (PI * (y - center[1]) / grid.ly).sin(),
                    Topology::Channel => y - center[1],
                };
                base + amplitude * (-(dx * dx + dy * dy) / (width * width)).exp()
            }
        }
    }

    pub fn velocity_at(&self, grid: &Grid, x: f64, y: f64) -> [f64; 2] {
        match self.velocity {
            VelocityProfile::Rest => [0.0, 0.0],
            VelocityProfile::Uniform(u) => u,
            VelocityProfile::Shear { profile, amplitude } => [amplitude * profile.eval(y, grid.ly).0, 0.0],
            VelocityProfile::Cellular { amplitude } => {
                let m = if grid.has_walls() { 1.0 } else { 2.0 };
                let (kx, ky) = (2.0 * PI / grid.lx, m * PI / grid.ly);
                // u = (∂y ψ, −∂x ψ)
                [
                    amplitude * ky * (kx * x).sin() * (ky * y).cos(),
                    -amplitude * kx * (kx * x).cos() * (ky * y).sin(),
                ]
            }
        }
    }

    /// Cell averages of `ρ` and `ρu`.
    pub fn build(&self, grid: Grid, epsilon: f64) -> Result<State> {
        self.validate(&grid)?;
        const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
        const WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
        let (hx, hy) = (grid.hx(), grid.hy());
        let n = grid.len();
        let (mut rho, mut m1, mut m2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let (xc, yc) = (grid.x_center(i), grid.y_center(j));
                let (mut r, mut a, mut b) = (0.0, 0.0, 0.0);
                for (p, wp) in NODES.iter().zip(WEIGHTS) {
                    for (q, wq) in NODES.iter().zip(WEIGHTS) {
                        let x = xc + 0.5 * hx * p;
                        let y = yc + 0.5 * hy * q;
                        let d = self.density_at(&grid, x, y);
                        let u = self.velocity_at(&grid, x, y);
                        let w = wp * wq;
                        r += w * d;
                        a += w * d * u[0];
                        b += w * d * u[1];
                    }
                }
                let k = grid.idx(i, j);
                rho[k] = r;
                m1[k] = a;
                m2[k] = b;
            }
        }
        State::new(ScalarField { grid, data: rho }, VectorField { grid, x: m1, y: m2 }, 0.0, epsilon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_averages_of_smooth_profiles() {
        let g = Grid::channel(16, 16, 1.0, 1.0).unwrap();
        let s = InitialData::shear(ShearProfile::Sine, 1.0).build(g, 0.0).unwrap();
        // exact average of sin(πy) over a cell
        let h = g.hy();
        for j in 0..g.ny {
            let y0 = j as f64 * h;
            let exact = ((PI * y0).cos() - (PI * (y0 + h)).cos()) / (PI * h);
            assert!((s.mom.x[g.idx(3, j)] - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn cellular_flow_is_tangent_to_walls() {
        let g = Grid::channel(16, 16, 1.0, 1.0).unwrap();
        let d = InitialData { density: DensityProfile::Uniform(1.0), velocity: VelocityProfile::Cellular { amplitude: 1.0 } };
        for x in [0.1, 0.37, 0.8] {
            assert!(d.velocity_at(&g, x, 0.0)[1].abs() < 1e-15);
            assert!(d.velocity_at(&g, x, 1.0)[1].abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_data_rejected() {
        let g = Grid::channel(8, 8, 1.0, 1.0).unwrap();
        assert!(InitialData::rest(0.0).build(g, 0.0).is_err());
        let d = InitialData { density: DensityProfile::Uniform(1.0), velocity: VelocityProfile::Uniform([0.0, 1.0]) };
        assert!(d.build(g, 0.0).is_err());
        let p = InitialData {
            density: DensityProfile::Pulse { base: 1.0, amplitude: -1.5, width: 0.1, center: [0.5, 0.5] },
            velocity: VelocityProfile::Rest,
        };
        assert!(p.build(g, 0.0).is_err());
    }
}
