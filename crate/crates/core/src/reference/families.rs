//! Closed-form reference families.

use std::f64::consts::PI;

use crate::error::Result;
use crate::grid::Grid;
use crate::solver::ShearProfile;
use crate::thermo::GasModel;

use super::{AnalyticPair, DerivativePath, Jet, TestPair};

/// `r = r0`, `w = (A·W(y), 0)`: a steady Euler solution for any profile `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearFamily {
    pub profile: ShearProfile,
    pub amplitude: f64,
    pub r0: f64,
    pub ly: f64,
}

impl AnalyticPair for ShearFamily {
    fn name(&self) -> String {
        format!("shear-{}", self.profile.name())
    }

    fn value(&self, _x: f64, y: f64, _t: f64) -> (f64, [f64; 2]) {
        (self.r0, [self.amplitude * self.profile.eval(y, self.ly).0, 0.0])
    }

    fn jet(&self, _x: f64, y: f64, _t: f64) -> Option<Jet> {
        let (w, dw, _) = self.profile.eval(y, self.ly);
        Some(Jet {
            r: self.r0,
            r_t: 0.0,
            grad_r: [0.0, 0.0],
            w: [self.amplitude * w, 0.0],
            w_t: [0.0, 0.0],
            grad_w: [[0.0, self.amplitude * dw], [0.0, 0.0]],
        })
    }
}

pub fn family_shear(profile: ShearProfile, amplitude: f64, r0: f64, model: &GasModel, grid: Grid, times: &[f64]) -> Result<TestPair> {
    let fam = ShearFamily { profile, amplitude, r0, ly: grid.ly };
    TestPair::from_analytic(&fam, DerivativePath::Exact, model, grid, times)
}

pub fn family_manufactured(pair: &dyn AnalyticPair, path: DerivativePath, model: &GasModel, grid: Grid, times: &[f64]) -> Result<TestPair> {
    TestPair::from_analytic(pair, path, model, grid, times)
}

/// `r = 1`, `w = (sin(πy/Ly) cos t, 0)`, whose residual is `(−sin(πy/Ly) sin t, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatingShear {
    pub ly: f64,
}

impl AnalyticPair for OscillatingShear {
    fn name(&self) -> String {
        "oscillating-shear".into()
    }

    fn value(&self, _x: f64, y: f64, t: f64) -> (f64, [f64; 2]) {
        (1.0, [(PI * y / self.ly).sin() * t.cos(), 0.0])
    }

    fn jet(&self, _x: f64, y: f64, t: f64) -> Option<Jet> {
        let k = PI / self.ly;
        Some(Jet {
            r: 1.0,
            r_t: 0.0,
            grad_r: [0.0, 0.0],
            w: [(k * y).sin() * t.cos(), 0.0],
            w_t: [-(k * y).sin() * t.sin(), 0.0],
            grad_w: [[0.0, k * (k * y).cos() * t.cos()], [0.0, 0.0]],
        })
    }
}

/// A density wave carried with exact mass balance:
/// `r = 1 + a sin(kx − kct + φ)`, `w = (c + (b − c)/r, β sin(k'x))` with
/// `k = 2π·mode/Lx`, `k' = 2π·cross_mode/Lx`.
///
/// `r w₁ = c r + (b − c)` so `∂t r + ∂x(r w₁) = ∂t r + c ∂x r = 0`, and `r w₂`
/// does not depend on `y`. On a channel set `cross = 0` so `w·n = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravellingDensity {
    pub amplitude: f64,
    pub mode: u32,
    /// Phase speed `c`.
    pub speed: f64,
    /// Momentum constant `b`.
    pub flux_speed: f64,
    pub cross: f64,
    pub cross_mode: u32,
    pub phase: f64,
    pub lx: f64,
}

impl TravellingDensity {
    fn k(&self) -> f64 {
        2.0 * PI * self.mode as f64 / self.lx
    }

    fn kc(&self) -> f64 {
        2.0 * PI * self.cross_mode as f64 / self.lx
    }
}

impl AnalyticPair for TravellingDensity {
    fn name(&self) -> String {
        "travelling-density".into()
    }

    fn value(&self, x: f64, _y: f64, t: f64) -> (f64, [f64; 2]) {
        let r = 1.0 + self.amplitude * (self.k() * (x - self.speed * t) + self.phase).sin();
        (r, [self.speed + (self.flux_speed - self.speed) / r, self.cross * (self.kc() * x).sin()])
    }

    fn jet(&self, x: f64, y: f64, t: f64) -> Option<Jet> {
        let (r, w) = self.value(x, y, t);
        let k = self.k();
        let r_x = self.amplitude * k * (k * (x - self.speed * t) + self.phase).cos();
        let r_t = -self.speed * r_x;
        let q = self.flux_speed - self.speed;
        let w1_x = -q * r_x / (r * r);
        let w1_t = -q * r_t / (r * r);
        Some(Jet {
            r,
            r_t,
            grad_r: [r_x, 0.0],
            w,
            w_t: [w1_t, 0.0],
            grad_w: [[w1_x, 0.0], [self.cross * self.kc() * (self.kc() * x).cos(), 0.0]],
        })
    }
}

type ScalarFn = Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
type VectorFn = Box<dyn Fn(f64, f64, f64) -> [f64; 2] + Send + Sync>;

/// A pair given only by value closures; derivatives come from finite differences.
pub struct Manufactured {
    name: String,
    r: ScalarFn,
    w: VectorFn,
}

impl Manufactured {
    pub fn new(
        name: &str,
        r: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        w: impl Fn(f64, f64, f64) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        Manufactured { name: name.into(), r: Box::new(r), w: Box::new(w) }
    }
}

impl AnalyticPair for Manufactured {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn value(&self, x: f64, y: f64, t: f64) -> (f64, [f64; 2]) {
        ((self.r)(x, y, t), (self.w)(x, y, t))
    }
}
