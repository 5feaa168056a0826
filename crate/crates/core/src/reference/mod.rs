//! Smooth reference pairs `(r, w)` with their Euler residual
//! `E = ∂t w + (w·∇)w + ∇H′(r)` and mass residual `∂t r + div(rw)`.
//!
//! Pairs come from closed-form families (exact or finite-difference derivatives)
//! or from a refined Euler run.

mod families;
mod fake;
mod numeric;

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField, TensorField, VectorField};
use crate::ops::WallValues;
use crate::solver::{Trajectory, WallVelocity};
use crate::stress::Mat2;
use crate::thermo::GasModel;

pub use families::{family_manufactured, family_shear, Manufactured, OscillatingShear, ShearFamily, TravellingDensity};
pub use fake::{chi, chi_prime, fake_layer, fake_layer_bounds, FakeLayerBounds, FakeLayerFrame};
pub use numeric::euler_numeric_reference;

/// Values and first derivatives of a pair at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub r: f64,
    pub r_t: f64,
    pub grad_r: [f64; 2],
    pub w: [f64; 2],
    pub w_t: [f64; 2],
    /// `grad_w[a][b] = ∂_b w_a`.
    pub grad_w: Mat2,
}

impl Jet {
    pub fn div_w(&self) -> f64 {
        self.grad_w[0][0] + self.grad_w[1][1]
    }

    /// `∂t w + (∇w)w + H″(r)∇r`.
    pub fn euler_residual(&self, model: &GasModel) -> [f64; 2] {
        let h2 = model.h_second(self.r);
        let g = self.grad_w;
        [
            self.w_t[0] + g[0][0] * self.w[0] + g[0][1] * self.w[1] + h2 * self.grad_r[0],
            self.w_t[1] + g[1][0] * self.w[0] + g[1][1] * self.w[1] + h2 * self.grad_r[1],
        ]
    }

    /// `∂t r + w·∇r + r div w`.
    pub fn mass_residual(&self) -> f64 {
        self.r_t + self.w[0] * self.grad_r[0] + self.w[1] * self.grad_r[1] + self.r * self.div_w()
    }
}

/// A closed-form pair. `jet` returns exact derivatives when the family knows them.
pub trait AnalyticPair: Send + Sync {
    fn name(&self) -> String;
    fn value(&self, x: f64, y: f64, t: f64) -> (f64, [f64; 2]);
    fn jet(&self, _x: f64, _y: f64, _t: f64) -> Option<Jet> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativePath {
    /// Use the family's closed-form derivatives (falls back to finite differences).
    Exact,
    /// Fourth-order central differences of the values.
    FiniteDifference,
}

const FD_STEP: f64 = 1e-3;

/// Fourth-order central-difference jet.
pub fn fd_jet(pair: &dyn AnalyticPair, x: f64, y: f64, t: f64) -> Jet {
    let h = FD_STEP;
    let d = |f: &dyn Fn(f64) -> (f64, [f64; 2])| {
        let (a2, b2) = f(2.0 * h);
        let (a1, b1) = f(h);
        let (m1, n1) = f(-h);
        let (m2, n2) = f(-2.0 * h);
        let s = |p2: f64, p1: f64, q1: f64, q2: f64| (-p2 + 8.0 * p1 - 8.0 * q1 + q2) / (12.0 * h);
        (s(a2, a1, m1, m2), [s(b2[0], b1[0], n1[0], n2[0]), s(b2[1], b1[1], n1[1], n2[1])])
    };
    let (r, w) = pair.value(x, y, t);
    let (r_t, w_t) = d(&|s| pair.value(x, y, t + s));
    let (r_x, w_x) = d(&|s| pair.value(x + s, y, t));
    let (r_y, w_y) = d(&|s| pair.value(x, y + s, t));
    Jet { r, r_t, grad_r: [r_x, r_y], w, w_t, grad_w: [[w_x[0], w_y[0]], [w_x[1], w_y[1]]] }
}

pub fn jet_of(pair: &dyn AnalyticPair, path: DerivativePath, x: f64, y: f64, t: f64) -> Jet {
    match path {
        DerivativePath::Exact => pair.jet(x, y, t).unwrap_or_else(|| fd_jet(pair, x, y, t)),
        DerivativePath::FiniteDifference => fd_jet(pair, x, y, t),
    }
}

/// The pair and its derivatives at cell centres at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFrame {
    pub time: f64,
    pub r: ScalarField,
    pub r_t: ScalarField,
    pub grad_r: VectorField,
    pub w: VectorField,
    pub w_t: VectorField,
    pub grad_w: TensorField,
    /// `E(r, w)`.
    pub residual: VectorField,
    pub mass_residual: ScalarField,
    /// `w` on the walls (channel only).
    pub w_wall: Option<WallVelocity>,
}

impl TestFrame {
    pub fn div_w(&self) -> ScalarField {
        ScalarField { grid: self.w.grid, data: self.grad_w.xx.iter().zip(&self.grad_w.yy).map(|(a, b)| a + b).collect() }
    }

    fn from_jets(grid: Grid, time: f64, jets: &[Jet], model: &GasModel, w_wall: Option<WallVelocity>) -> Self {
        let n = grid.len();
        let mut f = TestFrame {
            time,
            r: ScalarField::zeros(grid),
            r_t: ScalarField::zeros(grid),
            grad_r: VectorField::zeros(grid),
            w: VectorField::zeros(grid),
            w_t: VectorField::zeros(grid),
            grad_w: TensorField::zeros(grid),
            residual: VectorField::zeros(grid),
            mass_residual: ScalarField::zeros(grid),
            w_wall,
        };
        for (k, j) in jets.iter().enumerate().take(n) {
            f.r.data[k] = j.r;
            f.r_t.data[k] = j.r_t;
            f.grad_r.x[k] = j.grad_r[0];
            f.grad_r.y[k] = j.grad_r[1];
            f.w.x[k] = j.w[0];
            f.w.y[k] = j.w[1];
            f.w_t.x[k] = j.w_t[0];
            f.w_t.y[k] = j.w_t[1];
            f.grad_w.set_index(k, j.grad_w);
            let e = j.euler_residual(model);
            f.residual.x[k] = e[0];
            f.residual.y[k] = e[1];
            f.mass_residual.data[k] = j.mass_residual();
        }
        f
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestPair {
    pub name: String,
    pub grid: Grid,
    pub frames: Vec<TestFrame>,
    /// `(min r, max r)` over all frames.
    pub r_bounds: (f64, f64),
    /// `‖div w(t)‖_∞` per frame.
    pub div_w_inf: Vec<f64>,
}

/// Largest `|w·n|` tolerated on a wall.
pub const WALL_NORMAL_TOL: f64 = 1e-12;

impl TestPair {
    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.time).collect()
    }

    fn assemble(name: String, grid: Grid, frames: Vec<TestFrame>) -> Result<Self> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for f in &frames {
            lo = lo.min(f.r.min());
            hi = hi.max(f.r.max());
            if let Some(w) = &f.w_wall {
                let m = w.v.bottom.iter().chain(&w.v.top).fold(0.0_f64, |a, b| a.max(b.abs()));
                if m > WALL_NORMAL_TOL {
                    return Err(Error::InvalidTestPair(format!("w·n = {m:.3e} on a wall at t = {}", f.time)));
                }
            }
        }
        if !(lo > 0.0) {
            return Err(Error::InvalidTestPair(format!("r must stay positive, min {lo}")));
        }
        let div_w_inf = frames.iter().map(|f| f.div_w().max_abs()).collect();
        Ok(TestPair { name, grid, frames, r_bounds: (lo, hi), div_w_inf })
    }

    /// Samples an analytic pair at the cell centres of `grid` at `times`.
    pub fn from_analytic(pair: &dyn AnalyticPair, path: DerivativePath, model: &GasModel, grid: Grid, times: &[f64]) -> Result<Self> {
        let mut frames = Vec::with_capacity(times.len());
        for &t in times {
            let mut jets = Vec::with_capacity(grid.len());
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    jets.push(jet_of(pair, path, grid.x_center(i), grid.y_center(j), t));
                }
            }
            let w_wall = grid.has_walls().then(|| {
                let mut u = WallValues::zeros(&grid);
                let mut v = WallValues::zeros(&grid);
                for i in 0..grid.nx {
                    let x = grid.x_center(i);
                    let b = pair.value(x, 0.0, t).1;
                    let tp = pair.value(x, grid.ly, t).1;
                    u.bottom[i] = b[0];
                    v.bottom[i] = b[1];
                    u.top[i] = tp[0];
                    v.top[i] = tp[1];
                }
                WallVelocity { u, v }
            });
            frames.push(TestFrame::from_jets(grid, t, &jets, model, w_wall));
        }
        Self::assemble(pair.name(), grid, frames)
    }

    /// Checks that the pair lives on the trajectory's grid and snapshot times.
    pub fn check_against(&self, traj: &Trajectory) -> Result<()> {
        if self.grid != traj.grid() {
            return Err(Error::InvalidTestPair("test pair and trajectory use different grids".into()));
        }
        let times = traj.times();
        if times.len() != self.frames.len() {
            return Err(Error::InvalidTestPair(format!(
                "test pair has {} frames, trajectory {} snapshots",
                self.frames.len(),
                times.len()
            )));
        }
        for (t, f) in times.iter().zip(&self.frames) {
            if (t - f.time).abs() > 1e-9 * t.abs().max(1.0) {
                return Err(Error::InvalidTestPair(format!("frame time {} does not match snapshot {}", f.time, t)));
            }
        }
        Ok(())
    }

    pub fn max_residual(&self) -> f64 {
        self.frames.iter().fold(0.0_f64, |m, f| m.max(f.residual.max_abs()))
    }

    pub fn max_mass_residual(&self) -> f64 {
        self.frames.iter().fold(0.0_f64, |m, f| m.max(f.mass_residual.max_abs()))
    }

    /// `w·τ ≥ −tol` on both walls in every frame.
    pub fn wall_tangential_nonnegative(&self, tol: f64) -> bool {
        self.frames.iter().all(|f| match &f.w_wall {
            Some(w) => w.tangential(&self.grid).min() >= -tol,
            None => true,
        })
    }
}
