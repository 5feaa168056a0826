//! Cut-off of a test field to a strip of width `δ = c₀ε` along the walls:
//! `w_ε = w·χ(d/δ)`, with `χ(z) = (1 − z)²(1 + 2z)` on `[0, 1]` and `0` beyond.

use crate::error::{Error, Result};
use crate::grid::{Grid, TensorField, VectorField};
use crate::solver::WallVelocity;
use crate::stress::Mat2;

use super::{jet_of, AnalyticPair, DerivativePath, TestPair};

pub fn chi(z: f64) -> f64 {
    if z >= 1.0 {
        0.0
    } else {
        let z = z.max(0.0);
        (1.0 - z) * (1.0 - z) * (1.0 + 2.0 * z)
    }
}

pub fn chi_prime(z: f64) -> f64 {
    if (0.0..1.0).contains(&z) {
        -6.0 * z * (1.0 - z)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FakeLayerFrame {
    pub time: f64,
    pub w: VectorField,
    pub w_t: VectorField,
    /// `∇w_ε = χ∇w + (χ′/δ) w ⊗ ∇d`, computed from the analytic frame data.
    pub grad_w: TensorField,
    /// `w_ε = w` on the walls.
    pub wall: WallVelocity,
}

fn check(eps: f64, c0: f64) -> Result<f64> {
    let delta = c0 * eps;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(crate::error::domain(format!("layer width c0·ε must be positive, got {delta}")));
    }
    Ok(delta)
}

/// `(χ, χ′/δ·∂y d)` for a point at height `y`.
fn cutoff(y: f64, ly: f64, delta: f64) -> (f64, f64) {
    let (d, dd) = if y <= 0.5 * ly { (y, 1.0) } else { (ly - y, -1.0) };
    let z = d / delta;
    (chi(z), chi_prime(z) / delta * dd)
}

fn cut_grad(g: Mat2, w: [f64; 2], c: f64, dc: f64) -> Mat2 {
    [[c * g[0][0], c * g[0][1] + w[0] * dc], [c * g[1][0], c * g[1][1] + w[1] * dc]]
}

pub fn fake_layer(pair: &TestPair, eps: f64, c0: f64) -> Result<Vec<FakeLayerFrame>> {
    let g: Grid = pair.grid;
    g.require_channel("fake_layer")?;
    let delta = check(eps, c0)?;
    pair.frames
        .iter()
        .map(|f| {
            let wall = f.w_wall.clone().ok_or_else(|| Error::InvalidTestPair("channel test pair lacks wall values".into()))?;
            let mut w = VectorField::zeros(g);
            let mut w_t = VectorField::zeros(g);
            let mut grad_w = TensorField::zeros(g);
            for j in 0..g.ny {
                let (c, dc) = cutoff(g.y_center(j), g.ly, delta);
                for i in 0..g.nx {
                    let k = g.idx(i, j);
                    let wk = [f.w.x[k], f.w.y[k]];
                    w.x[k] = c * wk[0];
                    w.y[k] = c * wk[1];
                    w_t.x[k] = c * f.w_t.x[k];
                    w_t.y[k] = c * f.w_t.y[k];
                    grad_w.set_index(k, cut_grad(f.grad_w.at_index(k), wk, c, dc));
                }
            }
            Ok(FakeLayerFrame { time: f.time, w, w_t, grad_w, wall })
        })
        .collect()
}

/// Sup norms of the cut-off field per time, from dense sampling of the jets.
#[derive(Debug, Clone, PartialEq)]
pub struct FakeLayerBounds {
    pub times: Vec<f64>,
    /// `‖div w_ε‖_∞`
    pub div: Vec<f64>,
    /// `‖∂t w_ε‖_∞`
    pub dt: Vec<f64>,
    /// `‖ε∇w_ε‖_∞` (Frobenius norm pointwise).
    pub eps_grad: Vec<f64>,
}

impl FakeLayerBounds {
    pub fn max_div(&self) -> f64 {
        self.div.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_dt(&self) -> f64 {
        self.dt.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_eps_grad(&self) -> f64 {
        self.eps_grad.iter().copied().fold(0.0, f64::max)
    }
}

const SAMPLES_X: usize = 64;
const SAMPLES_Z: usize = 257;

pub fn fake_layer_bounds(
    pair: &dyn AnalyticPair,
    path: DerivativePath,
    grid: &Grid,
    eps: f64,
    c0: f64,
    times: &[f64],
) -> Result<FakeLayerBounds> {
    grid.require_channel("fake_layer_bounds")?;
    let delta = check(eps, c0)?;
    let reach = delta.min(0.5 * grid.ly);
    let mut out = FakeLayerBounds { times: times.to_vec(), div: vec![], dt: vec![], eps_grad: vec![] };
    for &t in times {
        let (mut dv, mut dtm, mut eg) = (0.0_f64, 0.0_f64, 0.0_f64);
        for a in 0..SAMPLES_X {
            let x = grid.lx * a as f64 / SAMPLES_X as f64;
            for b in 0..SAMPLES_Z {
                let d = reach * b as f64 / (SAMPLES_Z - 1) as f64;
                for y in [d, grid.ly - d] {
                    let jet = jet_of(pair, path, x, y, t);
                    let (c, dc) = cutoff(y, grid.ly, delta);
                    let gw = cut_grad(jet.grad_w, jet.w, c, dc);
                    dv = dv.max((gw[0][0] + gw[1][1]).abs());
                    dtm = dtm.max(c * jet.w_t[0].hypot(jet.w_t[1]));
                    let fro = gw.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
                    eg = eg.max(eps * fro);
                }
            }
        }
        out.div.push(dv);
        out.dt.push(dtm);
        out.eps_grad.push(eg);
    }
    Ok(out)
}
