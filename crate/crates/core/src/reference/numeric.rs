//! Reference pairs from a refined inviscid run, restricted to the coarse grid.

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField, VectorField};
use crate::ops::{gradient, velocity_gradient};
use crate::solver::{extrapolated_walls, run, RunConfig, State};

use super::{Jet, TestFrame, TestPair};

/// Growth of `‖∇u‖_∞ + 2/(γ−1)‖∇c‖_∞` above which the run is not smooth.
pub const SMOOTHNESS_GROWTH_LIMIT: f64 = 10.0;

fn restrict(fine: &State, coarse: Grid, refine: usize) -> (ScalarField, VectorField) {
    let fg = fine.grid;
    let n = coarse.len();
    let (mut r, mut m1, mut m2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let inv = 1.0 / (refine * refine) as f64;
    for j in 0..coarse.ny {
        for i in 0..coarse.nx {
            let k = coarse.idx(i, j);
            for b in 0..refine {
                for a in 0..refine {
                    let q = fg.idx(i * refine + a, j * refine + b);
                    r[k] += fine.rho.data[q] * inv;
                    m1[k] += fine.mom.x[q] * inv;
                    m2[k] += fine.mom.y[q] * inv;
                }
            }
        }
    }
    (ScalarField { grid: coarse, data: r }, VectorField { grid: coarse, x: m1, y: m2 })
}

fn smoothness(state: &State, gamma: f64, a0: f64) -> f64 {
    let u = state.velocity();
    let walls = state.grid.has_walls().then(|| extrapolated_walls(&u));
    let gu = velocity_gradient(&u, walls.as_ref().map(|w| w.pair()));
    let c = state.rho.map(|r| (a0 * gamma * r.max(0.0).powf(gamma - 1.0)).sqrt());
    let gc = gradient(&c);
    let gu_inf = (0..gu.grid.len())
        .map(|k| gu.at_index(k).iter().flatten().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    let gc_inf = (0..gc.grid.len()).map(|k| gc.x[k].hypot(gc.y[k])).fold(0.0_f64, f64::max);
    gu_inf + 2.0 / (gamma - 1.0) * gc_inf
}

/// Weights of the three-point derivative at `t[at]` using nodes `t[0..3]`.
fn three_point(t: [f64; 3], at: usize) -> [f64; 3] {
    let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
    match at {
        0 => [-(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))],
        1 => [-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))],
        _ => [h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2.0 * h2 + h1) / (h2 * (h1 + h2))],
    }
}

/// Time derivative of a sequence of fields at each node.
fn time_derivative(times: &[f64], fields: &[&[f64]]) -> Vec<Vec<f64>> {
    let nt = times.len();
    let n = fields.first().map_or(0, |f| f.len());
    (0..nt)
        .map(|k| match nt {
            1 => vec![0.0; n],
            2 => {
                let dt = times[1] - times[0];
                (0..n).map(|q| (fields[1][q] - fields[0][q]) / dt).collect()
            }
            _ => {
                let (s, at) = if k == 0 {
                    (0, 0)
                } else if k == nt - 1 {
                    (nt - 3, 2)
                } else {
                    (k - 1, 1)
                };
                let c = three_point([times[s], times[s + 1], times[s + 2]], at);
                (0..n).map(|q| c[0] * fields[s][q] + c[1] * fields[s + 1][q] + c[2] * fields[s + 2][q]).collect()
            }
        })
        .collect()
}

/// Runs `config` (which must be inviscid) at `refine`× resolution, restricts
/// each snapshot by block averaging, and differentiates the restricted fields.
///
/// Fails with `NotSmooth` when the smoothness indicator grows by more than
/// [`SMOOTHNESS_GROWTH_LIMIT`].
pub fn euler_numeric_reference(config: &RunConfig, refine: usize) -> Result<TestPair> {
    if config.epsilon != 0.0 {
        return Err(Error::Config("the numeric reference needs an inviscid run (epsilon = 0)".into()));
    }
    if refine == 0 {
        return Err(Error::Config("refinement factor must be at least 1".into()));
    }
    let coarse = config.grid;
    let fine_grid = Grid::new(coarse.nx * refine, coarse.ny * refine, coarse.lx, coarse.ly, coarse.topology)?;
    let traj = run(&RunConfig { grid: fine_grid, ..config.clone() })?;
    let model = config.model;

    let s: Vec<f64> = traj.snapshots.iter().map(|s| smoothness(&s.state, model.gamma, model.a0)).collect();
    let growth = if s[0] > 0.0 { s.iter().fold(0.0_f64, |m, v| m.max(*v)) / s[0] } else { 1.0 };
    if growth > SMOOTHNESS_GROWTH_LIMIT {
        return Err(Error::NotSmooth { growth });
    }

    let times = traj.times();
    let mut rs = Vec::with_capacity(times.len());
    let mut ws = Vec::with_capacity(times.len());
    for snap in &traj.snapshots {
        let (r, m) = restrict(&snap.state, coarse, refine);
        let w = VectorField {
            grid: coarse,
            x: m.x.iter().zip(&r.data).map(|(a, b)| a / b).collect(),
            y: m.y.iter().zip(&r.data).map(|(a, b)| a / b).collect(),
        };
        rs.push(r);
        ws.push(w);
    }
    let r_t = time_derivative(&times, &rs.iter().map(|f| f.data.as_slice()).collect::<Vec<_>>());
    let w1_t = time_derivative(&times, &ws.iter().map(|f| f.x.as_slice()).collect::<Vec<_>>());
    let w2_t = time_derivative(&times, &ws.iter().map(|f| f.y.as_slice()).collect::<Vec<_>>());

    let mut frames = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let (r, w) = (&rs[k], &ws[k]);
        let walls = coarse.has_walls().then(|| extrapolated_walls(w));
        let gr = gradient(r);
        let gw = velocity_gradient(w, walls.as_ref().map(|v| v.pair()));
        let jets: Vec<Jet> = (0..coarse.len())
            .map(|q| Jet {
                r: r.data[q],
                r_t: r_t[k][q],
                grad_r: [gr.x[q], gr.y[q]],
                w: [w.x[q], w.y[q]],
                w_t: [w1_t[k][q], w2_t[k][q]],
                grad_w: gw.at_index(q),
            })
            .collect();
        frames.push(TestFrame::from_jets(coarse, t, &jets, &model, walls));
    }
    TestPair::assemble("euler-numeric".into(), coarse, frames)
}
