//! Semi-discrete right-hand side: MUSCL/van Leer reconstruction of `(ρ, u, v)`,
//! Rusanov convective flux, and a compact central viscous flux.
//!
//! Wall faces use the mirror state of the interior trace, so the mass and
//! tangential-momentum convective fluxes through a wall are exactly zero.

use crate::grid::{Grid, VectorField};
use crate::ops::{ddx, ddy, trace_ddx, wall_ddy};
use crate::stress::stress_at;
use crate::thermo::GasModel;

use super::bc::{wall_velocity, BcSpec};

/// Time derivatives of the conserved variables.
pub(crate) struct Rates {
    pub rho: Vec<f64>,
    pub m1: Vec<f64>,
    pub m2: Vec<f64>,
}

#[inline]
fn van_leer(a: f64, b: f64) -> f64 {
    if a * b > 0.0 {
        2.0 * a * b / (a + b)
    } else {
        0.0
    }
}

#[derive(Clone, Copy)]
struct Prim {
    rho: f64,
    un: f64,
    ut: f64,
}

/// Rusanov flux along the face normal for (mass, normal momentum, tangential momentum).
#[inline]
fn rusanov(model: &GasModel, l: Prim, r: Prim) -> [f64; 3] {
    let pl = model.pressure_unchecked(l.rho);
    let pr = model.pressure_unchecked(r.rho);
    let a = (l.un.abs() + model.sound_speed(l.rho)).max(r.un.abs() + model.sound_speed(r.rho));
    let ql = [l.rho, l.rho * l.un, l.rho * l.ut];
    let qr = [r.rho, r.rho * r.un, r.rho * r.ut];
    let fl = [ql[1], ql[1] * l.un + pl, ql[2] * l.un];
    let fr = [qr[1], qr[1] * r.un + pr, qr[2] * r.un];
    [
        0.5 * (fl[0] + fr[0]) - 0.5 * a * (qr[0] - ql[0]),
        0.5 * (fl[1] + fr[1]) - 0.5 * a * (qr[1] - ql[1]),
        0.5 * (fl[2] + fr[2]) - 0.5 * a * (qr[2] - ql[2]),
    ]
}

/// Face traces `(left, right)` of a periodic 1D line of primitives.
fn periodic_traces(q: &[Prim]) -> Vec<(Prim, Prim)> {
    let n = q.len();
    let slopes: Vec<Prim> = (0..n)
        .map(|i| {
            let m = q[(i + n - 1) % n];
            let c = q[i];
            let p = q[(i + 1) % n];
            Prim {
                rho: van_leer(c.rho - m.rho, p.rho - c.rho),
                un: van_leer(c.un - m.un, p.un - c.un),
                ut: van_leer(c.ut - m.ut, p.ut - c.ut),
            }
        })
        .collect();
    (0..n)
        .map(|i| {
            let ip = (i + 1) % n;
            (face(q[i], slopes[i], 0.5), face(q[ip], slopes[ip], -0.5))
        })
        .collect()
}

#[inline]
fn face(c: Prim, s: Prim, sign: f64) -> Prim {
    Prim { rho: c.rho + sign * s.rho, un: c.un + sign * s.un, ut: c.ut + sign * s.ut }
}

/// Interior face traces of a wall-bounded line (`n − 1` faces) plus the traces
/// at the first and last cells facing the walls.
///
/// Next to a wall the density slope uses a zero-gradient ghost, the normal
/// velocity an odd reflection, and the tangential velocity the one-sided
/// interior difference.
fn bounded_traces(q: &[Prim]) -> (Vec<(Prim, Prim)>, Prim, Prim) {
    let n = q.len();
    let slope = |i: usize| -> Prim {
        let c = q[i];
        if i == 0 || i == n - 1 {
            let (inner, sgn) = if i == 0 { (q[1], 1.0) } else { (q[n - 2], -1.0) };
            // differences oriented along increasing index
            let din = |a: f64, b: f64| sgn * (b - a);
            let d_rho = din(c.rho, inner.rho);
            let d_un = din(c.un, inner.un);
            let d_ut = din(c.ut, inner.ut);
            let ghost_un = sgn * 2.0 * c.un;
            Prim { rho: van_leer(0.0, d_rho), un: van_leer(ghost_un, d_un), ut: d_ut }
        } else {
            let m = q[i - 1];
            let p = q[i + 1];
            Prim {
                rho: van_leer(c.rho - m.rho, p.rho - c.rho),
                un: van_leer(c.un - m.un, p.un - c.un),
                ut: van_leer(c.ut - m.ut, p.ut - c.ut),
            }
        }
    };
    let slopes: Vec<Prim> = (0..n).map(slope).collect();
    let inner = (0..n - 1).map(|i| (face(q[i], slopes[i], 0.5), face(q[i + 1], slopes[i + 1], -0.5))).collect();
    (inner, face(q[0], slopes[0], -0.5), face(q[n - 1], slopes[n - 1], 0.5))
}

#[inline]
fn mirror(p: Prim) -> Prim {
    Prim { rho: p.rho, un: -p.un, ut: p.ut }
}

pub(crate) fn primitives(rho: &[f64], m1: &[f64], m2: &[f64], floor: f64) -> (Vec<f64>, Vec<f64>) {
    let u = rho.iter().zip(m1).map(|(&r, &m)| if r > floor { m / r } else { 0.0 }).collect();
    let v = rho.iter().zip(m2).map(|(&r, &m)| if r > floor { m / r } else { 0.0 }).collect();
    (u, v)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn rates(
    grid: &Grid,
    model: &GasModel,
    bc: &BcSpec,
    epsilon: f64,
    floor: f64,
    rho: &[f64],
    m1: &[f64],
    m2: &[f64],
) -> Rates {
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let n = grid.len();
    let (u, v) = primitives(rho, m1, m2, floor);
    let mut out = Rates { rho: vec![0.0; n], m1: vec![0.0; n], m2: vec![0.0; n] };

    // x-direction convective fluxes
    let mut line = vec![Prim { rho: 0.0, un: 0.0, ut: 0.0 }; nx];
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            line[i] = Prim { rho: rho[k], un: u[k], ut: v[k] };
        }
        let traces = periodic_traces(&line);
        for (i, &(l, r)) in traces.iter().enumerate() {
            let f = rusanov(model, l, r);
            let kl = j * nx + i;
            let kr = j * nx + (i + 1) % nx;
            out.rho[kl] -= f[0] / hx;
            out.rho[kr] += f[0] / hx;
            out.m1[kl] -= f[1] / hx;
            out.m1[kr] += f[1] / hx;
            out.m2[kl] -= f[2] / hx;
            out.m2[kr] += f[2] / hx;
        }
    }

    // y-direction convective fluxes; un = v, ut = u
    let mut col = vec![Prim { rho: 0.0, un: 0.0, ut: 0.0 }; ny];
    for i in 0..nx {
        for j in 0..ny {
            let k = j * nx + i;
            col[j] = Prim { rho: rho[k], un: v[k], ut: u[k] };
        }
        let mut apply = |jl: Option<usize>, jr: Option<usize>, f: [f64; 3]| {
            if let Some(jl) = jl {
                let k = jl * nx + i;
                out.rho[k] -= f[0] / hy;
                out.m2[k] -= f[1] / hy;
                out.m1[k] -= f[2] / hy;
            }
            if let Some(jr) = jr {
                let k = jr * nx + i;
                out.rho[k] += f[0] / hy;
                out.m2[k] += f[1] / hy;
                out.m1[k] += f[2] / hy;
            }
        };
        if grid.has_walls() {
            let (inner, bottom, top) = bounded_traces(&col);
            for (j, &(l, r)) in inner.iter().enumerate() {
                apply(Some(j), Some(j + 1), rusanov(model, l, r));
            }
            let mut fb = rusanov(model, mirror(bottom), bottom);
            fb[0] = 0.0;
            fb[2] = 0.0;
            apply(None, Some(0), fb);
            let mut ft = rusanov(model, top, mirror(top));
            ft[0] = 0.0;
            ft[2] = 0.0;
            apply(Some(ny - 1), None, ft);
        } else {
            let traces = periodic_traces(&col);
            for (j, &(l, r)) in traces.iter().enumerate() {
                apply(Some(j), Some((j + 1) % ny), rusanov(model, l, r));
            }
        }
    }

    if epsilon > 0.0 {
        add_viscous(grid, model, bc, epsilon, &u, &v, &mut out);
    }
    out
}

fn add_viscous(grid: &Grid, model: &GasModel, bc: &BcSpec, epsilon: f64, u: &[f64], v: &[f64], out: &mut Rates) {
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let vel = VectorField { grid: *grid, x: u.to_vec(), y: v.to_vec() };
    let walls = wall_velocity(&vel, model, bc, epsilon);
    let ux = ddx(u, grid);
    let vx = ddx(v, grid);
    let uy = ddy(u, grid, walls.as_ref().map(|w| &w.u));
    let vy = ddy(v, grid, walls.as_ref().map(|w| &w.v));

    // x-faces: flux ε(σ11, σ21)
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            let kp = j * nx + (i + 1) % nx;
            let g = [[(u[kp] - u[k]) / hx, 0.5 * (uy[k] + uy[kp])], [(v[kp] - v[k]) / hx, 0.5 * (vy[k] + vy[kp])]];
            let s = stress_at(model, g);
            let f = [epsilon * s[0][0] / hx, epsilon * s[1][0] / hx];
            out.m1[k] += f[0];
            out.m2[k] += f[1];
            out.m1[kp] -= f[0];
            out.m2[kp] -= f[1];
        }
    }

    // y-faces: flux ε(σ12, σ22)
    let faces = if grid.has_walls() { ny - 1 } else { ny };
    for j in 0..faces {
        let jp = (j + 1) % ny;
        for i in 0..nx {
            let k = j * nx + i;
            let kp = jp * nx + i;
            let g = [[0.5 * (ux[k] + ux[kp]), (u[kp] - u[k]) / hy], [0.5 * (vx[k] + vx[kp]), (v[kp] - v[k]) / hy]];
            let s = stress_at(model, g);
            let f = [epsilon * s[0][1] / hy, epsilon * s[1][1] / hy];
            out.m1[k] += f[0];
            out.m2[k] += f[1];
            out.m1[kp] -= f[0];
            out.m2[kp] -= f[1];
        }
    }

    if let Some(w) = walls {
        for (wall_u, wall_v, wall, j, sign) in [
            (&w.u.bottom, &w.v.bottom, crate::grid::Wall::Bottom, 0, -1.0),
            (&w.u.top, &w.v.top, crate::grid::Wall::Top, ny - 1, 1.0),
        ] {
            let dudx = trace_ddx(wall_u, grid);
            let dvdx = trace_ddx(wall_v, grid);
            let dudy = wall_ddy(u, grid, wall, Some(wall_u));
            let dvdy = wall_ddy(v, grid, wall, Some(wall_v));
            for i in 0..nx {
                let s = stress_at(model, [[dudx[i], dudy[i]], [dvdx[i], dvdy[i]]]);
                // outward flux through the wall face is −ε σ e_y · (±1)
                let k = j * nx + i;
                out.m1[k] += sign * epsilon * s[0][1] / hy;
                out.m2[k] += sign * epsilon * s[1][1] / hy;
            }
        }
    }
}
