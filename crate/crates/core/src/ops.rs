//! Second-order discrete calculus on cell-centred fields.
//!
//! x is always periodic. In y a torus wraps; on a channel the rows next to a wall
//! use one-sided stencils, built either from interior values only or from an
//! explicit wall value located on the wall itself (half a cell from the centre).

use crate::grid::{Grid, ScalarField, TensorField, VectorField, Wall};

/// Values of a scalar on both walls, one per boundary face.
#[derive(Debug, Clone, PartialEq)]
pub struct WallValues {
    pub bottom: Vec<f64>,
    pub top: Vec<f64>,
}

impl WallValues {
    pub fn zeros(grid: &Grid) -> Self {
        WallValues { bottom: vec![0.0; grid.nx], top: vec![0.0; grid.nx] }
    }

    pub fn get(&self, wall: Wall) -> &[f64] {
        match wall {
            Wall::Bottom => &self.bottom,
            Wall::Top => &self.top,
        }
    }
}

/// Centred periodic x-derivative.
pub fn ddx(f: &[f64], grid: &Grid) -> Vec<f64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let inv = 0.5 / grid.hx();
    let mut out = vec![0.0; f.len()];
    for j in 0..ny {
        let row = &f[j * nx..(j + 1) * nx];
        let dst = &mut out[j * nx..(j + 1) * nx];
        for i in 0..nx {
            let ip = if i + 1 == nx { 0 } else { i + 1 };
            let im = if i == 0 { nx - 1 } else { i - 1 };
            dst[i] = (row[ip] - row[im]) * inv;
        }
    }
    out
}

/// y-derivative at cell centres.
pub fn ddy(f: &[f64], grid: &Grid, walls: Option<&WallValues>) -> Vec<f64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let h = grid.hy();
    let inv2 = 0.5 / h;
    let mut out = vec![0.0; f.len()];
    let at = |i: usize, j: usize| f[j * nx + i];
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            out[k] = if grid.has_walls() && j == 0 {
                match walls {
                    Some(w) => (-4.0 / 3.0 * w.bottom[i] + at(i, 0) + at(i, 1) / 3.0) / h,
                    None => (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) * inv2,
                }
            } else if grid.has_walls() && j == ny - 1 {
                match walls {
                    Some(w) => (4.0 / 3.0 * w.top[i] - at(i, ny - 1) - at(i, ny - 2) / 3.0) / h,
                    None => (3.0 * at(i, ny - 1) - 4.0 * at(i, ny - 2) + at(i, ny - 3)) * inv2,
                }
            } else {
                let jp = if j + 1 == ny { 0 } else { j + 1 };
                let jm = if j == 0 { ny - 1 } else { j - 1 };
                (at(i, jp) - at(i, jm)) * inv2
            };
        }
    }
    out
}

/// Value on a wall extrapolated quadratically from the three nearest centres.
pub fn wall_extrapolate(f: &[f64], grid: &Grid, wall: Wall) -> Vec<f64> {
    let nx = grid.nx;
    let (j0, j1, j2) = wall_rows(grid, wall);
    (0..nx).map(|i| (15.0 * f[j0 * nx + i] - 10.0 * f[j1 * nx + i] + 3.0 * f[j2 * nx + i]) / 8.0).collect()
}

/// `∂f/∂y` evaluated on the wall itself, second order.
///
/// Without a wall value the derivative comes from the three nearest centres;
/// with one, from the wall value and the two nearest centres.
pub fn wall_ddy(f: &[f64], grid: &Grid, wall: Wall, wall_value: Option<&[f64]>) -> Vec<f64> {
    let nx = grid.nx;
    let h = grid.hy();
    let (j0, j1, j2) = wall_rows(grid, wall);
    // derivative along the inward coordinate s, then mapped to y
    let sign = match wall {
        Wall::Bottom => 1.0,
        Wall::Top => -1.0,
    };
    (0..nx)
        .map(|i| {
            let f0 = f[j0 * nx + i];
            let f1 = f[j1 * nx + i];
            let ds = match wall_value {
                Some(w) => (-8.0 / 3.0 * w[i] + 3.0 * f0 - f1 / 3.0) / h,
                None => (-2.0 * f0 + 3.0 * f1 - f[j2 * nx + i]) / h,
            };
            sign * ds
        })
        .collect()
}

/// Centred periodic derivative of a wall trace along x.
pub fn trace_ddx(values: &[f64], grid: &Grid) -> Vec<f64> {
    let nx = values.len();
    let inv = 0.5 / grid.hx();
    (0..nx)
        .map(|i| {
            let ip = if i + 1 == nx { 0 } else { i + 1 };
            let im = if i == 0 { nx - 1 } else { i - 1 };
            (values[ip] - values[im]) * inv
        })
        .collect()
}

fn wall_rows(grid: &Grid, wall: Wall) -> (usize, usize, usize) {
    match wall {
        Wall::Bottom => (0, 1, 2),
        Wall::Top => (grid.ny - 1, grid.ny - 2, grid.ny - 3),
    }
}

/// Gradient of a scalar or vector field.
pub trait Gradient {
    type Output;
    fn gradient(&self) -> Self::Output;
}

impl Gradient for ScalarField {
    type Output = VectorField;
    fn gradient(&self) -> VectorField {
        let g = &self.grid;
        VectorField { grid: *g, x: ddx(&self.data, g), y: ddy(&self.data, g, None) }
    }
}

impl Gradient for VectorField {
    type Output = TensorField;
    fn gradient(&self) -> TensorField {
        velocity_gradient(self, None)
    }
}

pub fn gradient<F: Gradient>(field: &F) -> F::Output {
    field.gradient()
}

/// `∇v` with optional wall values for each component.
pub fn velocity_gradient(v: &VectorField, walls: Option<(&WallValues, &WallValues)>) -> TensorField {
    let g = &v.grid;
    TensorField {
        grid: *g,
        xx: ddx(&v.x, g),
        xy: ddy(&v.x, g, walls.map(|w| w.0)),
        yx: ddx(&v.y, g),
        yy: ddy(&v.y, g, walls.map(|w| w.1)),
    }
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let g = &v.grid;
    let dx = ddx(&v.x, g);
    let dy = ddy(&v.y, g, None);
    ScalarField { grid: *g, data: dx.iter().zip(&dy).map(|(a, b)| a + b).collect() }
}

/// Scalar vorticity `ω = ∂x v₂ − ∂y v₁`.
pub fn curl2d(v: &VectorField) -> ScalarField {
    let g = &v.grid;
    let dx = ddx(&v.y, g);
    let dy = ddy(&v.x, g, None);
    ScalarField { grid: *g, data: dx.iter().zip(&dy).map(|(a, b)| a - b).collect() }
}
