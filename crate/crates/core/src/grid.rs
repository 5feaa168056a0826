//! Rectangular cell-centred meshes and the fields that live on them.

use crate::error::{domain, Error, Result};
use crate::quadrature::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Periodic in both directions.
    Torus,
    /// Periodic in x, with flat walls at `y = 0` and `y = Ly`.
    Channel,
}

impl Topology {
    pub fn code(self) -> u8 {
        match self {
            Topology::Torus => 0,
            Topology::Channel => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Topology::Torus),
            1 => Some(Topology::Channel),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub topology: Topology,
}

pub const MIN_CELLS: usize = 8;

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, topology: Topology) -> Result<Self> {
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(domain(format!("grid needs at least {MIN_CELLS} cells per direction, got {nx}×{ny}")));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(domain(format!("domain lengths must be positive, got {lx}×{ly}")));
        }
        Ok(Grid { nx, ny, lx, ly, topology })
    }

    pub fn torus(n: usize, l: f64) -> Result<Self> {
        Grid::new(n, n, l, l, Topology::Torus)
    }

    pub fn channel(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Grid::new(nx, ny, lx, ly, Topology::Channel)
    }

    #[inline]
    pub fn hx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    #[inline]
    pub fn hy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.hx() * self.hy()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index: `j` (the y index) is the slow one.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.hx()
    }

    #[inline]
    pub fn y_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.hy()
    }

    pub fn has_walls(&self) -> bool {
        self.topology == Topology::Channel
    }

    pub(crate) fn require_channel(&self, op: &'static str) -> Result<()> {
        if self.has_walls() {
            Ok(())
        } else {
            Err(Error::Topology { op, required: "channel" })
        }
    }

    /// Distance from the centre of row `j` to the nearest wall; `+∞` on a torus.
    #[inline]
    pub fn wall_distance_row(&self, j: usize) -> f64 {
        match self.topology {
            Topology::Torus => f64::INFINITY,
            Topology::Channel => {
                let y = self.y_center(j);
                y.min(self.ly - y)
            }
        }
    }

    /// Fraction of row `j` lying within `width` of a wall.
    pub fn strip_fraction(&self, j: usize, width: f64) -> f64 {
        let hy = self.hy();
        let lo = j as f64 * hy;
        let hi = (j + 1) as f64 * hy;
        let w = width.min(0.5 * self.ly);
        let bottom = if hi <= w {
            hy
        } else if lo >= w {
            0.0
        } else {
            w - lo
        };
        let top_edge = self.ly - w;
        let top = if lo >= top_edge {
            hy
        } else if hi <= top_edge {
            0.0
        } else {
            hi - top_edge
        };
        ((bottom + top) / hy).min(1.0)
    }

    /// Whether two grids describe the same mesh.
    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wall {
    Bottom,
    Top,
}

impl Wall {
    pub const BOTH: [Wall; 2] = [Wall::Bottom, Wall::Top];

    /// Outward unit normal.
    pub fn normal(self) -> [f64; 2] {
        match self {
            Wall::Bottom => [0.0, -1.0],
            Wall::Top => [0.0, 1.0],
        }
    }

    /// Tangent `τ = n^⊥ = (−n₂, n₁)`, so that `(ω × n)·τ = ω` in 2D.
    pub fn tangent(self) -> [f64; 2] {
        let n = self.normal();
        [-n[1], n[0]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub grid: Grid,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// A 2×2 tensor per cell. For a velocity gradient, entry `(a, b)` is `∂_b u_a`,
/// i.e. column `b` holds `∂_{x_b} u`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    pub grid: Grid,
    pub xx: Vec<f64>,
    pub xy: Vec<f64>,
    pub yx: Vec<f64>,
    pub yy: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        ScalarField { grid, data: vec![value; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            let y = grid.y_center(j);
            for i in 0..grid.nx {
                data.push(f(grid.x_center(i), y));
            }
        }
        ScalarField { grid, data }
    }

    pub fn from_vec(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(domain(format!("expected {} values, got {}", grid.len(), data.len())));
        }
        Ok(ScalarField { grid, data })
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[self.grid.idx(i, j)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField { grid: self.grid, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(self.grid.same_as(&other.grid), "grid mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        ScalarField { grid: self.grid, data }
    }

    /// `α·self + β·other`.
    pub fn lin_comb(&self, alpha: f64, other: &ScalarField, beta: f64) -> Self {
        self.zip_with(other, |a, b| alpha * a + beta * b)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        VectorField { grid, x: vec![0.0; grid.len()], y: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> [f64; 2]) -> Self {
        let mut out = VectorField::zeros(grid);
        for j in 0..grid.ny {
            let y = grid.y_center(j);
            for i in 0..grid.nx {
                let v = f(grid.x_center(i), y);
                let k = grid.idx(i, j);
                out.x[k] = v[0];
                out.y[k] = v[1];
            }
        }
        out
    }

    pub fn from_components(x: ScalarField, y: ScalarField) -> Result<Self> {
        if !x.grid.same_as(&y.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField { grid: x.grid, x: x.data, y: y.data })
    }

    pub fn component(&self, c: usize) -> ScalarField {
        let data = if c == 0 { self.x.clone() } else { self.y.clone() };
        ScalarField { grid: self.grid, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> [f64; 2] {
        let k = self.grid.idx(i, j);
        [self.x[k], self.y[k]]
    }

    pub fn lin_comb(&self, alpha: f64, other: &VectorField, beta: f64) -> Self {
        assert!(self.grid.same_as(&other.grid), "grid mismatch");
        let comb = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(&p, &q)| alpha * p + beta * q).collect();
        VectorField { grid: self.grid, x: comb(&self.x, &other.x), y: comb(&self.y, &other.y) }
    }

    /// Pointwise Euclidean norm squared.
    pub fn norm_sq(&self) -> ScalarField {
        let data = self.x.iter().zip(&self.y).map(|(a, b)| a * a + b * b).collect();
        ScalarField { grid: self.grid, data }
    }

    /// Pointwise dot product.
    pub fn dot(&self, other: &VectorField) -> ScalarField {
        assert!(self.grid.same_as(&other.grid), "grid mismatch");
        let data = (0..self.grid.len()).map(|k| self.x[k] * other.x[k] + self.y[k] * other.y[k]).collect();
        ScalarField { grid: self.grid, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().chain(&self.y).fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }
}

impl TensorField {
    pub fn zeros(grid: Grid) -> Self {
        let z = vec![0.0; grid.len()];
        TensorField { grid, xx: z.clone(), xy: z.clone(), yx: z.clone(), yy: z }
    }

    /// The tensor at cell `k` as `[[∂x u1, ∂y u1], [∂x u2, ∂y u2]]`.
    #[inline]
    pub fn at_index(&self, k: usize) -> [[f64; 2]; 2] {
        [[self.xx[k], self.xy[k]], [self.yx[k], self.yy[k]]]
    }

    #[inline]
    pub fn set_index(&mut self, k: usize, t: [[f64; 2]; 2]) {
        self.xx[k] = t[0][0];
        self.xy[k] = t[0][1];
        self.yx[k] = t[1][0];
        self.yy[k] = t[1][1];
    }

    pub fn trace(&self) -> ScalarField {
        let data = self.xx.iter().zip(&self.yy).map(|(a, b)| a + b).collect();
        ScalarField { grid: self.grid, data }
    }

    /// Pointwise Frobenius product `A : B`.
    pub fn contract(&self, other: &TensorField) -> ScalarField {
        assert!(self.grid.same_as(&other.grid), "grid mismatch");
        let data = (0..self.grid.len())
            .map(|k| {
                self.xx[k] * other.xx[k] + self.xy[k] * other.xy[k] + self.yx[k] * other.yx[k] + self.yy[k] * other.yy[k]
            })
            .collect();
        ScalarField { grid: self.grid, data }
    }

    pub fn norm_sq(&self) -> ScalarField {
        self.contract(self)
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = |v: &[f64]| v.iter().map(|a| a * s).collect();
        TensorField { grid: self.grid, xx: m(&self.xx), xy: m(&self.xy), yx: m(&self.yx), yy: m(&self.yy) }
    }

    pub fn max_abs(&self) -> f64 {
        self.xx.iter().chain(&self.xy).chain(&self.yx).chain(&self.yy).fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Per-wall quantity sampled at the `nx` boundary faces.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub wall: Wall,
    pub values: Vec<f64>,
    /// Arc length of each boundary face; they sum to `Lx`.
    pub weights: Vec<f64>,
}

impl BoundaryTrace {
    pub fn new(grid: &Grid, wall: Wall, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nx {
            return Err(domain(format!("wall trace needs {} values, got {}", grid.nx, values.len())));
        }
        Ok(BoundaryTrace { wall, values, weights: vec![grid.hx(); grid.nx] })
    }

    pub fn from_fn(grid: &Grid, wall: Wall, f: impl Fn(usize) -> f64) -> Self {
        BoundaryTrace { wall, values: (0..grid.nx).map(f).collect(), weights: vec![grid.hx(); grid.nx] }
    }

    pub fn integrate(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for (v, w) in self.values.iter().zip(&self.weights) {
            acc.add(v * w);
        }
        acc.value()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// The traces of one quantity on both channel walls.
#[derive(Debug, Clone, PartialEq)]
pub struct WallTraces {
    pub bottom: BoundaryTrace,
    pub top: BoundaryTrace,
}

impl WallTraces {
    pub fn get(&self, wall: Wall) -> &BoundaryTrace {
        match wall {
            Wall::Bottom => &self.bottom,
            Wall::Top => &self.top,
        }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(Wall, usize) -> f64) -> Self {
        WallTraces {
            bottom: BoundaryTrace::from_fn(grid, Wall::Bottom, |i| f(Wall::Bottom, i)),
            top: BoundaryTrace::from_fn(grid, Wall::Top, |i| f(Wall::Top, i)),
        }
    }

    pub fn zip_with(&self, other: &WallTraces, f: impl Fn(f64, f64) -> f64) -> Self {
        let zip = |a: &BoundaryTrace, b: &BoundaryTrace| BoundaryTrace {
            wall: a.wall,
            values: a.values.iter().zip(&b.values).map(|(&p, &q)| f(p, q)).collect(),
            weights: a.weights.clone(),
        };
        WallTraces { bottom: zip(&self.bottom, &other.bottom), top: zip(&self.top, &other.top) }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.zip_with(self, |a, _| f(a))
    }

    pub fn max_abs(&self) -> f64 {
        self.bottom.max_abs().max(self.top.max_abs())
    }

    pub fn min(&self) -> f64 {
        self.bottom.min().min(self.top.min())
    }
}

/// `Σ value · hx` over both walls.
pub fn boundary_integrate(traces: &WallTraces) -> f64 {
    let mut acc = CompensatedSum::default();
    acc.add(traces.bottom.integrate());
    acc.add(traces.top.integrate());
    acc.value()
}

/// `min(y, Ly − y)` at cell centres; `+∞` everywhere on a torus.
pub fn wall_distance(grid: &Grid) -> ScalarField {
    let mut data = Vec::with_capacity(grid.len());
    for j in 0..grid.ny {
        let d = grid.wall_distance_row(j);
        data.extend(std::iter::repeat_n(d, grid.nx));
    }
    ScalarField { grid: *grid, data }
}
