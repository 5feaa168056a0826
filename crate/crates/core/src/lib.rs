//! Planar barotropic compressible Navier-Stokes with Navier-slip walls, plus the
//! energy and boundary-layer diagnostics used to study the vanishing-viscosity
//! limit.

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod ops;
pub mod quadrature;
pub mod reference;
pub mod solver;
pub mod stress;
pub mod thermo;

pub use error::{Error, Result};
pub use grid::{BoundaryTrace, Grid, ScalarField, TensorField, Topology, VectorField, Wall, WallTraces};
pub use thermo::{GasModel, SlipLaw};
