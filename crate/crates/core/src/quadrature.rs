//! Midpoint-rule volume quadrature, strip integrals and trapezoid time integration.
//!
//! Every reduction goes through [`CompensatedSum`] in a fixed order so results do
//! not depend on how callers schedule work.

use crate::error::{domain, Result};
use crate::grid::{Grid, ScalarField};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    All,
    /// Points within the given distance of a wall. Rows partially inside the
    /// strip contribute in proportion to the covered fraction of the row.
    Strip(f64),
}

/// Per-row quadrature weight (cell area times covered fraction).
pub fn row_weights(grid: &Grid, region: Region) -> Result<Vec<f64>> {
    let area = grid.cell_area();
    match region {
        Region::All => Ok(vec![area; grid.ny]),
        Region::Strip(width) => {
            grid.require_channel("strip integral")?;
            if !(width >= 0.0) {
                return Err(domain(format!("strip width must be nonnegative, got {width}")));
            }
            Ok((0..grid.ny).map(|j| area * grid.strip_fraction(j, width)).collect())
        }
    }
}

/// `∫ f` over `region` by the midpoint rule.
pub fn integrate(field: &ScalarField, region: Region) -> Result<f64> {
    let weights = row_weights(&field.grid, region)?;
    Ok(integrate_weighted(field, &weights))
}

pub(crate) fn integrate_weighted(field: &ScalarField, row_weights: &[f64]) -> f64 {
    let g = &field.grid;
    let mut acc = CompensatedSum::default();
    for (j, &w) in row_weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let row = &field.data[j * g.nx..(j + 1) * g.nx];
        let mut r = CompensatedSum::default();
        for &v in row {
            r.add(v);
        }
        acc.add(r.value() * w);
    }
    acc.value()
}

/// Running trapezoid integral `∫_{t0}^{t_k} f dt` at every sample time.
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    let mut out = Vec::with_capacity(times.len());
    let mut acc = CompensatedSum::default();
    for k in 0..times.len() {
        if k > 0 {
            acc.add(0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]));
        }
        out.push(acc.value());
    }
    out
}

pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    cumulative_trapezoid(times, values).last().copied().unwrap_or(0.0)
}
