use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub quantity: String,
    pub pairs: Vec<(f64, f64)>,
    /// Least-squares slope of `log(value)` against `log(ε)`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `value ≈ C εᵖ` by least squares in log-log coordinates.
pub fn estimate_rate(quantity: &str, pairs: &[(f64, f64)]) -> Result<RateEstimate> {
    if pairs.len() < 3 {
        return Err(HarnessError::Rate(format!("{quantity}: need at least 3 points, got {}", pairs.len())));
    }
    let bad: Vec<String> = pairs
        .iter()
        .filter(|(e, v)| !(*e > 0.0 && *v > 0.0 && e.is_finite() && v.is_finite()))
        .map(|(e, v)| format!("({e}, {v})"))
        .collect();
    if !bad.is_empty() {
        return Err(HarnessError::Rate(format!("{quantity}: nonpositive or non-finite entries {}", bad.join(", "))));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::Rate(format!("{quantity}: all epsilons coincide")));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(RateEstimate { quantity: quantity.into(), pairs: pairs.to_vec(), slope, intercept, r_squared })
}
