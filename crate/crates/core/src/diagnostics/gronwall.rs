use crate::quadrature::cumulative_trapezoid;

#[derive(Debug, Clone, PartialEq)]
pub struct GronwallVerdict {
    /// `E_rel(0)e^{A(t)} + ∫₀ᵗ e^{A(t) − A(s)} f(s) ds` with `A(t) = c₀∫₀ᵗ‖div w‖_∞`.
    pub bound: Vec<f64>,
    /// `max_t (E_rel(t) − bound(t))`.
    pub margin: f64,
    /// Allowed discretization excess.
    pub slack: f64,
    pub pass: bool,
}

/// Checks `E_rel(t) ≤ bound(t)` on a common time grid, allowing a slack of
/// `slack_fraction · (E_rel(0) + max_t |forcing contribution|)`.
pub fn gronwall_check(
    times: &[f64],
    e_rel: &[f64],
    div_w_inf: &[f64],
    forcing: &[f64],
    c0: f64,
    slack_fraction: f64,
) -> GronwallVerdict {
    let n = times.len();
    assert!(e_rel.len() == n && div_w_inf.len() == n && forcing.len() == n, "series must share the time grid");
    if n == 0 {
        return GronwallVerdict { bound: vec![], margin: 0.0, slack: 0.0, pass: true };
    }
    let a: Vec<f64> = cumulative_trapezoid(times, div_w_inf).into_iter().map(|v| c0 * v).collect();
    let weighted: Vec<f64> = forcing.iter().zip(&a).map(|(f, a)| (-a).exp() * f).collect();
    let inner = cumulative_trapezoid(times, &weighted);
    let mut peak = 0.0_f64;
    let bound: Vec<f64> = (0..n)
        .map(|k| {
            let grow = a[k].exp();
            let contrib = grow * inner[k];
            peak = peak.max(contrib.abs());
            e_rel[0] * grow + contrib
        })
        .collect();
    let margin = e_rel.iter().zip(&bound).map(|(e, b)| e - b).fold(f64::NEG_INFINITY, f64::max);
    let slack = slack_fraction * (e_rel[0] + peak);
    GronwallVerdict { pass: margin <= slack, bound, margin, slack }
}
