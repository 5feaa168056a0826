//! Barotropic constitutive law `p = a0 ρ^γ`, its pressure potential `H`, and the
//! relative entropy (Bregman divergence of `H`) used by every energy diagnostic.

use crate::error::{domain, Result};

/// Slip coefficient as a function of the viscosity scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlipLaw {
    /// `λ_ε = ∞`: the wall condition degenerates to `u = 0`.
    NoSlip,
    /// `λ_ε = λ0 · ε^α`.
    Power { lambda0: f64, alpha: f64 },
}

impl SlipLaw {
    pub fn free_slip() -> Self {
        SlipLaw::Power { lambda0: 0.0, alpha: 0.0 }
    }

    /// Evaluates `λ_ε`; `f64::INFINITY` encodes no-slip.
    pub fn coefficient(&self, epsilon: f64) -> f64 {
        match *self {
            SlipLaw::NoSlip => f64::INFINITY,
            SlipLaw::Power { lambda0, alpha } => {
                if lambda0 == 0.0 {
                    0.0
                } else {
                    lambda0 * epsilon.powf(alpha)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub a0: f64,
    pub gamma: f64,
    /// Shear viscosity.
    pub mu: f64,
    /// Bulk viscosity.
    pub eta: f64,
    pub slip_law: SlipLaw,
}

impl GasModel {
    pub fn new(a0: f64, gamma: f64, mu: f64, eta: f64, slip_law: SlipLaw) -> Result<Self> {
        let model = GasModel { a0, gamma, mu, eta, slip_law };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a0 > 0.0 && self.a0.is_finite()) {
            return Err(domain(format!("a0 must be positive, got {}", self.a0)));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(domain(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(domain(format!("mu must be positive, got {}", self.mu)));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(domain(format!("eta must be positive, got {}", self.eta)));
        }
        if let SlipLaw::Power { lambda0, alpha } = self.slip_law {
            if !(lambda0 >= 0.0 && lambda0.is_finite() && alpha.is_finite()) {
                return Err(domain(format!("slip law needs finite λ0 ≥ 0, got {lambda0}")));
            }
        }
        Ok(())
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.pressure_unchecked(rho))
    }

    pub fn h_energy(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.h_unchecked(rho))
    }

    /// `H(ρ; r) = H(ρ) − H(r) − H′(r)(ρ − r)`.
    pub fn h_relative(&self, rho: f64, r: f64) -> Result<f64> {
        check_density(rho)?;
        if !(r > 0.0) {
            return Err(domain(format!("reference density must be positive, got {r}")));
        }
        Ok(self.h_relative_unchecked(rho, r))
    }

    // The unchecked variants are used in the inner loops of the solver and the
    // diagnostics, where densities are already floored.

    #[inline]
    pub fn pressure_unchecked(&self, rho: f64) -> f64 {
        self.a0 * rho.powf(self.gamma)
    }

    #[inline]
    pub fn h_unchecked(&self, rho: f64) -> f64 {
        self.a0 * rho.powf(self.gamma) / (self.gamma - 1.0)
    }

    /// `H′(ρ) = a0 γ ρ^{γ−1} / (γ − 1)`.
    #[inline]
    pub fn h_prime(&self, rho: f64) -> f64 {
        self.a0 * self.gamma * rho.powf(self.gamma - 1.0) / (self.gamma - 1.0)
    }

    /// `H″(ρ) = a0 γ ρ^{γ−2}`; infinite at vacuum when γ < 2.
    #[inline]
    pub fn h_second(&self, rho: f64) -> f64 {
        self.a0 * self.gamma * rho.powf(self.gamma - 2.0)
    }

    #[inline]
    pub fn h_relative_unchecked(&self, rho: f64, r: f64) -> f64 {
        self.h_unchecked(rho) - self.h_unchecked(r) - self.h_prime(r) * (rho - r)
    }

    #[inline]
    pub fn sound_speed(&self, rho: f64) -> f64 {
        (self.a0 * self.gamma * rho.max(0.0).powf(self.gamma - 1.0)).sqrt()
    }

    /// `ρ(H′(ρ) − H′(r)) − r(ρ − r)H″(r)`, the density weight multiplying `div w`
    /// in the reduced remainder.
    #[inline]
    pub fn bregman_flux(&self, rho: f64, r: f64) -> f64 {
        rho * (self.h_prime(rho) - self.h_prime(r)) - r * (rho - r) * self.h_second(r)
    }

    /// Largest eigenvalue of the (self-adjoint) map `G ↦ σ(G)` on 2×2 matrices.
    ///
    /// Antisymmetric inputs map to zero, trace-free symmetric ones are scaled by
    /// `2μ`, and the identity direction by `2μ/3 + 2η`.
    pub fn stress_operator_norm(&self) -> f64 {
        (2.0 * self.mu).max(2.0 * self.mu / 3.0 + 2.0 * self.eta)
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("density must be finite and nonnegative, got {rho}")))
    }
}

/// Comparison function of the equivalence `H(ρ; r) ≈ Φ(ρ, r)`.
pub fn equivalence_profile(gamma: f64, rho: f64, r: f64) -> f64 {
    let d = (rho - r).abs();
    if d <= 1.0 {
        d * d
    } else {
        d.powf(gamma)
    }
}

/// A rectangle of `(r, ρ)` values scanned when measuring equivalence constants.
#[derive(Debug, Clone, Copy)]
pub struct DensityBox {
    pub r_min: f64,
    pub r_max: f64,
    pub rho_max: f64,
}

const R_SAMPLES: usize = 64;
const RHO_SAMPLES: usize = 401;
/// Samples with `|ρ − r| < DIAGONAL_BAND · r` are skipped: both sides vanish
/// quadratically there and their ratio is dominated by cancellation error.
const DIAGONAL_BAND: f64 = 1e-2;

impl DensityBox {
    pub fn new(r_min: f64, r_max: f64, rho_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_min <= r_max && rho_max > r_max && rho_max.is_finite()) {
            return Err(domain(format!(
                "need 0 < r_min ≤ r_max < rho_max, got r ∈ [{r_min}, {r_max}], rho_max = {rho_max}"
            )));
        }
        Ok(DensityBox { r_min, r_max, rho_max })
    }

    /// Deterministic tensor grid of off-diagonal sample points.
    fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..R_SAMPLES).flat_map(move |a| {
            let r = if R_SAMPLES == 1 {
                self.r_min
            } else {
                self.r_min + (self.r_max - self.r_min) * a as f64 / (R_SAMPLES - 1) as f64
            };
            (0..RHO_SAMPLES).filter_map(move |b| {
                let rho = self.rho_max * b as f64 / (RHO_SAMPLES - 1) as f64;
                ((rho - r).abs() >= DIAGONAL_BAND * r).then_some((r, rho))
            })
        })
    }
}

/// Measures `(c_low, c_high)` with `c_low Φ ≤ H(ρ; r) ≤ c_high Φ` on the box.
pub fn equiv_constants(model: &GasModel, r_min: f64, r_max: f64, rho_max: f64) -> Result<(f64, f64)> {
    let bx = DensityBox::new(r_min, r_max, rho_max)?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for (r, rho) in bx.samples() {
        let ratio = model.h_relative_unchecked(rho, r) / equivalence_profile(model.gamma, rho, r);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

/// Smallest `c0` with `|ρ(H′(ρ) − H′(r)) − r(ρ − r)H″(r)| ≤ c0 H(ρ; r)` on the box.
pub fn bregman_coercivity_constant(model: &GasModel, r_min: f64, r_max: f64, rho_max: f64) -> Result<f64> {
    let bx = DensityBox::new(r_min, r_max, rho_max)?;
    let mut c0 = 0.0_f64;
    for (r, rho) in bx.samples() {
        let ratio = model.bregman_flux(rho, r).abs() / model.h_relative_unchecked(rho, r);
        c0 = c0.max(ratio);
    }
    Ok(c0)
}
