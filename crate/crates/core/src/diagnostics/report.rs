use std::fmt::Write as _;

use crate::error::Result;
use crate::grid::{boundary_integrate, ScalarField};
use crate::quadrature::{integrate, Region};
use crate::reference::TestPair;
use crate::solver::energy::{boundary_dissipation_rate, dissipation_rate, energy_total};
use crate::solver::{BcSpec, Trajectory};
use crate::stress::dissipation_coercivity;
use crate::thermo::{bregman_coercivity_constant, GasModel};

use super::{bardos_titi_pairing, ckv_margin, gronwall_check, kato_integral, relative_energy, remainder, GronwallVerdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Strip width for the Kato integral, as a multiple of `ε`.
    pub kato_width: f64,
    /// Width of the cut-off layer for the volume pairing, as a multiple of `ε`.
    pub layer_c0: f64,
    /// Fraction `s` of `θ₀` used to absorb `εσ(∇u):∇w`, giving `C₀ = K²/(4sθ₀)`.
    pub young_split: f64,
    pub slack_fraction: f64,
    /// Include the wall pairing `∫_{∂Ω} εσn·τ (u·τ − w·τ)` in the Gronwall forcing.
    pub wall_forcing: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { kato_width: 1.0, layer_c0: 0.5, young_split: 0.5, slack_fraction: 0.05, wall_forcing: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaReport {
    pub epsilon: f64,
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub boundary_dissipation: Vec<f64>,
    pub e_rel: Vec<f64>,
    pub remainder: Vec<f64>,
    pub kato_h: Vec<f64>,
    pub kato_u: Vec<f64>,
    pub kato_grad: Vec<f64>,
    pub pairing_increment: Vec<f64>,
    pub ckv_m: Vec<f64>,
    /// Gronwall forcing per snapshot.
    pub forcing: Vec<f64>,
    pub kato_total: f64,
    pub pairing_direct: f64,
    pub pairing_volume: f64,
    pub ckv_integral: f64,
    pub gronwall: GronwallVerdict,
    pub theta0_hat: f64,
    /// Bregman coercivity constant over the reference density range.
    pub c0: f64,
    /// `C₀` in the forcing term `C₀ε∫|∇w|²`.
    pub young_c0: f64,
    pub reference_nonnegative: Option<bool>,
}

pub const CSV_HEADER: &str = "time,E,diss,bdiss,Erel,R,K_H,K_u,K_grad,P_inc,M";

impl CriteriaReport {
    pub fn e_rel_final(&self) -> f64 {
        self.e_rel.last().copied().unwrap_or(0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for k in 0..self.times.len() {
            let row = [
                self.times[k],
                self.energy[k],
                self.dissipation[k],
                self.boundary_dissipation[k],
                self.e_rel[k],
                self.remainder[k],
                self.kato_h[k],
                self.kato_u[k],
                self.kato_grad[k],
                self.pairing_increment[k],
                self.ckv_m[k],
            ];
            let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }
}

/// Runs every diagnostic on `traj` against `pair`.
pub fn criteria_report(traj: &Trajectory, model: &GasModel, bc: &BcSpec, pair: &TestPair, opts: &ReportOptions) -> Result<CriteriaReport> {
    pair.check_against(traj)?;
    let g = traj.grid();
    let eps = traj.epsilon();
    let times = traj.times();
    let n = times.len();

    let mut energy = Vec::with_capacity(n);
    let mut diss = Vec::with_capacity(n);
    let mut bdiss = Vec::with_capacity(n);
    let mut e_rel = Vec::with_capacity(n);
    let mut rem = Vec::with_capacity(n);
    let mut theta = f64::INFINITY;
    let mut rho_max = 0.0_f64;
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let s = &snap.state;
        let walls = traj.wall_velocity_at(k);
        energy.push(energy_total(s, model));
        diss.push(dissipation_rate(s, model, walls.as_ref()));
        bdiss.push(boundary_dissipation_rate(s, bc, walls.as_ref()));
        e_rel.push(relative_energy(s, model, &pair.frames[k])?);
        rem.push(remainder(s, model, bc, &pair.frames[k])?);
        if let Some(t) = dissipation_coercivity(model, &s.velocity(), walls.as_ref().map(|w| w.pair()))?.theta0_hat {
            theta = theta.min(t);
        }
        rho_max = rho_max.max(s.rho.max());
    }
    let theta0_hat = if theta.is_finite() && theta > 0.0 { theta } else { model.mu };
    let k_norm = model.stress_operator_norm();
    let young_c0 = k_norm * k_norm / (4.0 * opts.young_split * theta0_hat);
    let (r_min, r_max) = pair.r_bounds;
    let c0 = bregman_coercivity_constant(model, r_min, r_max, 1.1 * rho_max.max(r_max))?;

    let zeros = vec![0.0; n];
    let (mut kato_h, mut kato_u, mut kato_grad, mut kato_total) = (zeros.clone(), zeros.clone(), zeros.clone(), 0.0);
    let (mut pinc, mut p_direct, mut p_volume) = (zeros.clone(), 0.0, 0.0);
    let (mut ckv_m, mut ckv_integral, mut reference_nonnegative) = (zeros.clone(), 0.0, None);
    if g.has_walls() {
        let k = kato_integral(traj, model, Some(opts.kato_width * eps))?;
        kato_total = k.total();
        (kato_h, kato_u, kato_grad) = (k.h_series, k.u_series, k.grad_series);
        let p = bardos_titi_pairing(traj, model, pair, opts.layer_c0)?;
        (pinc, p_direct, p_volume) = (p.increments, p.direct, p.volume);
        let c = ckv_margin(traj, Some(pair))?;
        (ckv_m, ckv_integral, reference_nonnegative) = (c.m, c.integral, c.reference_nonnegative);
    }

    let mut forcing = Vec::with_capacity(n);
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let s = &snap.state;
        let f = &pair.frames[k];
        let u = s.velocity();
        let data = (0..g.len())
            .map(|q| s.rho.data[q] * (f.residual.x[q] * (f.w.x[q] - u.x[q]) + f.residual.y[q] * (f.w.y[q] - u.y[q])))
            .collect();
        let mut val = integrate(&ScalarField { grid: g, data }, Region::All)?;
        val += young_c0 * eps * integrate(&f.grad_w.norm_sq(), Region::All)?;
        if opts.wall_forcing {
            if let (Some(rec), Some(ww)) = (&snap.walls, &f.w_wall) {
                let w_tau = ww.tangential(&g);
                val += boundary_integrate(&rec.traction.zip_with(&rec.u_tau.zip_with(&w_tau, |a, b| a - b), |a, b| a * b));
            }
        }
        forcing.push(val);
    }
    let gronwall = gronwall_check(&times, &e_rel, &pair.div_w_inf, &forcing, c0, opts.slack_fraction);

    Ok(CriteriaReport {
        epsilon: eps,
        times,
        energy,
        dissipation: diss,
        boundary_dissipation: bdiss,
        e_rel,
        remainder: rem,
        kato_h,
        kato_u,
        kato_grad,
        pairing_increment: pinc,
        ckv_m,
        forcing,
        kato_total,
        pairing_direct: p_direct,
        pairing_volume: p_volume,
        ckv_integral,
        gronwall,
        theta0_hat,
        c0,
        young_c0,
        reference_nonnegative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::reference::family_shear;
    use crate::solver::{run, InitialData, RunConfig, ShearProfile, DEFAULT_RHO_FLOOR};
    use crate::thermo::SlipLaw;

    #[test]
    fn rest_state_report() {
        let g = Grid::channel(16, 16, 1.0, 1.0).unwrap();
        let model = GasModel::new(1.0, 1.4, 1.0, 1.0, SlipLaw::NoSlip).unwrap();
        let cfg = RunConfig {
            grid: g,
            model,
            bc: BcSpec::NoSlip,
            epsilon: 0.01,
            t_final: 0.1,
            cfl: 0.4,
            snapshot_interval: 0.05,
            initial: InitialData::rest(1.0),
            rho_floor: DEFAULT_RHO_FLOOR,
        };
        let tr = run(&cfg).unwrap();
        let pair = family_shear(ShearProfile::Constant, 0.0, 1.0, &model, g, &tr.times()).unwrap();
        let rep = criteria_report(&tr, &model, &cfg.bc, &pair, &ReportOptions::default()).unwrap();
        let e0 = rep.energy[0];
        assert!(rep.energy.iter().all(|e| (e - e0).abs() < 1e-13));
        for s in [&rep.dissipation, &rep.e_rel, &rep.remainder, &rep.kato_u, &rep.kato_grad, &rep.pairing_increment, &rep.ckv_m] {
            assert!(s.iter().all(|v| v.abs() < 1e-13));
        }
        assert!(rep.gronwall.pass);
        let csv = rep.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 1 + rep.times.len());
    }
}
