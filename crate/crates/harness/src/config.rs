//! TOML experiment description.
//!
//! ```toml
//! [grid]
//! topology = "channel"          # or "torus"
//! nx = 128
//! ny = 128
//! lx = 1.0
//! ly = 1.0
//!
//! [gas]
//! a0 = 1.0
//! gamma = 1.4
//! mu = 1.0
//! eta = 1.0
//!
//! [wall]
//! law = "navier"                # "navier" (λ = lambda0·ε^alpha) or "no-slip"
//! lambda0 = 1.0
//! alpha = 1.0
//!
//! [run]
//! epsilon = 1e-2
//! t_final = 0.5
//! cfl = 0.4
//! snapshot_interval = 0.05
//!
//! [initial]
//! density = { kind = "uniform", value = 1.0 }
//! velocity = { kind = "shear", profile = "sine", amplitude = 1.0 }
//!
//! [reference]
//! kind = "shear"                # "shear", "oscillating-shear", "travelling", "euler"
//! profile = "sine"
//!
//! [diagnostics]
//! layer_c0 = 0.5
//!
//! [sweep]
//! epsilons = [1e-2, 3e-3, 1e-3]
//! jobs = 0                      # 0: one worker per core
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use cnse_core::diagnostics::ReportOptions;
use cnse_core::reference::{euler_numeric_reference, family_manufactured, family_shear, DerivativePath, OscillatingShear, TestPair, TravellingDensity};
use cnse_core::solver::{BcSpec, DensityProfile, InitialData, RunConfig, ShearProfile, VelocityProfile, DEFAULT_RHO_FLOOR};
use cnse_core::{GasModel, Grid, SlipLaw, Topology};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridSection,
    #[serde(default)]
    pub gas: GasSection,
    #[serde(default)]
    pub wall: WallSection,
    pub run: RunSection,
    pub initial: InitialSection,
    pub reference: ReferenceSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyName {
    Torus,
    Channel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub topology: TopologyName,
    pub nx: usize,
    pub ny: usize,
    #[serde(default = "one")]
    pub lx: f64,
    #[serde(default = "one")]
    pub ly: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    pub a0: f64,
    pub gamma: f64,
    pub mu: f64,
    pub eta: f64,
}

impl Default for GasSection {
    fn default() -> Self {
        GasSection { a0: 1.0, gamma: 1.4, mu: 1.0, eta: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallLaw {
    Navier,
    NoSlip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallSection {
    pub law: WallLaw,
    #[serde(default)]
    pub lambda0: f64,
    #[serde(default)]
    pub alpha: f64,
}

impl Default for WallSection {
    fn default() -> Self {
        WallSection { law: WallLaw::Navier, lambda0: 0.0, alpha: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub epsilon: f64,
    pub t_final: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub snapshot_interval: f64,
    #[serde(default = "default_floor")]
    pub rho_floor: f64,
}

fn default_cfl() -> f64 {
    0.4
}

fn default_floor() -> f64 {
    DEFAULT_RHO_FLOOR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensitySpec {
    Uniform { value: f64 },
    Pulse { base: f64, amplitude: f64, width: f64, center: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VelocitySpec {
    Rest,
    Uniform { value: [f64; 2] },
    Shear { profile: String, amplitude: f64 },
    Cellular { amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub density: DensitySpec,
    pub velocity: VelocitySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReferenceSection {
    /// `r = r0`, `w = (amplitude·W(y), 0)`.
    Shear {
        profile: String,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        r0: f64,
    },
    OscillatingShear,
    Travelling {
        amplitude: f64,
        mode: u32,
        speed: f64,
        flux_speed: f64,
        #[serde(default)]
        cross: f64,
        #[serde(default = "one_u32")]
        cross_mode: u32,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        finite_difference: bool,
    },
    /// An inviscid run from the same initial data at `refine`× resolution.
    Euler {
        #[serde(default = "two")]
        refine: usize,
    },
}

fn one_u32() -> u32 {
    1
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    #[serde(default = "one")]
    pub kato_width: f64,
    #[serde(default = "half")]
    pub layer_c0: f64,
    #[serde(default = "half")]
    pub young_split: f64,
    #[serde(default = "five_percent")]
    pub slack_fraction: f64,
    #[serde(default = "yes")]
    pub wall_forcing: bool,
}

fn half() -> f64 {
    0.5
}

fn five_percent() -> f64 {
    0.05
}

fn yes() -> bool {
    true
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        let d = ReportOptions::default();
        DiagnosticsSection {
            kato_width: d.kato_width,
            layer_c0: d.layer_c0,
            young_split: d.young_split,
            slack_fraction: d.slack_fraction,
            wall_forcing: d.wall_forcing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub jobs: usize,
}

fn shear_profile(name: &str) -> Result<ShearProfile> {
    ShearProfile::from_name(name).ok_or_else(|| HarnessError::Config(format!("unknown shear profile `{name}`")))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.run_config(self.run.epsilon)?.validate()?;
        match &self.reference {
            ReferenceSection::Euler { refine: 0 } => {
                return Err(HarnessError::Config("reference refinement must be at least 1".into()));
            }
            ReferenceSection::Shear { profile, .. } => {
                shear_profile(profile)?;
            }
            _ => {}
        }
        if let Some(s) = &self.sweep {
            crate::sweep::check_epsilons(&s.epsilons)?;
        }
        if self.wall.lambda0 < 0.0 {
            return Err(HarnessError::Config("lambda0 must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        let g = &self.grid;
        let topology = match g.topology {
            TopologyName::Torus => Topology::Torus,
            TopologyName::Channel => Topology::Channel,
        };
        Ok(Grid::new(g.nx, g.ny, g.lx, g.ly, topology)?)
    }

    pub fn model(&self) -> Result<GasModel> {
        let law = match self.wall.law {
            WallLaw::NoSlip => SlipLaw::NoSlip,
            WallLaw::Navier => SlipLaw::Power { lambda0: self.wall.lambda0, alpha: self.wall.alpha },
        };
        let g = &self.gas;
        Ok(GasModel::new(g.a0, g.gamma, g.mu, g.eta, law)?)
    }

    pub fn initial(&self) -> Result<InitialData> {
        let density = match self.initial.density {
            DensitySpec::Uniform { value } => DensityProfile::Uniform(value),
            DensitySpec::Pulse { base, amplitude, width, center } => DensityProfile::Pulse { base, amplitude, width, center },
        };
        let velocity = match &self.initial.velocity {
            VelocitySpec::Rest => VelocityProfile::Rest,
            VelocitySpec::Uniform { value } => VelocityProfile::Uniform(*value),
            VelocitySpec::Shear { profile, amplitude } => VelocityProfile::Shear { profile: shear_profile(profile)?, amplitude: *amplitude },
            VelocitySpec::Cellular { amplitude } => VelocityProfile::Cellular { amplitude: *amplitude },
        };
        Ok(InitialData { density, velocity })
    }

    /// Solver configuration at viscosity `epsilon`, with `λ_ε` from the wall law.
    pub fn run_config(&self, epsilon: f64) -> Result<RunConfig> {
        let grid = self.grid()?;
        let model = self.model()?;
        Ok(RunConfig {
            grid,
            model,
            bc: BcSpec::from_slip_law(model.slip_law, epsilon, grid.topology),
            epsilon,
            t_final: self.run.t_final,
            cfl: self.run.cfl,
            snapshot_interval: self.run.snapshot_interval,
            initial: self.initial()?,
            rho_floor: self.run.rho_floor,
        })
    }

    pub fn report_options(&self) -> ReportOptions {
        let d = &self.diagnostics;
        ReportOptions {
            kato_width: d.kato_width,
            layer_c0: d.layer_c0,
            young_split: d.young_split,
            slack_fraction: d.slack_fraction,
            wall_forcing: d.wall_forcing,
        }
    }

    /// Builds the reference pair on the diagnostics grid at `times`.
    ///
    /// The inviscid reference reruns the solver and ignores `times`; its snapshot
    /// times coincide with those of any run of this config.
    pub fn reference(&self, times: &[f64]) -> Result<TestPair> {
        let grid = self.grid()?;
        let model = self.model()?;
        let pair = match &self.reference {
            ReferenceSection::Shear { profile, amplitude, r0 } => family_shear(shear_profile(profile)?, *amplitude, *r0, &model, grid, times)?,
            ReferenceSection::OscillatingShear => {
                family_manufactured(&OscillatingShear { ly: grid.ly }, DerivativePath::Exact, &model, grid, times)?
            }
            ReferenceSection::Travelling { amplitude, mode, speed, flux_speed, cross, cross_mode, phase, finite_difference } => {
                let fam = TravellingDensity {
                    amplitude: *amplitude,
                    mode: *mode,
                    speed: *speed,
                    flux_speed: *flux_speed,
                    cross: *cross,
                    cross_mode: *cross_mode,
                    phase: *phase,
                    lx: grid.lx,
                };
                let path = if *finite_difference { DerivativePath::FiniteDifference } else { DerivativePath::Exact };
                family_manufactured(&fam, path, &model, grid, times)?
            }
            ReferenceSection::Euler { refine } => euler_numeric_reference(&self.run_config(0.0)?, *refine)?,
        };
        Ok(pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[grid]
topology = "channel"
nx = 16
ny = 16

[wall]
law = "navier"
lambda0 = 1.0
alpha = 1.0

[run]
epsilon = 0.01
t_final = 0.1
snapshot_interval = 0.05

[initial]
density = { kind = "uniform", value = 1.0 }
velocity = { kind = "shear", profile = "sine", amplitude = 1.0 }

[reference]
kind = "shear"
profile = "sine"

[sweep]
epsilons = [0.01, 0.001]
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.gas, GasSection::default());
        assert_eq!(cfg.run.cfl, 0.4);
        let rc = cfg.run_config(0.01).unwrap();
        assert_eq!(rc.bc, BcSpec::NavierSlip { lambda: 0.01 });
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::from_toml(&SAMPLE.replace("nx = 16", "nx = 16\nbogus = 1")).is_err());
        assert!(ExperimentConfig::from_toml(&SAMPLE.replace("[0.01, 0.001]", "[0.001, 0.01]")).is_err());
        assert!(ExperimentConfig::from_toml(&SAMPLE.replace("cfl = 0.4\n", "").replace("t_final = 0.1", "t_final = 0.1\ncfl = 2.0")).is_err());
        assert!(ExperimentConfig::from_toml(&SAMPLE.replace("\"sine\"\n\n[sweep]", "\"wobbly\"\n\n[sweep]")).is_err());
    }
}
