//! Viscosity sweeps: independent runs in parallel, assembled in fixed `ε` order.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use cnse_core::diagnostics::{criteria_report, CriteriaReport};
use cnse_core::reference::TestPair;
use cnse_core::solver::snapshot::write_trajectory;
use cnse_core::solver::{run, RunStats, Trajectory};

use crate::config::{ExperimentConfig, ReferenceSection};
use crate::emit;
use crate::error::{HarnessError, Result};

pub fn check_epsilons(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(HarnessError::Config("the sweep needs at least one epsilon".into()));
    }
    for (k, e) in eps.iter().enumerate() {
        let last = k + 1 == eps.len();
        if !(e.is_finite() && (*e > 0.0 || (last && *e == 0.0))) {
            return Err(HarnessError::Config(format!("epsilon {e} must be positive (0 only as the last entry)")));
        }
    }
    if let Some(w) = eps.windows(2).find(|w| w[1] >= w[0]) {
        return Err(HarnessError::Config(format!("epsilons must strictly decrease, got {} then {}", w[0], w[1])));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub experiment: ExperimentConfig,
    /// Strictly decreasing.
    pub epsilons: Vec<f64>,
    /// Worker threads; 0 uses one per core.
    pub jobs: usize,
    pub output: Option<PathBuf>,
    pub save_snapshots: bool,
}

impl SweepConfig {
    /// Takes the epsilon list and job count from the `[sweep]` section, or a
    /// single run at `run.epsilon` when absent.
    pub fn from_experiment(experiment: ExperimentConfig, output: Option<PathBuf>) -> Result<Self> {
        let (epsilons, jobs) = match &experiment.sweep {
            Some(s) => (s.epsilons.clone(), s.jobs),
            None => (vec![experiment.run.epsilon], 1),
        };
        check_epsilons(&epsilons)?;
        Ok(SweepConfig { experiment, epsilons, jobs, output, save_snapshots: false })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok,
    BlowUp(String),
    Failed(String),
}

impl RunStatus {
    pub fn label(&self) -> String {
        match self {
            RunStatus::Ok => "ok".into(),
            RunStatus::BlowUp(m) => format!("blowup: {m}"),
            RunStatus::Failed(m) => format!("failed: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub epsilon: f64,
    pub status: RunStatus,
    pub report: Option<CriteriaReport>,
    pub stats: Option<RunStats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub epsilon: f64,
    pub e_rel_t: f64,
    pub kato: f64,
    pub pairing: f64,
    pub int_m: f64,
    pub theta0_hat: f64,
    pub gronwall_margin: f64,
    pub status: String,
}

impl RunOutcome {
    pub fn summary(&self) -> SummaryRow {
        match &self.report {
            Some(r) => SummaryRow {
                epsilon: self.epsilon,
                e_rel_t: r.e_rel_final(),
                kato: r.kato_total,
                pairing: r.pairing_direct,
                int_m: r.ckv_integral,
                theta0_hat: r.theta0_hat,
                gronwall_margin: r.gronwall.margin,
                status: if r.gronwall.pass { "ok".into() } else { "gronwall-violated".into() },
            },
            None => SummaryRow {
                epsilon: self.epsilon,
                e_rel_t: f64::NAN,
                kato: f64::NAN,
                pairing: f64::NAN,
                int_m: f64::NAN,
                theta0_hat: f64::NAN,
                gronwall_margin: f64::NAN,
                status: self.status.label(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub outcomes: Vec<RunOutcome>,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<SummaryRow> {
        self.outcomes.iter().map(RunOutcome::summary).collect()
    }

    pub fn reports(&self) -> Vec<&CriteriaReport> {
        self.outcomes.iter().filter_map(|o| o.report.as_ref()).collect()
    }
}

/// One run plus its report. `shared` is a reference built once for the sweep.
pub fn run_single(exp: &ExperimentConfig, epsilon: f64, shared: Option<&TestPair>) -> Result<(Trajectory, CriteriaReport)> {
    let cfg = exp.run_config(epsilon)?;
    let traj = run(&cfg)?;
    let owned;
    let pair = match shared {
        Some(p) => p,
        None => {
            owned = exp.reference(&traj.times())?;
            &owned
        }
    };
    let report = criteria_report(&traj, &cfg.model, &cfg.bc, pair, &exp.report_options())?;
    Ok((traj, report))
}

/// Per-run report file name; the index keeps names unique and ordered.
pub fn run_file_stem(index: usize, epsilon: f64) -> String {
    format!("run_{index:02}_eps_{epsilon:.3e}")
}

fn outcome(exp: &ExperimentConfig, index: usize, epsilon: f64, shared: Option<&TestPair>, out: Option<&Path>, save: bool) -> RunOutcome {
    match run_single(exp, epsilon, shared) {
        Ok((traj, report)) => {
            let mut status = RunStatus::Ok;
            if let Some(dir) = out {
                let stem = run_file_stem(index, epsilon);
                let written = std::fs::write(dir.join(format!("{stem}.csv")), report.to_csv()).map_err(HarnessError::from).and_then(|_| {
                    if save {
                        write_trajectory(dir.join(format!("{stem}.cnse")), &traj)?;
                    }
                    Ok(())
                });
                if let Err(e) = written {
                    status = RunStatus::Failed(e.to_string());
                }
            }
            RunOutcome { epsilon, status, stats: Some(traj.stats), report: Some(report) }
        }
        Err(HarnessError::Core(cnse_core::Error::BlowUp { time, reason })) => {
            RunOutcome { epsilon, status: RunStatus::BlowUp(format!("t = {time:.6e}, {reason}")), report: None, stats: None }
        }
        Err(e) => RunOutcome { epsilon, status: RunStatus::Failed(e.to_string()), report: None, stats: None },
    }
}

/// Runs every `ε` of the sweep. Failures are recorded per run; the sweep
/// itself only fails on an invalid config, an unusable reference or I/O on the
/// summary files.
pub fn run_sweep(sweep: &SweepConfig) -> Result<SweepResult> {
    check_epsilons(&sweep.epsilons)?;
    let exp = &sweep.experiment;
    let shared = match exp.reference {
        ReferenceSection::Euler { .. } => Some(exp.reference(&[])?),
        _ => None,
    };
    if let Some(dir) = &sweep.output {
        std::fs::create_dir_all(dir)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.jobs)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<RunOutcome> = pool.install(|| {
        sweep
            .epsilons
            .par_iter()
            .enumerate()
            .map(|(i, &eps)| outcome(exp, i, eps, shared.as_ref(), sweep.output.as_deref(), sweep.save_snapshots))
            .collect()
    });
    let result = SweepResult { outcomes };
    if let Some(dir) = &sweep.output {
        std::fs::write(dir.join(emit::SUMMARY_FILE), emit::summary_csv(&result.rows()))?;
        std::fs::write(dir.join(emit::PLOT_FILE), emit::plot_script(emit::SUMMARY_FILE))?;
    }
    Ok(result)
}
