use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use cnse_core::diagnostics::criteria_report;
use cnse_core::solver::snapshot::{read_trajectory, write_trajectory};
use cnse_harness::config::ExperimentConfig;
use cnse_harness::emit::{self, column, plot_script, read_summary};
use cnse_harness::sweep::{run_file_stem, run_single, run_sweep, SweepConfig};
use cnse_harness::estimate_rate;

#[derive(Parser)]
#[command(name = "cnse", version, about = "Compressible Navier-Stokes inviscid-limit experiments")]
struct Cli {
    /// Root for relative output directories.
    #[arg(long, env = "CNSE_OUTPUT_ROOT", default_value = "cnse-out", global = true)]
    output_root: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    snapshot_interval: Option<f64>,
}

impl Overrides {
    fn load(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config).with_context(|| format!("loading {}", self.config.display()))?;
        if let Some(v) = self.epsilon {
            cfg.run.epsilon = v;
        }
        if let Some(v) = self.nx {
            cfg.grid.nx = v;
        }
        if let Some(v) = self.ny {
            cfg.grid.ny = v;
        }
        if let Some(v) = self.t_final {
            cfg.run.t_final = v;
        }
        if let Some(v) = self.cfl {
            cfg.run.cfl = v;
        }
        if let Some(v) = self.snapshot_interval {
            cfg.run.snapshot_interval = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its criteria report.
    Run {
        #[command(flatten)]
        cfg: Overrides,
        #[arg(long, default_value = "run")]
        output: PathBuf,
        /// Also store the trajectory in the binary snapshot format.
        #[arg(long)]
        save_snapshots: bool,
    },
    /// Run the epsilon sweep of a configuration.
    Sweep {
        #[command(flatten)]
        cfg: Overrides,
        #[arg(long, default_value = "sweep")]
        output: PathBuf,
        /// Worker threads (0: one per core); overrides the config.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        save_snapshots: bool,
    },
    /// Recompute the criteria report from stored snapshots.
    Diagnose {
        #[command(flatten)]
        cfg: Overrides,
        #[arg(long)]
        snapshots: PathBuf,
        #[arg(long, default_value = "diagnose")]
        output: PathBuf,
    },
    /// Fit a log-log rate to one column of a sweep summary.
    Rate {
        #[arg(long)]
        summary: PathBuf,
        #[arg(long, default_value = "Erel_T")]
        column: String,
    },
    /// Write the plot script for a sweep summary.
    Report {
        #[arg(long)]
        summary: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn resolve(root: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        root.join(p)
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let root = cli.output_root.clone();
    match cli.command {
        Command::Run { cfg, output, save_snapshots } => {
            let exp = cfg.load()?;
            let dir = resolve(&root, &output);
            std::fs::create_dir_all(&dir)?;
            let eps = exp.run.epsilon;
            let (traj, report) = run_single(&exp, eps, None)?;
            let stem = run_file_stem(0, eps);
            std::fs::write(dir.join(format!("{stem}.csv")), report.to_csv())?;
            if save_snapshots {
                write_trajectory(dir.join(format!("{stem}.cnse")), &traj)?;
            }
            println!(
                "epsilon {eps:.3e}: {} steps, E_rel(T) = {:.6e}, gronwall margin {:.3e} (slack {:.3e}) -> {}",
                traj.stats.steps,
                report.e_rel_final(),
                report.gronwall.margin,
                report.gronwall.slack,
                dir.display()
            );
        }
        Command::Sweep { cfg, output, jobs, save_snapshots } => {
            let exp = cfg.load()?;
            let dir = resolve(&root, &output);
            let mut sweep = SweepConfig::from_experiment(exp, Some(dir.clone()))?;
            if let Some(j) = jobs {
                sweep.jobs = j;
            }
            sweep.save_snapshots = save_snapshots;
            let result = run_sweep(&sweep)?;
            print!("{}", emit::summary_csv(&result.rows()));
            eprintln!("wrote {}", dir.display());
        }
        Command::Diagnose { cfg, snapshots, output } => {
            let exp = cfg.load()?;
            let traj = read_trajectory(&snapshots).with_context(|| format!("reading {}", snapshots.display()))?;
            let pair = exp.reference(&traj.times())?;
            let report = criteria_report(&traj, &traj.model, &traj.bc, &pair, &exp.report_options())?;
            let dir = resolve(&root, &output);
            std::fs::create_dir_all(&dir)?;
            let stem = run_file_stem(0, traj.epsilon());
            std::fs::write(dir.join(format!("{stem}.csv")), report.to_csv())?;
            println!("E_rel(T) = {:.6e}, K = {:.6e}, P = {:.6e}", report.e_rel_final(), report.kato_total, report.pairing_direct);
        }
        Command::Rate { summary, column: name } => {
            let rows = read_summary(&summary)?;
            let pairs: Vec<(f64, f64)> = column(&rows, &name)?.into_iter().filter(|(e, _)| *e > 0.0).collect();
            let r = estimate_rate(&name, &pairs)?;
            println!("{}: slope {:.6} (R² = {:.6}) over {} points", r.quantity, r.slope, r.r_squared, r.pairs.len());
        }
        Command::Report { summary, output } => {
            if !summary.exists() {
                bail!("no summary at {}", summary.display());
            }
            // next to the summary the script can use the bare file name
            let (dir, data) = match output {
                Some(o) => (resolve(&root, &o), std::fs::canonicalize(&summary)?.display().to_string()),
                None => (
                    summary.parent().map(Path::to_path_buf).unwrap_or_default(),
                    summary.file_name().and_then(|n| n.to_str()).unwrap_or(emit::SUMMARY_FILE).to_string(),
                ),
            };
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(emit::PLOT_FILE);
            std::fs::write(&path, plot_script(&data))?;
            println!("{}", path.display());
        }
    }
    Ok(())
}
