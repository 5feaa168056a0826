use std::path::Path;
use std::process::{Command, Output};

use cnse_harness::emit::{read_summary, SUMMARY_FILE, SUMMARY_HEADER};

const SMALL: &str = r#"
[grid]
topology = "channel"
nx = 16
ny = 16

[wall]
law = "navier"
lambda0 = 1.0
alpha = 1.0

[run]
epsilon = 1e-2
t_final = 0.05
snapshot_interval = 0.025

[initial]
density = { kind = "uniform", value = 1.0 }
velocity = { kind = "shear", profile = "cosine", amplitude = 1.0 }

[reference]
kind = "shear"
profile = "cosine"

[sweep]
epsilons = [1e-2, 3e-3, 1e-3]
"#;

fn cnse(root: &Path, args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_cnse")).arg("--output-root").arg(root).args(args).output().unwrap();
    assert!(out.status.success(), "cnse {args:?} failed:\n{}", String::from_utf8_lossy(&out.stderr));
    out
}

fn setup() -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    (dir, cfg)
}

#[test]
fn sweep_then_rate_and_report() {
    let (dir, cfg) = setup();
    let out = cnse(dir.path(), &["sweep", "--config", &cfg, "--output", "s", "--jobs", "2"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with(SUMMARY_HEADER));
    let summary = dir.path().join("s").join(SUMMARY_FILE);
    let rows = read_summary(&summary).unwrap();
    assert_eq!(rows.iter().map(|r| r.epsilon).collect::<Vec<_>>(), [1e-2, 3e-3, 1e-3]);
    assert!(rows.iter().all(|r| r.status == "ok"));
    for (i, eps) in ["1.000e-2", "3.000e-3", "1.000e-3"].iter().enumerate() {
        assert!(dir.path().join("s").join(format!("run_{i:02}_eps_{eps}.csv")).exists());
    }

    let rate = cnse(dir.path(), &["rate", "--summary", summary.to_str().unwrap(), "--column", "K"]);
    assert!(String::from_utf8(rate.stdout).unwrap().starts_with("K: slope "));

    let report = cnse(dir.path(), &["report", "--summary", summary.to_str().unwrap(), "--output", "plots"]);
    let script = String::from_utf8(report.stdout).unwrap();
    let text = std::fs::read_to_string(script.trim()).unwrap();
    assert!(text.contains(&std::fs::canonicalize(&summary).unwrap().display().to_string()));
}

#[test]
fn run_with_snapshots_then_diagnose() {
    let (dir, cfg) = setup();
    cnse(dir.path(), &["run", "--config", &cfg, "--nx", "24", "--output", "one", "--save-snapshots"]);
    let stem = "run_00_eps_1.000e-2";
    let csv = std::fs::read_to_string(dir.path().join("one").join(format!("{stem}.csv"))).unwrap();
    let snaps = dir.path().join("one").join(format!("{stem}.cnse"));
    cnse(dir.path(), &["diagnose", "--config", &cfg, "--nx", "24", "--snapshots", snaps.to_str().unwrap(), "--output", "again"]);
    let again = std::fs::read_to_string(dir.path().join("again").join(format!("{stem}.csv"))).unwrap();
    assert_eq!(csv, again);
}

#[test]
fn invalid_input_fails_cleanly() {
    let (dir, cfg) = setup();
    let out = Command::new(env!("CARGO_BIN_EXE_cnse"))
        .arg("--output-root")
        .arg(dir.path())
        .args(["run", "--config", &cfg, "--cfl", "2.0"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cfl"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, SMALL.replace("nx = 16", "nx = 16\nnz = 3")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cnse")).args(["run", "--config", bad.to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let cfg = cnse_harness::ExperimentConfig::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        cfg.validate().unwrap();
        n += 1;
    }
    assert!(n >= 3);
}
