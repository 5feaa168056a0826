//! CSV and gnuplot output. Every writer is byte-deterministic.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{HarnessError, Result};
use crate::sweep::SummaryRow;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const PLOT_FILE: &str = "summary.gp";
pub const SUMMARY_HEADER: &str = "epsilon,Erel_T,K,P,int_M,theta0_hat,gronwall_margin,status";

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        let cells = [r.epsilon, r.e_rel_t, r.kato, r.pairing, r.int_m, r.theta0_hat, r.gronwall_margin].map(num);
        // statuses may carry error text; keep the row one CSV record
        let status = r.status.replace([',', '\n', '"'], " ");
        let _ = writeln!(s, "{},{status}", cells.join(","));
    }
    s
}

#[derive(Debug, Deserialize)]
struct RawRow {
    epsilon: f64,
    #[serde(rename = "Erel_T")]
    e_rel_t: f64,
    #[serde(rename = "K")]
    kato: f64,
    #[serde(rename = "P")]
    pairing: f64,
    #[serde(rename = "int_M")]
    int_m: f64,
    theta0_hat: f64,
    gronwall_margin: f64,
    status: String,
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    rdr.deserialize::<RawRow>()
        .map(|r| {
            let r = r?;
            Ok(SummaryRow {
                epsilon: r.epsilon,
                e_rel_t: r.e_rel_t,
                kato: r.kato,
                pairing: r.pairing,
                int_m: r.int_m,
                theta0_hat: r.theta0_hat,
                gronwall_margin: r.gronwall_margin,
                status: r.status,
            })
        })
        .collect()
}

/// Selects a summary column by its header name.
pub fn column(rows: &[SummaryRow], name: &str) -> Result<Vec<(f64, f64)>> {
    let pick = |r: &SummaryRow| -> Option<f64> {
        Some(match name {
            "Erel_T" => r.e_rel_t,
            "K" => r.kato,
            "P" => r.pairing.abs(),
            "int_M" => r.int_m,
            "theta0_hat" => r.theta0_hat,
            "gronwall_margin" => r.gronwall_margin,
            _ => return None,
        })
    };
    rows.iter()
        .map(|r| pick(r).map(|v| (r.epsilon, v)).ok_or_else(|| HarnessError::Config(format!("unknown summary column `{name}`"))))
        .collect()
}

/// A gnuplot script drawing `E_rel(T)`, `K_ε` and `|P_ε|` against `ε` on log-log axes.
pub fn plot_script(summary: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 900,600\n\
         set output 'summary.png'\n\
         set logscale xy\n\
         set format x '%.0e'\n\
         set format y '%.0e'\n\
         set xlabel 'epsilon'\n\
         set key left top\n\
         plot '{summary}' every ::1 using 1:2 with linespoints title 'E_rel(T)', \\\n\
         \x20    '{summary}' every ::1 using 1:3 with linespoints title 'K', \\\n\
         \x20    '{summary}' every ::1 using 1:(abs($4)) with linespoints title '|P|'\n"
    )
}
