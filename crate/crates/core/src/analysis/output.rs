//! Result files. CSV is the canonical format; JSONL carries the same records
//! one JSON object per line. Floats in CSV are written with 17 significant
//! digits, so identical reports give identical bytes.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::bath::Fig1Row;
use super::fit::ScalingFit;
use super::sweep::{SweepPoint, SweepReport};
use crate::error::{Result, ThermoError};

pub const SWEEP_CSV_HEADER: &str =
    "n,sigma_beta_empirical,sigma_beta_theory,invalid_fraction,trials";
pub const FIG1_CSV_HEADER: &str = "beta_eps,eps_bar_over_eps,sqrt_n_sigma_beta_eps";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv|jsonl)")),
        }
    }
}

/// One JSONL line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Point(SweepPoint),
    Fit(ScalingFit),
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(report: &SweepReport, mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for p in &report.points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.n,
            float(p.sigma_beta_empirical),
            float(p.sigma_beta_theory),
            float(p.invalid_fraction),
            p.trials
        )?;
    }
    if let Some(fit) = &report.fit {
        writeln!(
            out,
            "#fit,{},{},{}",
            float(fit.slope),
            float(fit.stderr_slope),
            float(fit.r_squared)
        )?;
    }
    out.flush()
}

pub fn write_jsonl<W: Write>(report: &SweepReport, mut out: W) -> io::Result<()> {
    let records = report
        .points
        .iter()
        .cloned()
        .map(Record::Point)
        .chain(report.fit.clone().map(Record::Fit));
    for record in records {
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Parses JSONL written by [`write_jsonl`] back into a report.
pub fn read_jsonl<R: BufRead>(input: R) -> io::Result<SweepReport> {
    let mut report = SweepReport::default();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line)? {
            Record::Point(p) => report.points.push(p),
            Record::Fit(f) => report.fit = Some(f),
        }
    }
    Ok(report)
}

pub fn write_fig1_csv<W: Write>(rows: &[Fig1Row], mut out: W) -> io::Result<()> {
    writeln!(out, "{FIG1_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{}",
            float(r.beta_eps),
            float(r.eps_bar_over_eps),
            float(r.scaled_sigma_beta)
        )?;
    }
    out.flush()
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> ThermoError + '_ {
    move |source| ThermoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes a sweep report to `destination` in the requested format.
pub fn emit_results(report: &SweepReport, format: OutputFormat, destination: &Path) -> Result<()> {
    let file = File::create(destination).map_err(io_error(destination))?;
    let out = BufWriter::new(file);
    match format {
        OutputFormat::Csv => write_csv(report, out),
        OutputFormat::Jsonl => write_jsonl(report, out),
    }
    .map_err(io_error(destination))
}

/// Reads a JSONL report from `path`.
pub fn load_jsonl(path: &Path) -> Result<SweepReport> {
    let file = File::open(path).map_err(io_error(path))?;
    read_jsonl(BufReader::new(file)).map_err(io_error(path))
}
