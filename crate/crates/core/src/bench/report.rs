//! JSON and CSV output for experiment reports and SQD traces.

use super::experiment::ExperimentReport;
use crate::error::{Error, Result};
use crate::sqd::SQDResult;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::Invalid(format!("unknown report format '{s}'"))),
        }
    }
}

/// One CSV row: one batch of one recovery iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub geometry: String,
    pub iteration: usize,
    pub batch: usize,
    pub dimension: usize,
    pub energy: f64,
    pub fci_energy: Option<f64>,
    pub deviation: Option<f64>,
    pub s2: f64,
    pub converged: bool,
    pub subspace_mode: String,
}

pub const TRACE_HEADER: [&str; 10] =
    ["geometry", "iteration", "batch", "dimension", "energy", "fci_energy", "deviation", "s2", "converged", "subspace_mode"];

pub fn trace_rows(label: &str, result: &SQDResult, fci: Option<f64>) -> Vec<TraceRow> {
    let mut rows = Vec::new();
    for it in &result.iterations {
        for (b, rec) in it.batches.iter().enumerate() {
            rows.push(TraceRow {
                geometry: label.to_owned(),
                iteration: it.iteration,
                batch: b,
                dimension: rec.dimension,
                energy: rec.energy,
                fci_energy: fci,
                deviation: fci.map(|f| rec.energy - f),
                s2: rec.s2,
                converged: rec.converged,
                subspace_mode: result.subspace_mode.clone(),
            });
        }
    }
    rows
}

/// CSV text with a header line even when `rows` is empty.
pub fn trace_csv(rows: &[TraceRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(TRACE_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn experiment_trace_rows(report: &ExperimentReport) -> Vec<TraceRow> {
    report
        .geometries
        .iter()
        .filter_map(|g| g.sqd.as_ref().map(|r| trace_rows(&g.label, r, g.fci_energy)))
        .flatten()
        .collect()
}

/// Writes `report.json` or `trace.csv` into `dir`; returns the path written.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let (name, text) = match format {
        ReportFormat::Json => ("report.json", report.to_json()? + "\n"),
        ReportFormat::Csv => ("trace.csv", trace_csv(&experiment_trace_rows(report))?),
    };
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}
