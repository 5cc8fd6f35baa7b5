//! On-disk formats.
//!
//! Grids are written as long-format CSV with header `n,phi,w`, one record per
//! cell in n-major order. Floats use the shortest decimal that reads back to
//! the same `f64` (plain notation, exponent form below `1e-5` and above
//! `1e16`), so files round-trip bit for bit. JSON documents carry
//! `schema_version = 1`; timestamps live only in `metadata` and can be
//! omitted for byte-identical output.

use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::marginals::{PhaseDistribution, PhotonDistribution};
use crate::report::ValidationReport;
use crate::wigner::WignerGrid;

pub const SCHEMA_VERSION: u32 = 1;
pub const GRID_CSV_HEADER: &str = "n,phi,w";

/// Shortest round-trip decimal for `v`; zero of either sign prints as `0`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let a = v.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_grid_csv<W: Write>(grid: &WignerGrid, mut out: W) -> Result<()> {
    writeln!(out, "{GRID_CSV_HEADER}")?;
    let phis: Vec<String> = grid.phis().iter().map(|&p| format_f64(p)).collect();
    for n in 0..=grid.n_max() {
        for (j, phi) in phis.iter().enumerate() {
            writeln!(out, "{n},{phi},{}", format_f64(grid.value(n, j)))?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_grid_csv_file(grid: &WignerGrid, path: &Path) -> Result<()> {
    write_grid_csv(grid, BufWriter::new(File::create(path)?))
}

/// One `n,phi,w` record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRecord {
    pub n: usize,
    pub phi: f64,
    pub w: f64,
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize) -> Result<T> {
    field
        .and_then(|f| f.trim().parse().ok())
        .ok_or_else(|| Error::InvalidParameter(format!("malformed grid CSV record on line {line}")))
}

/// Reads records written by [`write_grid_csv`].
pub fn read_grid_csv<R: BufRead>(input: R) -> Result<Vec<GridRecord>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?;
    if header.as_deref().map(str::trim) != Some(GRID_CSV_HEADER) {
        return Err(Error::InvalidParameter("missing grid CSV header".into()));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let record = GridRecord {
            n: parse_field(fields.next(), i + 2)?,
            phi: parse_field(fields.next(), i + 2)?,
            w: parse_field(fields.next(), i + 2)?,
        };
        if fields.next().is_some() {
            return Err(Error::InvalidParameter(format!(
                "extra field in grid CSV record on line {}",
                i + 2
            )));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn write_photon_csv<W: Write>(dist: &PhotonDistribution, mut out: W) -> Result<()> {
    writeln!(out, "n,p")?;
    for (n, p) in dist.p.iter().enumerate() {
        writeln!(out, "{n},{}", format_f64(*p))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_phase_csv<W: Write>(dist: &PhaseDistribution, mut out: W) -> Result<()> {
    writeln!(out, "phi,p")?;
    for (phi, p) in dist.phis.iter().zip(&dist.values) {
        writeln!(out, "{},{}", format_f64(*phi), format_f64(*p))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    /// Echo of the input state description.
    pub state: Value,
    pub cutoff: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_tol: Option<f64>,
}

impl Metadata {
    pub fn new(state: Value, cutoff: usize, tail_tol: Option<f64>, timestamp: bool) -> Self {
        let generated_unix = timestamp
            .then(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .ok()
            })
            .flatten()
            .map(|d| d.as_secs());
        Self {
            tool: "npwigner".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            generated_unix,
            state,
            cutoff,
            tail_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridAxes {
    pub n: Vec<usize>,
    pub phi: Vec<f64>,
}

/// JSON form of a [`WignerGrid`]; `values` is row-major (`n` outer).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDocument {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub axes: GridAxes,
    pub values: Vec<f64>,
}

impl GridDocument {
    pub fn new(grid: &WignerGrid, metadata: Metadata) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            metadata,
            axes: GridAxes {
                n: (0..=grid.n_max()).collect(),
                phi: grid.phis().to_vec(),
            },
            values: grid.values().to_vec(),
        }
    }
}

pub fn write_json<W: Write, T: Serialize>(doc: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, doc)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    name: &'a str,
    deviation: String,
    threshold: String,
    passed: bool,
    required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<&'a Metadata>,
    passed: bool,
    checks: Vec<CheckRecord<'a>>,
}

/// Writes a report; deviations and thresholds are decimal strings.
pub fn write_report_json<W: Write>(
    report: &ValidationReport,
    metadata: Option<&Metadata>,
    out: W,
) -> Result<()> {
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        metadata,
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckRecord {
                name: &c.name,
                deviation: format_f64(c.deviation),
                threshold: format_f64(c.threshold),
                passed: c.passed,
                required: c.required,
                note: c.note.as_deref(),
            })
            .collect(),
    };
    write_json(&doc, out)
}
