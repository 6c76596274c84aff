use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Everything one command writes. `results` and `config` are deterministic
/// given the config and the crate version; only `provenance.wall_time_seconds`
/// varies between runs. Non-finite numbers appear as `null` in JSON and as
/// `inf`, `-inf` or `NaN` in CSV.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub command: String,
    /// Effective config after defaulting and command-line overrides.
    pub config: Value,
    pub results: Value,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub artifact: &'static str,
    pub version: &'static str,
    pub tol: f64,
    pub cap: usize,
    pub wall_time_seconds: f64,
}

impl Provenance {
    pub fn new(tol: f64, cap: usize, wall_time_seconds: f64) -> Self {
        Self {
            artifact: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            tol,
            cap,
            wall_time_seconds,
        }
    }
}

/// A plot-ready table written as `<name>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(name: &str, header: &[S]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row of numbers, formatted with the shortest round-trip form.
    pub fn push<I: IntoIterator<Item = f64>>(&mut self, row: I) {
        self.rows.push(row.into_iter().map(|v| v.to_string()).collect());
    }

    pub fn push_text(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        let mut w = csv::Writer::from_path(&path).map_err(csv_error)?;
        w.write_record(&self.header).map_err(csv_error)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(path)
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes `<command>.report.json` into `dir`, creating it if needed.
pub fn write_report(report: &ReportDocument, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.report.json", report.command));
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}
