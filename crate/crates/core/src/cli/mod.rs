//! Batch front end: `nadd <command> --config <path> [--out <dir>] [--tol <float>] [--cap <int>]`.
//!
//! Exit status is 0 on success, 2 when the command's verdict is "fails" and 1
//! on any error.

pub mod commands;
pub mod config;
pub mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;

pub use commands::{execute, Outcome, VARIATIONAL_CONTRACT};
pub use config::{validate, validate_str, AnalysisConfig, Diagnostic, GridSpec, Params};
pub use report::{write_report, Provenance, ReportDocument, Table};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Seminorm,
    EquivalentPotential,
    Pressure,
    VariationalCheck,
    GibbsCheck,
    QuasiBernoulli,
    Spectrum,
    Ldp,
    Additivity,
    Variation,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Seminorm => "seminorm",
            Command::EquivalentPotential => "equivalent-potential",
            Command::Pressure => "pressure",
            Command::VariationalCheck => "variational-check",
            Command::GibbsCheck => "gibbs-check",
            Command::QuasiBernoulli => "quasi-bernoulli",
            Command::Spectrum => "spectrum",
            Command::Ldp => "ldp",
            Command::Additivity => "additivity",
            Command::Variation => "variation",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nadd", version, about = "Additive representatives, pressure, Gibbs constants and spectra of potential sequences")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Analysis config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Absolute tolerance; overrides `params.tol`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Enumeration cap in words; overrides `params.cap`.
    #[arg(long)]
    pub cap: Option<usize>,
}

/// Files written by one invocation and its exit status.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub report: ReportDocument,
    pub files: Vec<PathBuf>,
    pub exit: u8,
}

/// Loads the config, applies overrides, runs the command and writes its files.
pub fn run(cli: &Cli) -> Result<Invocation> {
    if cli.command == Command::Validate {
        return run_validate(cli);
    }
    let mut cfg = AnalysisConfig::load(&cli.config)?;
    if let Some(t) = cli.tol {
        cfg.params.tol = t;
    }
    if let Some(c) = cli.cap {
        cfg.params.cap = c;
    }
    let outcome = execute(cli.command, &cfg)?;
    let dir = output_dir(cli, cfg.output_dir.as_deref());
    let mut files = vec![write_report(&outcome.report, &dir)?];
    for t in &outcome.tables {
        files.push(t.write(&dir)?);
    }
    for (name, doc) in &outcome.documents {
        let path = dir.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(doc)? + "\n")?;
        files.push(path);
    }
    Ok(Invocation {
        report: outcome.report,
        files,
        exit: if outcome.failed { 2 } else { 0 },
    })
}

fn output_dir(cli: &Cli, configured: Option<&Path>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| configured.map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn run_validate(cli: &Cli) -> Result<Invocation> {
    let start = std::time::Instant::now();
    let text = std::fs::read_to_string(&cli.config)?;
    let diagnostics = validate_str(&text);
    let parsed = AnalysisConfig::from_json(&text).ok();
    let config = match &parsed {
        Some(c) => serde_json::to_value(c)?,
        None => serde_json::Value::Null,
    };
    let params = parsed.as_ref().map(|c| c.params.clone()).unwrap_or_default();
    let report = ReportDocument {
        command: Command::Validate.name().into(),
        config,
        results: json!({ "diagnostics": diagnostics }),
        provenance: Provenance::new(params.tol, params.cap, start.elapsed().as_secs_f64()),
        warnings: Vec::new(),
    };
    let dir = output_dir(cli, parsed.as_ref().and_then(|c| c.output_dir.as_deref()));
    let files = vec![write_report(&report, &dir)?];
    Ok(Invocation {
        report,
        files,
        exit: if diagnostics.is_empty() { 0 } else { 1 },
    })
}

/// Entry point of the `nadd` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(inv) => {
            if let Some(d) = inv.report.results.get("diagnostics").and_then(|d| d.as_array()) {
                for x in d {
                    eprintln!(
                        "{}: {}",
                        x["path"].as_str().unwrap_or("."),
                        x["message"].as_str().unwrap_or("")
                    );
                }
            }
            for f in &inv.files {
                println!("{}", f.display());
            }
            ExitCode::from(inv.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
