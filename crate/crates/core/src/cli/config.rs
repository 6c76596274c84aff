use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::equivalence::check_grid;
use crate::error::{Error, Result};
use crate::potential::{LocallyConstantPotential, PotentialSpec, DEFAULT_TOL};
use crate::sequence::{CylinderMeasure, MeasureSpec, PotentialSequence, SequenceSpec};
use crate::shift::{Sft, SftSpec, DEFAULT_WORD_CAP};
use crate::thermo::Thresholds;

/// Declarative input of one batch run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub sft: SftSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    /// Reference sequence `G` of the large-deviation command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

/// Command parameters; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub tol: f64,
    pub cap: usize,
    /// Approximant orders of the equivalence certificate.
    pub k_grid: Vec<usize>,
    /// Horizon of pressure traces, Gibbs constants and Lyapunov traces.
    pub n_max: usize,
    /// Horizon of the defects measured by the equivalence certificate.
    pub certificate_n_max: usize,
    /// Tolerance of the certificate; defaults to `tol` for additive inputs
    /// and to 1e-2 otherwise.
    pub certificate_tol: Option<f64>,
    /// Horizon of additivity, variation and coupling tables.
    pub horizon: usize,
    /// Horizon of the seminorm convergence trace.
    pub trace_n_max: usize,
    pub q_grid: GridSpec,
    /// Defaults to `grid_points` points across the invariant range.
    pub alpha_grid: Option<GridSpec>,
    /// Defaults to `grid_points` points across the invariant range.
    pub x_grid: Option<GridSpec>,
    pub grid_points: usize,
    /// Pressure subtracted in the Gibbs bound; defaults to 0 for
    /// log-probability sequences and to the additive pressure otherwise.
    pub p_target: Option<f64>,
    /// Constant `C` of the pressure enclosure; measured over `n_max` when absent.
    pub additivity_constant: Option<f64>,
    /// Test non-additive sequences through their certified representative.
    pub use_representative: bool,
    pub derivative_step: f64,
    pub gibbs_thresholds: Thresholds,
    pub quasi_bernoulli_thresholds: Thresholds,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            cap: DEFAULT_WORD_CAP,
            k_grid: vec![2, 4, 8],
            n_max: 12,
            certificate_n_max: 16,
            certificate_tol: None,
            horizon: 12,
            trace_n_max: 32,
            q_grid: GridSpec::Uniform {
                min: -8.0,
                max: 8.0,
                points: 33,
            },
            alpha_grid: None,
            x_grid: None,
            grid_points: 41,
            p_target: None,
            additivity_constant: None,
            use_representative: true,
            derivative_step: 1e-4,
            gibbs_thresholds: Thresholds::GIBBS,
            quasi_bernoulli_thresholds: Thresholds::QUASI_BERNOULLI,
        }
    }
}

/// A grid given point by point or as `points` equispaced values on `[min, max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GridSpec {
    Points(Vec<f64>),
    Uniform { min: f64, max: f64, points: usize },
}

impl GridSpec {
    pub fn uniform(min: f64, max: f64, points: usize) -> Self {
        GridSpec::Uniform { min, max, points }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            GridSpec::Points(v) => v.clone(),
            GridSpec::Uniform { min, max, points } => {
                if !(min.is_finite() && max.is_finite() && min <= max) || *points == 0 {
                    return Err(Error::InvalidGrid(format!(
                        "uniform grid needs finite min <= max and points >= 1, got [{min}, {max}] with {points}"
                    )));
                }
                if *points == 1 {
                    vec![*min]
                } else {
                    let step = (max - min) / (*points - 1) as f64;
                    (0..*points)
                        .map(|i| if i + 1 == *points { *max } else { min + step * i as f64 })
                        .collect()
                }
            }
        };
        if v.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("grid has a non-finite entry".into()));
        }
        if v.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidGrid("grid is not sorted".into()));
        }
        Ok(v)
    }
}

/// A schema or invariant violation located by a path into the config.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Objects built from a validated config.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub sft: Sft,
    pub sequence: Option<PotentialSequence>,
    pub potential: Option<LocallyConstantPotential>,
    pub reference: Option<PotentialSequence>,
    pub measure: Option<CylinderMeasure>,
}

impl AnalysisConfig {
    /// Parses JSON, naming the offending path on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config {
                path: if path.is_empty() { ".".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Builds every object the config declares; one diagnostic per failure.
    pub fn build(&self) -> std::result::Result<Inputs, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut note = |path: &str, e: Error| {
            diags.push(Diagnostic {
                path: path.into(),
                message: e.to_string(),
            })
        };
        self.check_params(&mut note);
        let sft = match self.sft.build() {
            Ok(s) => s.with_word_cap(self.params.cap),
            Err(e) => {
                note("sft", e);
                return Err(diags);
            }
        };
        let mut build = |path: &str, r: Result<PotentialSequence>| match r {
            Ok(s) => Some(s),
            Err(e) => {
                note(path, e);
                None
            }
        };
        let sequence = self
            .sequence
            .as_ref()
            .and_then(|s| build("sequence", s.build(&sft)));
        let reference = self
            .reference
            .as_ref()
            .and_then(|s| build("reference", s.build(&sft)));
        let potential = self.potential.as_ref().and_then(|p| match p.build(&sft) {
            Ok(f) => Some(f),
            Err(e) => {
                note("potential", e);
                None
            }
        });
        let measure = self.measure.as_ref().and_then(|m| match m.build(&sft) {
            Ok(m) => Some(m),
            Err(e) => {
                note("measure", e);
                None
            }
        });
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Inputs {
            sft,
            sequence,
            potential,
            reference,
            measure,
        })
    }

    fn check_params(&self, note: &mut impl FnMut(&str, Error)) {
        let p = &self.params;
        let domain = |m: String| Error::Domain(m);
        if !(p.tol > 0.0 && p.tol.is_finite()) {
            note("params.tol", domain(format!("tolerance must be positive, got {}", p.tol)));
        }
        if p.cap == 0 {
            note("params.cap", domain("word cap must be positive".into()));
        }
        if let Err(e) = check_grid(&p.k_grid) {
            note("params.k_grid", e);
        }
        for (name, v, min) in [
            ("params.n_max", p.n_max, 2),
            ("params.certificate_n_max", p.certificate_n_max, 1),
            ("params.horizon", p.horizon, 2),
            ("params.trace_n_max", p.trace_n_max, 1),
            ("params.grid_points", p.grid_points, 1),
        ] {
            if v < min {
                note(name, domain(format!("must be at least {min}, got {v}")));
            }
        }
        if let Err(e) = p.q_grid.values() {
            note("params.q_grid", e);
        }
        for (name, g) in [("params.alpha_grid", &p.alpha_grid), ("params.x_grid", &p.x_grid)] {
            if let Some(Err(e)) = g.as_ref().map(GridSpec::values) {
                note(name, e);
            }
        }
        if let Some(c) = p.additivity_constant {
            if !(c >= 0.0 && c.is_finite()) {
                note(
                    "params.additivity_constant",
                    domain(format!("must be finite and nonnegative, got {c}")),
                );
            }
        }
        if let Some(t) = p.certificate_tol {
            if !(t > 0.0 && t.is_finite()) {
                note("params.certificate_tol", domain(format!("must be positive, got {t}")));
            }
        }
        if let Some(t) = p.p_target {
            if !t.is_finite() {
                note("params.p_target", domain(format!("must be finite, got {t}")));
            }
        }
        if !(p.derivative_step > 0.0 && p.derivative_step.is_finite()) {
            note(
                "params.derivative_step",
                domain(format!("must be positive, got {}", p.derivative_step)),
            );
        }
        for (name, t) in [
            ("params.gibbs_thresholds", p.gibbs_thresholds),
            ("params.quasi_bernoulli_thresholds", p.quasi_bernoulli_thresholds),
        ] {
            if !(t.bounded_growth >= 0.0 && t.decay_ratio > 0.0) {
                note(
                    name,
                    domain("bounded_growth must be >= 0 and decay_ratio > 0".into()),
                );
            }
        }
    }
}

/// Schema and invariant diagnostics of a config file without executing it.
/// An empty list means the config is runnable.
pub fn validate(path: &Path) -> Result<Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path)?;
    Ok(validate_str(&text))
}

pub fn validate_str(text: &str) -> Vec<Diagnostic> {
    match AnalysisConfig::from_json(text) {
        Ok(cfg) => cfg.build().err().unwrap_or_default(),
        Err(Error::Config { path, message }) => vec![Diagnostic { path, message }],
        Err(e) => vec![Diagnostic {
            path: ".".into(),
            message: e.to_string(),
        }],
    }
}
