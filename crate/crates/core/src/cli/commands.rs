use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{AnalysisConfig, Diagnostic, GridSpec, Inputs};
use super::report::{Provenance, ReportDocument, Table};
use super::Command;
use crate::equivalence::{construct_equivalent, EquivalenceCertificate};
use crate::error::{Error, Result};
use crate::potential::{invariant_average_range, seminorm_convergence_trace, LocallyConstantPotential};
use crate::sequence::{almost_additivity_constant, variation_profile, PotentialSequence, SequenceKind};
use crate::spectrum::{derivative_check, entropy_spectrum, pressure_curve, rate_function};
use crate::thermo::{
    gibbs_constants, pressure_additive, pressure_sequence, quasi_bernoulli_constants,
    variational_check, GibbsVerdict, QuasiBernoulliVerdict, TransferMatrix,
};

/// Certificate tolerance for non-additive inputs when none is configured.
pub const DEFAULT_CERTIFICATE_TOL: f64 = 1e-2;

/// Contract on the variational residual.
pub const VARIATIONAL_CONTRACT: f64 = 1e-8;

const GIBBS_SCOPE_NOTE: &str =
    "constants are reported for the supplied potential only; whether the measure admits some Gibbs potential is not decided";
const COUPLING_NOTE: &str =
    "coupling constants cover splits up to the horizon; boundedness is read from their growth over that range";
const LEGENDRE_NOTE: &str =
    "E is the Legendre transform of the pressure curve; agreement with level-set entropies is not asserted at range endpoints or phase transitions";

/// Result of one command before anything is written.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: ReportDocument,
    pub tables: Vec<Table>,
    /// Additional JSON documents as `(file name, content)`.
    pub documents: Vec<(String, Value)>,
    /// The command's verdict is "fails".
    pub failed: bool,
}

struct Run {
    cfg: AnalysisConfig,
    inputs: Inputs,
    warnings: Vec<String>,
    tables: Vec<Table>,
    documents: Vec<(String, Value)>,
}

/// Additive potential standing in for the configured input.
struct Resolved {
    f: LocallyConstantPotential,
    /// Certificate tail bound; zero for additive inputs.
    band: f64,
    source: &'static str,
}

#[derive(Serialize)]
struct ResolvedSummary<'a> {
    source: &'a str,
    depth: usize,
    band: f64,
    representative: &'a LocallyConstantPotential,
}

impl Resolved {
    fn summary(&self) -> ResolvedSummary<'_> {
        ResolvedSummary {
            source: self.source,
            depth: self.f.depth(),
            band: self.band,
            representative: &self.f,
        }
    }
}

/// Runs `command` on a parsed config without touching the filesystem.
pub fn execute(command: Command, config: &AnalysisConfig) -> Result<Outcome> {
    let start = Instant::now();
    let inputs = config.build().map_err(diagnostics_error)?;
    let mut run = Run {
        cfg: config.clone(),
        inputs,
        warnings: Vec::new(),
        tables: Vec::new(),
        documents: Vec::new(),
    };
    let (results, failed) = match command {
        Command::Seminorm => run.seminorm()?,
        Command::EquivalentPotential => run.equivalent_potential()?,
        Command::Pressure => run.pressure()?,
        Command::VariationalCheck => run.variational()?,
        Command::GibbsCheck => run.gibbs()?,
        Command::QuasiBernoulli => run.quasi_bernoulli()?,
        Command::Spectrum => run.spectrum()?,
        Command::Ldp => run.ldp()?,
        Command::Additivity => run.additivity()?,
        Command::Variation => run.variation()?,
        Command::Validate => (json!({ "diagnostics": Vec::<Diagnostic>::new() }), false),
    };
    let mut warnings = Vec::new();
    for w in run.warnings {
        if !warnings.contains(&w) {
            warnings.push(w);
        }
    }
    let p = &run.cfg.params;
    let report = ReportDocument {
        command: command.name().into(),
        config: serde_json::to_value(&run.cfg)?,
        results,
        provenance: Provenance::new(p.tol, p.cap, start.elapsed().as_secs_f64()),
        warnings,
    };
    Ok(Outcome {
        report,
        tables: run.tables,
        documents: run.documents,
        failed,
    })
}

fn diagnostics_error(d: Vec<Diagnostic>) -> Error {
    let path = d.first().map_or_else(|| ".".to_string(), |x| x.path.clone());
    let message = d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
    Error::Config { path, message }
}

fn missing(command: Command, what: &str) -> Error {
    Error::Config {
        path: what.split(" or ").next().unwrap_or(what).into(),
        message: format!("command `{}` needs `{what}`", command.name()),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

impl Run {
    fn certify(&mut self, seq: &PotentialSequence) -> Result<EquivalenceCertificate> {
        let p = &mut self.cfg.params;
        let tol = *p.certificate_tol.get_or_insert(match seq.kind() {
            SequenceKind::Additive(_) => p.tol,
            _ => DEFAULT_CERTIFICATE_TOL,
        });
        let cert = construct_equivalent(seq, &p.k_grid, p.certificate_n_max, tol)?;
        self.warnings.extend(cert.notes.iter().cloned());
        Ok(cert)
    }

    fn representative_of(&mut self, seq: &PotentialSequence, source: &'static str) -> Result<Resolved> {
        if let SequenceKind::Additive(f) = seq.kind() {
            return Ok(Resolved {
                f: f.clone(),
                band: 0.0,
                source,
            });
        }
        let cert = self.certify(seq)?;
        Ok(Resolved {
            f: cert.representative.clone(),
            band: cert.tail_bound,
            source,
        })
    }

    /// The configured potential, or the representative of the configured sequence.
    fn resolve(&mut self, command: Command) -> Result<Resolved> {
        if let Some(f) = &self.inputs.potential {
            return Ok(Resolved {
                f: f.clone(),
                band: 0.0,
                source: "potential",
            });
        }
        let seq = self
            .inputs
            .sequence
            .clone()
            .ok_or_else(|| missing(command, "potential or sequence"))?;
        self.representative_of(&seq, "sequence")
    }

    fn sequence(&self, command: Command) -> Result<PotentialSequence> {
        self.inputs
            .sequence
            .clone()
            .ok_or_else(|| missing(command, "sequence"))
    }

    fn seminorm(&mut self) -> Result<(Value, bool)> {
        let r = self.resolve(Command::Seminorm)?;
        let tol = self.cfg.params.tol;
        let report = seminorm_convergence_trace(&r.f, self.cfg.params.trace_n_max)?;
        let bound_holds = report.trace.iter().all(|&(_, t)| t >= report.value - tol);
        let mut t = Table::new("seminorm_trace", &["n", "normalized_sup_norm", "seminorm"]);
        for &(n, v) in &report.trace {
            t.push([n as f64, v, report.value]);
        }
        self.tables.push(t);
        Ok((
            json!({
                "input": r.summary(),
                "seminorm": report,
                "trace_bound_holds": bound_holds,
            }),
            false,
        ))
    }

    fn equivalent_potential(&mut self) -> Result<(Value, bool)> {
        let seq = self.sequence(Command::EquivalentPotential)?;
        let cert = self.certify(&seq)?;
        let header: Vec<String> = std::iter::once("k".to_string())
            .chain(cert.k_grid.iter().map(|k| format!("k{k}")))
            .collect();
        let mut cauchy = Table::new("cauchy_table", &header);
        for (k, row) in cert.k_grid.iter().zip(&cert.cauchy_table) {
            cauchy.push(std::iter::once(*k as f64).chain(row.iter().copied()));
        }
        let mut defects = Table::new("defect_trace", &["n", "delta", "tail_max"]);
        for d in &cert.defect_trace {
            defects.push([d.n as f64, d.delta, d.tail_max]);
        }
        let mut grid = Table::new("grid_defects", &["k", "max_defect"]);
        for g in &cert.grid_defects {
            grid.push_text(vec![g.k.to_string(), opt(g.max_defect)]);
        }
        self.tables.extend([cauchy, defects, grid]);
        let value = serde_json::to_value(&cert)?;
        self.documents.push(("certificate.json".into(), value.clone()));
        Ok((value, false))
    }

    fn pressure(&mut self) -> Result<(Value, bool)> {
        if self.inputs.potential.is_some() || self.inputs.sequence.is_none() {
            let r = self.resolve(Command::Pressure)?;
            let tm = TransferMatrix::new(&r.f);
            let value = tm.log_root();
            return Ok((
                json!({
                    "pressure": value,
                    "input": r.summary(),
                    "perron_residual": tm.residual(),
                    "perron_iterations": tm.perron().iterations,
                }),
                false,
            ));
        }
        let seq = self.sequence(Command::Pressure)?;
        let p = self.cfg.params.clone();
        let eligible = seq.lag() == 0 && seq.is_cylinder_constant() && seq.sft().is_full();
        let (c, c_source) = match p.additivity_constant {
            Some(c) => (Some(c), "config"),
            None if eligible => (
                Some(almost_additivity_constant(&seq, p.n_max, p.tol)?.c_estimate),
                "measured",
            ),
            None => (None, "none"),
        };
        let estimate = pressure_sequence(&seq, p.n_max, c)?;
        self.warnings.extend(estimate.warnings.iter().cloned());
        let r = self.representative_of(&seq, "sequence")?;
        let rep_pressure = pressure_additive(&r.f);
        let mut t = Table::new("pressure_trace", &["n", "log_z", "value", "lower", "upper"]);
        for row in &estimate.rows {
            t.push_text(vec![
                row.n.to_string(),
                row.log_z.to_string(),
                row.value.to_string(),
                opt(row.lower),
                opt(row.upper),
            ]);
        }
        self.tables.push(t);
        Ok((
            json!({
                "pressure": estimate.point,
                "additivity_constant_source": c_source,
                "sequence_estimate": estimate,
                "representative": {
                    "input": r.summary(),
                    "pressure": rep_pressure,
                    "gap_to_estimate": (rep_pressure - estimate.point).abs(),
                },
            }),
            false,
        ))
    }

    fn variational(&mut self) -> Result<(Value, bool)> {
        let r = self.resolve(Command::VariationalCheck)?;
        let report = variational_check(&r.f)?;
        let failed = !(report.residual <= VARIATIONAL_CONTRACT);
        Ok((
            json!({
                "input": r.summary(),
                "variational": report,
                "contract": VARIATIONAL_CONTRACT,
                "verdict": if failed { "fails" } else { "holds" },
            }),
            failed,
        ))
    }

    fn gibbs(&mut self) -> Result<(Value, bool)> {
        let mu = self
            .inputs
            .measure
            .clone()
            .ok_or_else(|| missing(Command::GibbsCheck, "measure"))?;
        let p = self.cfg.params.clone();
        let (seq, input): (PotentialSequence, Value) = match (&self.inputs.potential, &self.inputs.sequence) {
            (Some(f), _) => (PotentialSequence::additive(f.clone()), json!({ "source": "potential" })),
            (None, Some(s)) if p.use_representative => {
                let s = s.clone();
                let r = self.representative_of(&s, "sequence")?;
                let v = serde_json::to_value(r.summary())?;
                (PotentialSequence::additive(r.f), v)
            }
            (None, Some(s)) => (s.clone(), json!({ "source": "sequence", "kind": s.kind_name() })),
            (None, None) => return Err(missing(Command::GibbsCheck, "potential or sequence")),
        };
        let p_target = match p.p_target {
            Some(t) => t,
            None => match (&self.inputs.potential, &self.inputs.sequence, seq.kind()) {
                (None, Some(s), _) if matches!(s.kind(), SequenceKind::MeasureLog(_)) => 0.0,
                (_, _, SequenceKind::Additive(f)) => pressure_additive(f),
                _ => {
                    let est = pressure_sequence(&seq, p.n_max, None)?;
                    self.warnings.extend(est.warnings);
                    est.point
                }
            },
        };
        self.cfg.params.p_target = Some(p_target);
        let report = gibbs_constants(&mu, &seq, p_target, p.n_max, p.gibbs_thresholds)?;
        self.warnings.extend(report.warnings.iter().cloned());
        self.warnings.push(GIBBS_SCOPE_NOTE.into());
        let mut t = Table::new("gibbs_constants", &["n", "k_n", "log_k_n", "trend"]);
        for r in &report.rows {
            t.push([r.n as f64, r.k_n, r.log_k_n, r.trend]);
        }
        self.tables.push(t);
        let failed = report.verdict == GibbsVerdict::Fails;
        Ok((json!({ "input": input, "gibbs": report }), failed))
    }

    fn quasi_bernoulli(&mut self) -> Result<(Value, bool)> {
        let mu = self
            .inputs
            .measure
            .clone()
            .ok_or_else(|| missing(Command::QuasiBernoulli, "measure"))?;
        let p = &self.cfg.params;
        let report = quasi_bernoulli_constants(&mu, p.horizon, p.quasi_bernoulli_thresholds)?;
        self.warnings.push(COUPLING_NOTE.into());
        let mut t = Table::new("coupling_constants", &["n", "d_n", "log_d_n"]);
        for r in &report.rows {
            t.push([r.n as f64, r.d_n, r.log_d_n]);
        }
        let mut h = Table::new("coupling_by_horizon", &["horizon", "log_d"]);
        for &(n, v) in &report.log_d_by_horizon {
            h.push([n as f64, v]);
        }
        self.tables.extend([t, h]);
        let failed = report.verdict == QuasiBernoulliVerdict::Fails;
        Ok((json!({ "quasi_bernoulli": report }), failed))
    }

    /// The configured grid, or `grid_points` points across `[lo, hi]`.
    fn grid_or_range(&self, grid: &Option<GridSpec>, lo: f64, hi: f64) -> GridSpec {
        grid.clone()
            .unwrap_or_else(|| GridSpec::uniform(lo, hi, self.cfg.params.grid_points))
    }

    fn spectrum(&mut self) -> Result<(Value, bool)> {
        let r = self.resolve(Command::Spectrum)?;
        let q = self.cfg.params.q_grid.values()?;
        let curve = pressure_curve(&r.f, &q)?;
        let h = self.cfg.params.derivative_step;
        let derivative_gap = q
            .iter()
            .map(|&t| derivative_check(&r.f, t, h).map(|d| d.gap))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        let (lo, hi) = invariant_average_range(&r.f)?;
        let alpha = self.grid_or_range(&self.cfg.params.alpha_grid, lo, hi);
        let spectrum = entropy_spectrum(&r.f, &alpha.values()?)?.with_band(r.band);
        self.cfg.params.alpha_grid = Some(alpha);
        self.warnings.push(LEGENDRE_NOTE.into());
        let mut c = Table::new("pressure_curve", &["q", "P", "dP"]);
        for i in 0..curve.q.len() {
            c.push([curve.q[i], curve.values[i], curve.derivatives[i]]);
        }
        let mut s = Table::new("spectrum", &["alpha", "E", "band"]);
        for (a, e) in spectrum.alpha.iter().zip(&spectrum.values) {
            s.push([*a, *e, spectrum.band]);
        }
        self.tables.extend([c, s]);
        Ok((
            json!({
                "input": r.summary(),
                "pressure_curve": curve,
                "max_derivative_gap": derivative_gap,
                "spectrum": spectrum,
            }),
            false,
        ))
    }

    fn ldp(&mut self) -> Result<(Value, bool)> {
        let r = self.resolve(Command::Ldp)?;
        let g = match self.inputs.reference.clone() {
            Some(seq) => self.representative_of(&seq, "reference")?,
            None => Resolved {
                f: LocallyConstantPotential::constant(&self.inputs.sft, 0.0)?,
                band: 0.0,
                source: "zero",
            },
        };
        let (lo, hi) = invariant_average_range(&r.f)?;
        let x = self.grid_or_range(&self.cfg.params.x_grid, lo, hi);
        let rate = rate_function(&r.f, &g.f, &x.values()?)?;
        self.cfg.params.x_grid = Some(x);
        let mut t = Table::new("rate_function", &["x", "I"]);
        for (x, i) in rate.x.iter().zip(&rate.values) {
            t.push([*x, *i]);
        }
        self.tables.push(t);
        Ok((
            json!({
                "input": r.summary(),
                "reference": g.summary(),
                "band": r.band + g.band,
                "rate_function": rate,
            }),
            false,
        ))
    }

    fn additivity(&mut self) -> Result<(Value, bool)> {
        let seq = self.sequence(Command::Additivity)?;
        let p = &self.cfg.params;
        let report = almost_additivity_constant(&seq, p.horizon, p.tol)?;
        self.warnings.push(crate::thermo::FINITE_HORIZON_WARNING.into());
        let mut t = Table::new("additivity_defects", &["n", "m", "defect"]);
        for e in &report.table {
            t.push([e.n as f64, e.m as f64, e.defect]);
        }
        let mut h = Table::new("additivity_by_horizon", &["horizon", "c"]);
        for &(n, c) in &report.c_by_horizon {
            h.push([n as f64, c]);
        }
        self.tables.extend([t, h]);
        Ok((json!({ "sequence_kind": seq.kind_name(), "additivity": report }), false))
    }

    fn variation(&mut self) -> Result<(Value, bool)> {
        let seq = self.sequence(Command::Variation)?;
        let p = &self.cfg.params;
        let report = variation_profile(&seq, p.horizon, p.tol)?;
        let mut t = Table::new("variation", &["n", "var", "var_over_n"]);
        for (i, (v, m)) in report.var.iter().zip(&report.moderate_trend).enumerate() {
            t.push([(i + 1) as f64, *v, *m]);
        }
        self.tables.push(t);
        Ok((json!({ "sequence_kind": seq.kind_name(), "variation": report }), false))
    }
}
