use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::scan::scan_cylinder_ranges;
use crate::sequence::{almost_additivity_constant, scale_and_add, CylinderMeasure, PotentialSequence};
use crate::shift::Word;
use crate::thermo::pressure::FINITE_HORIZON_WARNING;

/// Finite-horizon reading of asymptotic constants.
///
/// With `N` the horizon and `H = N / 2`: the constants count as bounded when
/// their running maximum at `N` exceeds the one at `H` by at most the factor
/// `1 + bounded_growth`; they count as sub-exponential when
/// `(1/N) log K_N < decay_ratio · (1/H) log K_H`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub bounded_growth: f64,
    pub decay_ratio: f64,
}

impl Thresholds {
    pub const GIBBS: Thresholds = Thresholds {
        bounded_growth: 0.01,
        decay_ratio: 0.5,
    };
    pub const QUASI_BERNOULLI: Thresholds = Thresholds {
        bounded_growth: 0.01,
        decay_ratio: 1.0,
    };
}

impl Default for Thresholds {
    fn default() -> Self {
        Self::GIBBS
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GibbsVerdict {
    GibbsEvidence,
    WeakGibbsEvidence,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsRow {
    pub n: usize,
    pub k_n: f64,
    pub log_k_n: f64,
    /// `(1/n) log K_n`.
    pub trend: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsReport {
    pub p_target: f64,
    pub rows: Vec<GibbsRow>,
    pub sup_k: f64,
    pub verdict: GibbsVerdict,
    /// A shortest null cylinder, which rules out any Gibbs bound.
    pub witness: Option<String>,
    pub thresholds: Thresholds,
    pub warnings: Vec<String>,
}

/// `K_n = max over rank-n cylinders of sup |log μ_n(w) - f_n(x) + n p|`,
/// exponentiated, for `n = 1..=n_max`.
pub fn gibbs_constants(
    mu: &CylinderMeasure,
    seq: &PotentialSequence,
    p_target: f64,
    n_max: usize,
    thresholds: Thresholds,
) -> Result<GibbsReport> {
    if mu.sft() != seq.sft() {
        return Err(Error::MixedShift);
    }
    if n_max < 2 {
        return Err(Error::Domain("Gibbs horizon must be at least 2".into()));
    }
    let gap = scale_and_add(vec![
        (1.0, seq.clone()),
        (-1.0, PotentialSequence::measure_log(mu.clone())),
    ])?;
    let mut log_k = vec![0.0f64; n_max + 1];
    let mut witness: Option<String> = None;
    scan_cylinder_ranges(&gap, n_max, |n, w, lo, hi| {
        if !(lo.is_finite() && hi.is_finite()) {
            // Cylinders are reported deepest first; keep the shortest.
            if mu.prob(w) == 0.0 && witness.as_ref().is_none_or(|x| x.len() > w.len()) {
                witness = Some(Word::from(w).to_string());
            }
            log_k[n] = f64::INFINITY;
            return;
        }
        let shift = n as f64 * p_target;
        let v = (hi - shift).abs().max((lo - shift).abs());
        if v > log_k[n] {
            log_k[n] = v;
        }
    })?;
    let rows: Vec<GibbsRow> = (1..=n_max)
        .map(|n| GibbsRow {
            n,
            k_n: log_k[n].exp(),
            log_k_n: log_k[n],
            trend: log_k[n] / n as f64,
        })
        .collect();
    let verdict = if witness.is_some() {
        GibbsVerdict::Fails
    } else {
        match classify(&log_k, thresholds) {
            Growth::Bounded => GibbsVerdict::GibbsEvidence,
            Growth::Subexponential => GibbsVerdict::WeakGibbsEvidence,
            Growth::Neither => GibbsVerdict::Fails,
        }
    };
    Ok(GibbsReport {
        p_target,
        sup_k: rows.iter().fold(1.0f64, |m, r| m.max(r.k_n)),
        rows,
        verdict,
        witness,
        thresholds,
        warnings: vec![FINITE_HORIZON_WARNING.to_string()],
    })
}

enum Growth {
    Bounded,
    Subexponential,
    Neither,
}

/// `log_k[1..=N]` read through the thresholds.
fn classify(log_k: &[f64], t: Thresholds) -> Growth {
    let n = log_k.len() - 1;
    let h = (n / 2).max(1);
    if log_k[1..].iter().any(|v| !v.is_finite()) {
        return Growth::Neither;
    }
    let max_all = log_k[1..].iter().copied().fold(0.0f64, f64::max);
    let max_half = log_k[1..=h].iter().copied().fold(0.0f64, f64::max);
    if max_all <= max_half + t.bounded_growth.ln_1p() {
        return Growth::Bounded;
    }
    if log_k[n] / (n as f64) < t.decay_ratio * log_k[h] / (h as f64) {
        return Growth::Subexponential;
    }
    Growth::Neither
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuasiBernoulliVerdict {
    QuasiBernoulliEvidence,
    WeaklyCoupledEvidence,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiBernoulliRow {
    /// Split position.
    pub n: usize,
    /// `max_{m ≤ N - n} max over uv of max(r, 1/r)`, `r = μ(uv)/(μ(u)μ(v))`.
    pub d_n: f64,
    pub log_d_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiBernoulliReport {
    pub horizon: usize,
    pub rows: Vec<QuasiBernoulliRow>,
    /// `(N', log D)` with `D` the constant over all splits with `n + m ≤ N'`.
    pub log_d_by_horizon: Vec<(usize, f64)>,
    pub verdict: QuasiBernoulliVerdict,
    pub witness: Option<String>,
    pub thresholds: Thresholds,
}

/// Coupling constants of `μ` over splits `uv` with `|uv| ≤ horizon`.
pub fn quasi_bernoulli_constants(
    mu: &CylinderMeasure,
    horizon: usize,
    thresholds: Thresholds,
) -> Result<QuasiBernoulliReport> {
    if horizon < 2 {
        return Err(Error::Domain("coupling horizon must be at least 2".into()));
    }
    if let Some(&a) = mu.null_symbols().first() {
        return Ok(QuasiBernoulliReport {
            horizon,
            rows: Vec::new(),
            log_d_by_horizon: Vec::new(),
            verdict: QuasiBernoulliVerdict::Fails,
            witness: Some(Word::from(vec![a]).to_string()),
            thresholds,
        });
    }
    let report = almost_additivity_constant(&PotentialSequence::measure_log(mu.clone()), horizon, 0.0)?;
    let mut log_d = vec![0.0f64; horizon];
    for e in &report.table {
        log_d[e.n] = log_d[e.n].max(e.defect);
    }
    let rows = (1..horizon)
        .map(|n| QuasiBernoulliRow {
            n,
            d_n: log_d[n].exp(),
            log_d_n: log_d[n],
        })
        .collect();
    // trace[N'] is the constant over splits with n + m ≤ N'; no split fits N' = 1.
    let mut trace = vec![0.0f64; horizon + 1];
    for &(total, c) in &report.c_by_horizon {
        trace[total] = c;
    }
    let verdict = match classify(&trace, thresholds) {
        Growth::Bounded => QuasiBernoulliVerdict::QuasiBernoulliEvidence,
        Growth::Subexponential => QuasiBernoulliVerdict::WeaklyCoupledEvidence,
        Growth::Neither => QuasiBernoulliVerdict::Fails,
    };
    Ok(QuasiBernoulliReport {
        horizon,
        rows,
        log_d_by_horizon: report.c_by_horizon.clone(),
        verdict,
        witness: None,
        thresholds,
    })
}
