//! Potential sequences `F = (f_n)` and their additivity defects.
//!
//! Every kind has a *lag* `ℓ`: `f_n` is constant on cylinders of rank
//! `n + ℓ` (or, for custom sequences, known through its exact range there).
//! An additive sequence built from a depth-`k` potential has lag `k - 1`, since
//! `S_n f` reads `n + k - 1` symbols; cocycles and measure logarithms have lag
//! zero. [`PotentialSequence::evaluate`] takes an `(n + ℓ)`-word and returns
//! `f_n` on it.

pub mod cocycle;
pub mod measure;
pub(crate) mod scan;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::potential::{LocallyConstantPotential, PotentialSpec};
use crate::shift::{for_each_word, Sft, Word};

pub use cocycle::{MatrixCocycle, NormKind};
pub use measure::CylinderMeasure;

use scan::{scan, scan_cylinder_ranges, Cursor, DenseRanges};

/// Exact `(inf, sup)` of `f_n` over the rank-`n` cylinder of the argument.
pub type CylinderBounds = dyn Fn(&[u8]) -> (f64, f64) + Send + Sync;

/// A sequence given by a callback returning exact cylinder bounds.
#[derive(Clone)]
pub struct CustomSequence {
    label: String,
    bounds: Arc<CylinderBounds>,
}

impl CustomSequence {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bounds(&self, word: &[u8]) -> (f64, f64) {
        (self.bounds)(word)
    }
}

impl fmt::Debug for CustomSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSequence").field("label", &self.label).finish()
    }
}

#[derive(Clone, Debug)]
pub enum SequenceKind {
    /// Birkhoff sums `S_n f`.
    Additive(LocallyConstantPotential),
    /// `log ‖M_{x_1} ⋯ M_{x_n}‖`.
    Cocycle(MatrixCocycle),
    /// `log μ([x_1 .. x_n])`.
    MeasureLog(CylinderMeasure),
    Custom(CustomSequence),
    /// `Σ c_i f_n^{(i)}`.
    Combination(Vec<(f64, PotentialSequence)>),
}

#[derive(Clone, Debug)]
pub struct PotentialSequence {
    sft: Sft,
    kind: SequenceKind,
    lag: usize,
}

impl PotentialSequence {
    pub fn additive(f: LocallyConstantPotential) -> Self {
        Self {
            sft: f.sft().clone(),
            lag: f.depth() - 1,
            kind: SequenceKind::Additive(f),
        }
    }

    pub fn cocycle(sft: &Sft, cocycle: MatrixCocycle) -> Result<Self> {
        if cocycle.symbol_count() != sft.alphabet_size() {
            return Err(Error::InvalidCocycle(format!(
                "{} matrices given for an alphabet of {} symbols",
                cocycle.symbol_count(),
                sft.alphabet_size()
            )));
        }
        Ok(Self {
            sft: sft.clone(),
            kind: SequenceKind::Cocycle(cocycle),
            lag: 0,
        })
    }

    pub fn measure_log(mu: CylinderMeasure) -> Self {
        Self {
            sft: mu.sft().clone(),
            kind: SequenceKind::MeasureLog(mu),
            lag: 0,
        }
    }

    /// `bounds(w)` must return the exact `(inf, sup)` of `f_{|w|}` on `[w]`.
    pub fn custom<F>(sft: &Sft, label: impl Into<String>, bounds: F) -> Self
    where
        F: Fn(&[u8]) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            sft: sft.clone(),
            kind: SequenceKind::Custom(CustomSequence {
                label: label.into(),
                bounds: Arc::new(bounds),
            }),
            lag: 0,
        }
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SequenceKind::Additive(_) => "additive",
            SequenceKind::Cocycle(_) => "cocycle",
            SequenceKind::MeasureLog(_) => "measure_log",
            SequenceKind::Custom(_) => "custom",
            SequenceKind::Combination(_) => "combination",
        }
    }

    /// Whether `f_n` is constant on `(n + lag)`-cylinders.
    pub fn is_cylinder_constant(&self) -> bool {
        match &self.kind {
            SequenceKind::Custom(_) => false,
            SequenceKind::Combination(t) => t.iter().all(|(_, s)| s.is_cylinder_constant()),
            _ => true,
        }
    }

    /// Exact `(inf, sup)` of `f_n` on the cylinder of an `(n + lag)`-word.
    pub fn range_on(&self, word: &[u8]) -> Result<(f64, f64)> {
        self.sft.check_word(word)?;
        if word.len() <= self.lag {
            return Err(Error::InvalidWord(format!(
                "{} is too short: this sequence reads {} extra symbols",
                Word::from(word),
                self.lag
            )));
        }
        let mut cur = Cursor::new(self, word.len());
        for l in 1..=word.len() {
            cur.push(&word[..l]);
        }
        Ok(cur.range_at(word, word.len()))
    }

    /// `f_n` on the cylinder of an `(n + lag)`-word; the midpoint of the
    /// range for custom sequences.
    pub fn evaluate(&self, word: &[u8]) -> Result<f64> {
        let (lo, hi) = self.range_on(word)?;
        if lo == f64::NEG_INFINITY {
            return Err(Error::ZeroProbability {
                word: Word::from(word).to_string(),
            });
        }
        Ok(if lo == hi { lo } else { 0.5 * (lo + hi) })
    }
}

/// `Σ c_i F^{(i)}` over a common shift.
pub fn scale_and_add(terms: Vec<(f64, PotentialSequence)>) -> Result<PotentialSequence> {
    let first = terms.first().ok_or_else(|| {
        Error::Domain("scale_and_add needs at least one sequence".into())
    })?;
    let sft = first.1.sft().clone();
    if terms.iter().any(|(_, s)| *s.sft() != sft) {
        return Err(Error::MixedShift);
    }
    if let Some((c, _)) = terms.iter().find(|(c, _)| !c.is_finite()) {
        return Err(Error::Domain(format!("coefficient {c} is not finite")));
    }
    let lag = terms.iter().map(|(_, s)| s.lag()).max().unwrap_or(0);
    Ok(PotentialSequence {
        sft,
        kind: SequenceKind::Combination(terms),
        lag,
    })
}

/// How a sequence looks through its measured additivity defects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdditivityClass {
    Additive,
    AlmostAdditiveEvidence,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivityEntry {
    pub n: usize,
    pub m: usize,
    /// `‖f_{n+m} - f_n - f_m∘T^n‖∞`.
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub horizon: usize,
    pub c_estimate: f64,
    /// `(N', c_estimate over n + m ≤ N')`, non-decreasing.
    pub c_by_horizon: Vec<(usize, f64)>,
    pub table: Vec<AdditivityEntry>,
    pub classification: AdditivityClass,
}

/// Relative growth of the running constant over the second half of the
/// horizon still read as "settled".
const SETTLED_GROWTH: f64 = 0.05;

/// Exhaustive almost-additivity constant over splits with `n + m ≤ horizon`.
///
/// Exact for cylinder-constant kinds; for custom sequences the entries are
/// the tightest bounds the cylinder ranges give.
pub fn almost_additivity_constant(
    seq: &PotentialSequence,
    horizon: usize,
    tol: f64,
) -> Result<AdditivityReport> {
    if horizon < 2 {
        return Err(Error::Domain("additivity horizon must be at least 2".into()));
    }
    let dense = DenseRanges::build(seq, horizon)?;
    let sft = seq.sft();
    let lag = dense.lag;
    let mut grid = vec![vec![0.0f64; horizon + 1]; horizon + 1];
    for total in 2..=horizon {
        for (code, &(a_lo, a_hi)) in dense.tables[total].iter().enumerate() {
            if a_lo.is_nan() {
                continue;
            }
            for n in 1..total {
                let m = total - n;
                let (b_lo, b_hi) = dense.tables[n][code / sft.code_space(m) as usize];
                let (c_lo, c_hi) = dense.tables[m][code % sft.code_space(m + lag) as usize];
                let d = (a_hi - b_lo - c_lo).abs().max((a_lo - b_hi - c_hi).abs());
                if !d.is_nan() && d > grid[n][m] {
                    grid[n][m] = d;
                }
            }
        }
    }
    let mut table = Vec::new();
    let mut c_by_horizon = Vec::new();
    let mut running = 0.0f64;
    for total in 2..=horizon {
        for n in 1..total {
            let m = total - n;
            running = running.max(grid[n][m]);
            table.push(AdditivityEntry {
                n,
                m,
                defect: grid[n][m],
            });
        }
        c_by_horizon.push((total, running));
    }
    let c_estimate = running;
    let classification = if c_estimate <= tol {
        AdditivityClass::Additive
    } else {
        let half = c_by_horizon[horizon.div_ceil(2) - 1].1;
        if horizon >= 4 && c_estimate.is_finite() && c_estimate <= (1.0 + SETTLED_GROWTH) * half + tol {
            AdditivityClass::AlmostAdditiveEvidence
        } else {
            AdditivityClass::Inconclusive
        }
    };
    Ok(AdditivityReport {
        horizon,
        c_estimate,
        c_by_horizon,
        table,
        classification,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariationReport {
    pub horizon: usize,
    /// `var_n` for `n = 1..=horizon`.
    pub var: Vec<f64>,
    pub bounded: bool,
    /// `var_n / n`.
    pub moderate_trend: Vec<f64>,
}

/// `var_n = sup { |f_n(x) - f_n(y)| : x_i = y_i, i ≤ n }`.
pub fn variation_profile(seq: &PotentialSequence, horizon: usize, tol: f64) -> Result<VariationReport> {
    if horizon == 0 {
        return Err(Error::Domain("variation horizon must be at least 1".into()));
    }
    let mut var = vec![0.0f64; horizon];
    if !(seq.lag() == 0 && seq.is_cylinder_constant()) {
        scan_cylinder_ranges(seq, horizon, |n, _, lo, hi| {
            let v = hi - lo;
            if v > var[n - 1] {
                var[n - 1] = v;
            }
        })?;
    }
    let max_all = var.iter().copied().fold(0.0f64, f64::max);
    let max_half = var[..horizon.div_ceil(2)].iter().copied().fold(0.0f64, f64::max);
    let moderate_trend = var.iter().enumerate().map(|(i, v)| v / (i + 1) as f64).collect();
    Ok(VariationReport {
        horizon,
        bounded: max_all <= 1.01 * max_half + tol,
        var,
        moderate_trend,
    })
}

/// Exact extrema of `u_n = f_n - S_n f` over the whole shift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrectionExtrema {
    pub n: usize,
    pub u_min: f64,
    pub u_max: f64,
}

impl CorrectionExtrema {
    pub fn sup_norm(&self) -> f64 {
        self.u_min.abs().max(self.u_max.abs())
    }
}

pub(crate) fn correction_extrema(
    seq: &PotentialSequence,
    f: &LocallyConstantPotential,
    n_list: &[usize],
) -> Result<Vec<CorrectionExtrema>> {
    if seq.sft() != f.sft() {
        return Err(Error::MixedShift);
    }
    let mut ns: Vec<usize> = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if ns[0] == 0 {
        return Err(Error::InvalidGrid("horizons must be at least 1".into()));
    }
    let sft = seq.sft();
    let k = f.depth();
    let lag = seq.lag();
    let max_n = *ns.last().expect("non-empty");
    let mut want = vec![false; max_n + 1];
    ns.iter().for_each(|&n| want[n] = true);

    // S_n f reads n + k - 1 symbols, f_n reads n + lag; the `ext` symbols
    // beyond the latter are optimized out through `tails`, keyed by the last
    // min(len, k - 1) symbols of the scanned word.
    let ext = (k - 1).saturating_sub(lag);
    let mut tails: Vec<Vec<(f64, f64)>> = Vec::new();
    if ext > 0 {
        sft.ensure_code_space_within_cap(k - 1)?;
        sft.ensure_words_within_cap(k - 1 + ext)?;
        tails.push(Vec::new());
        for j in 1..k {
            let mut t = vec![(f64::INFINITY, f64::NEG_INFINITY); sft.code_space(j) as usize];
            for_each_word(sft, j + ext, |w| {
                let s = f.path_sum(w).unwrap_or(0.0);
                let e = &mut t[sft.code(&w[..j])];
                e.0 = e.0.min(s);
                e.1 = e.1.max(s);
            });
            tails.push(t);
        }
    }

    let mut out: Vec<(f64, f64)> = vec![(f64::INFINITY, f64::NEG_INFINITY); max_n + 1];
    let mut sums = vec![0.0f64; max_n + lag + 1];
    scan(seq, max_n + lag, |w, cur| {
        let l = w.len();
        sums[l] = sums[l - 1]
            + if l >= k {
                f.value_by_code(sft.code(&w[l - k..]))
            } else {
                0.0
            };
        if l > lag && want[l - lag] {
            let n = l - lag;
            let (lo, hi) = cur.range_at(w, l);
            let (s_lo, s_hi) = if ext == 0 {
                let s = sums[n + k - 1];
                (s, s)
            } else {
                let j = l.min(k - 1);
                let t = tails[j][sft.code(&w[l - j..])];
                (sums[l] + t.0, sums[l] + t.1)
            };
            let o = &mut out[n];
            o.0 = o.0.min(lo - s_hi);
            o.1 = o.1.max(hi - s_lo);
        }
        Ok(true)
    })?;
    Ok(ns
        .into_iter()
        .map(|n| CorrectionExtrema {
            n,
            u_min: out[n].0,
            u_max: out[n].1,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DefectPoint {
    pub n: usize,
    /// `(1/n) ‖f_n - S_n f‖∞`.
    pub delta: f64,
    /// Largest `delta` at this or any later listed horizon.
    pub tail_max: f64,
}

/// `δ_n = (1/n)‖f_n - S_n f‖∞` for each listed `n`, computed exactly.
pub fn asymptotic_defect(
    seq: &PotentialSequence,
    f: &LocallyConstantPotential,
    n_list: &[usize],
) -> Result<Vec<DefectPoint>> {
    let ext = correction_extrema(seq, f, n_list)?;
    let mut points: Vec<DefectPoint> = ext
        .iter()
        .map(|e| DefectPoint {
            n: e.n,
            delta: e.sup_norm() / e.n as f64,
            tail_max: 0.0,
        })
        .collect();
    let mut running = 0.0f64;
    for p in points.iter_mut().rev() {
        running = running.max(p.delta);
        p.tail_max = running;
    }
    Ok(points)
}

/// JSON forms of a sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    Cocycle {
        dimension: usize,
        matrices: BTreeMap<String, Vec<Vec<f64>>>,
        #[serde(default)]
        norm: NormKind,
    },
    Additive {
        potential: PotentialSpec,
    },
    MeasureLog {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<Vec<f64>>,
        #[serde(rename = "N")]
        n: BTreeMap<String, Vec<Vec<f64>>>,
    },
}

impl SequenceSpec {
    pub fn build(&self, sft: &Sft) -> Result<PotentialSequence> {
        match self {
            SequenceSpec::Cocycle {
                dimension,
                matrices,
                norm,
            } => {
                let blocks = symbol_blocks(sft, matrices, "cocycle matrices")?;
                for (a, b) in blocks.iter().enumerate() {
                    if b.len() != *dimension {
                        return Err(Error::InvalidCocycle(format!(
                            "matrix for symbol {a} has {} rows, dimension is {dimension}",
                            b.len()
                        )));
                    }
                }
                PotentialSequence::cocycle(sft, MatrixCocycle::from_rows(&blocks, *norm)?)
            }
            SequenceSpec::Additive { potential } => {
                Ok(PotentialSequence::additive(potential.build(sft)?))
            }
            SequenceSpec::MeasureLog { p, n } => Ok(PotentialSequence::measure_log(
                MeasureSpec::HiddenMarkov {
                    p: p.clone(),
                    n: n.clone(),
                }
                .build(sft)?,
            )),
        }
    }
}

/// JSON forms of a measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    /// `p` defaults to the stationary vector of `Σ_a N_a`.
    HiddenMarkov {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<Vec<f64>>,
        #[serde(rename = "N")]
        n: BTreeMap<String, Vec<Vec<f64>>>,
    },
    Bernoulli {
        probs: Vec<f64>,
    },
}

impl MeasureSpec {
    pub fn build(&self, sft: &Sft) -> Result<CylinderMeasure> {
        match self {
            MeasureSpec::HiddenMarkov { p, n } => {
                let blocks = symbol_blocks(sft, n, "hidden-Markov matrices")?;
                let mut mats = Vec::with_capacity(blocks.len());
                for (a, b) in blocks.iter().enumerate() {
                    mats.push(Matrix::from_rows(b).ok_or_else(|| {
                        Error::InvalidMeasure(format!("matrix for symbol {a} is not square"))
                    })?);
                }
                match p {
                    Some(p) => CylinderMeasure::hidden_markov(sft, p.clone(), mats),
                    None => CylinderMeasure::hidden_markov_stationary(sft, mats),
                }
            }
            MeasureSpec::Bernoulli { probs } => CylinderMeasure::bernoulli(sft, probs),
        }
    }
}

fn symbol_blocks(
    sft: &Sft,
    map: &BTreeMap<String, Vec<Vec<f64>>>,
    what: &str,
) -> Result<Vec<Vec<Vec<f64>>>> {
    let mut out: Vec<Option<Vec<Vec<f64>>>> = vec![None; sft.alphabet_size()];
    for (key, rows) in map {
        let w: Word = key.parse()?;
        if w.len() != 1 || w[0] as usize >= sft.alphabet_size() {
            return Err(Error::InvalidWord(format!(
                "{what}: key {key:?} is not a symbol of the alphabet"
            )));
        }
        out[w[0] as usize] = Some(rows.clone());
    }
    out.into_iter()
        .enumerate()
        .map(|(a, b)| {
            b.ok_or_else(|| Error::InvalidWord(format!("{what}: missing entry for symbol {a}")))
        })
        .collect()
}
