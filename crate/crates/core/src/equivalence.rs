//! Additive representatives of asymptotically additive sequences.
//!
//! The averaged approximants `f_k / k` form a Cauchy sequence in the quotient
//! seminorm; a certificate records their pairwise distances, a chosen
//! representative `f` and the measured defects `(1/n)‖f_n - S_n f‖∞`.
//!
//! Two candidate representatives are built at the largest grid point `k*`:
//! the averaged approximant `f_{k*}/k*` and the increment
//! `g(w) = f_{k*}(w) - f_{k*-1}(Tw)`. They lie in the same class up to the
//! measured distance between them, and the increment often has far smaller
//! defects (it is exact for additive sequences and product measures). The
//! certificate keeps whichever has the smaller tail bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{quotient_distance, LocallyConstantPotential};
use crate::sequence::scan::scan;
use crate::sequence::{asymptotic_defect, correction_extrema, DefectPoint, PotentialSequence};

pub const CERTIFICATE_VERSION: &str = "cert_v1";

/// `f_k / k`, a potential of depth `k + lag`.
pub fn approximant(seq: &PotentialSequence, k: usize) -> Result<LocallyConstantPotential> {
    if k == 0 {
        return Err(Error::InvalidGrid("approximant order must be at least 1".into()));
    }
    let lag = seq.lag();
    let depth = k + lag;
    seq.sft().ensure_words_within_cap(depth)?;
    let mut values = Vec::with_capacity(seq.sft().count_words(depth) as usize);
    scan(seq, depth, |w, cur| {
        if w.len() == depth {
            let (lo, hi) = cur.range_at(w, depth);
            let v = if lo == hi { lo } else { 0.5 * (lo + hi) };
            if !v.is_finite() {
                return Err(Error::ZeroProbability {
                    word: crate::shift::Word::from(w).to_string(),
                });
            }
            values.push(v / k as f64);
        }
        Ok(true)
    })?;
    LocallyConstantPotential::from_values(seq.sft(), depth, values)
}

/// `g_k(w) = f_k(w) - f_{k-1}(Tw)` on `(k + lag)`-words, with `g_1 = f_1`.
pub fn increment_approximant(seq: &PotentialSequence, k: usize) -> Result<LocallyConstantPotential> {
    let top = approximant(seq, k)?;
    if k == 1 {
        return Ok(top);
    }
    let prev = approximant(seq, k - 1)?;
    let kf = k as f64;
    let km = (k - 1) as f64;
    LocallyConstantPotential::from_fn(seq.sft(), top.depth(), |w| {
        kf * top.get(w).expect("admissible") - km * prev.get(&w[1..]).expect("admissible")
    })
}

/// Pairwise quotient distances between the approximants on `k_grid`.
pub fn cauchy_table(seq: &PotentialSequence, k_grid: &[usize]) -> Result<Vec<Vec<f64>>> {
    check_grid(k_grid)?;
    let approx: Vec<_> = k_grid
        .iter()
        .map(|&k| approximant(seq, k))
        .collect::<Result<_>>()?;
    table_of(&approx)
}

fn table_of(approx: &[LocallyConstantPotential]) -> Result<Vec<Vec<f64>>> {
    let n = approx.len();
    let mut t = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = quotient_distance(&approx[i], &approx[j])?;
            t[i][j] = d;
            t[j][i] = d;
        }
    }
    Ok(t)
}

/// Approximant orders must be positive and strictly increasing.
pub fn check_grid(k_grid: &[usize]) -> Result<()> {
    if k_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if k_grid[0] == 0 {
        return Err(Error::InvalidGrid("grid points must be at least 1".into()));
    }
    if k_grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentativeKind {
    /// `f_{k*} / k*`.
    Averaged,
    /// `f_{k*} - f_{k*-1} ∘ T`.
    Increment,
}

/// `a(k) = max_{k ≤ n ≤ n_max} δ_n(f_k / k)`; `None` when `k > n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridDefect {
    pub k: usize,
    pub max_defect: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceCertificate {
    pub version: &'static str,
    pub sequence_kind: &'static str,
    pub k_grid: Vec<usize>,
    pub k_star: usize,
    pub representative_kind: RepresentativeKind,
    pub representative: LocallyConstantPotential,
    pub cauchy_table: Vec<Vec<f64>>,
    pub grid_defects: Vec<GridDefect>,
    /// `δ_n` of the sequence against the representative, `n = 1..=n_max`.
    pub defect_trace: Vec<DefectPoint>,
    /// `‖f̃_{k*}/k* - f̃‖_*` for the chosen representative `f`.
    pub distance_to_averaged: f64,
    /// Distance to the averaged approximant plus the last measured defect.
    pub tail_bound: f64,
    pub tol: f64,
    pub tolerance_met: bool,
    pub notes: Vec<String>,
}

const EMPIRICAL_NOTE: &str = "tail_bound is measured at a finite horizon; it estimates a limsup and is not a proof";

struct Candidate {
    kind: RepresentativeKind,
    potential: LocallyConstantPotential,
    trace: Vec<DefectPoint>,
    distance: f64,
    bound: f64,
}

impl Candidate {
    fn new(
        seq: &PotentialSequence,
        kind: RepresentativeKind,
        potential: LocallyConstantPotential,
        averaged: &LocallyConstantPotential,
        horizons: &[usize],
    ) -> Result<Self> {
        let distance = match kind {
            RepresentativeKind::Averaged => 0.0,
            RepresentativeKind::Increment => quotient_distance(averaged, &potential)?,
        };
        let trace = asymptotic_defect(seq, &potential, horizons)?;
        let last = trace.last().map_or(0.0, |p| p.delta);
        Ok(Self {
            kind,
            potential,
            trace,
            distance,
            bound: distance + last,
        })
    }
}

/// Builds a certificate at `k* = max(k_grid)` with defects measured for
/// `n = 1..=n_max`.
pub fn construct_equivalent(
    seq: &PotentialSequence,
    k_grid: &[usize],
    n_max: usize,
    tol: f64,
) -> Result<EquivalenceCertificate> {
    check_grid(k_grid)?;
    if n_max == 0 {
        return Err(Error::Domain("defect horizon must be at least 1".into()));
    }
    let approx: Vec<_> = k_grid
        .iter()
        .map(|&k| approximant(seq, k))
        .collect::<Result<_>>()?;
    let cauchy = table_of(&approx)?;
    let horizons: Vec<usize> = (1..=n_max).collect();

    let mut grid_defects = Vec::with_capacity(k_grid.len());
    for (&k, a) in k_grid.iter().zip(&approx) {
        let max_defect = if k <= n_max {
            let hs: Vec<usize> = (k..=n_max).collect();
            let t = asymptotic_defect(seq, a, &hs)?;
            Some(t.iter().fold(0.0f64, |m, p| m.max(p.delta)))
        } else {
            None
        };
        grid_defects.push(GridDefect { k, max_defect });
    }

    let k_star = *k_grid.last().expect("non-empty grid");
    let averaged = approx.last().expect("non-empty grid").clone();
    let mut best = Candidate::new(
        seq,
        RepresentativeKind::Averaged,
        averaged.clone(),
        &averaged,
        &horizons,
    )?;
    if k_star >= 2 {
        let inc = increment_approximant(seq, k_star)?;
        let cand = Candidate::new(seq, RepresentativeKind::Increment, inc, &averaged, &horizons)?;
        if cand.bound < best.bound {
            best = cand;
        }
    }

    let tolerance_met = best.bound <= tol;
    let mut notes = vec![EMPIRICAL_NOTE.to_string()];
    if !seq.is_cylinder_constant() {
        notes.push("custom sequence: approximants use the midpoint of each cylinder range".into());
    }
    Ok(EquivalenceCertificate {
        version: CERTIFICATE_VERSION,
        sequence_kind: seq.kind_name(),
        k_grid: k_grid.to_vec(),
        k_star,
        representative_kind: best.kind,
        representative: best.potential,
        cauchy_table: cauchy,
        grid_defects,
        defect_trace: best.trace,
        distance_to_averaged: best.distance,
        tail_bound: best.bound,
        tol,
        tolerance_met,
        notes,
    })
}

/// `u_n = f_n - S_n f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrectionTerm {
    pub n: usize,
    pub u_min: f64,
    pub u_max: f64,
    pub sup_norm: f64,
}

/// Exact extrema of the corrections `u_n` for each listed `n`.
pub fn correction_terms(
    seq: &PotentialSequence,
    f: &LocallyConstantPotential,
    n_list: &[usize],
) -> Result<Vec<CorrectionTerm>> {
    Ok(correction_extrema(seq, f, n_list)?
        .into_iter()
        .map(|e| CorrectionTerm {
            n: e.n,
            u_min: e.u_min,
            u_max: e.u_max,
            sup_norm: e.sup_norm(),
        })
        .collect())
}
