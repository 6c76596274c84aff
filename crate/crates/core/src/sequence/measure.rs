use crate::error::{Error, Result};
use crate::linalg::{power_iteration, Matrix};
use crate::shift::{for_each_word, Sft, Word};

/// Tolerance for stochasticity and stationarity checks on supplied data.
const MEASURE_TOL: f64 = 1e-9;

/// A shift-invariant measure given by hidden-Markov cylinder weights
/// `μ(a_1 .. a_n) = p · N_{a_1} ⋯ N_{a_n} · 1`.
///
/// Invariants: every `N_a ≥ 0`, `Q = Σ_a N_a` is stochastic, `p Q = p` with
/// `Σ p = 1`, and `N_a N_b 1 = 0` whenever `ab` is forbidden, so the mass
/// lives on the shift.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderMeasure {
    sft: Sft,
    initial: Vec<f64>,
    matrices: Vec<Matrix>,
}

impl CylinderMeasure {
    pub fn hidden_markov(sft: &Sft, initial: Vec<f64>, matrices: Vec<Matrix>) -> Result<Self> {
        let dim = check_matrices(sft, &matrices)?;
        if initial.len() != dim {
            return Err(Error::InvalidMeasure(format!(
                "initial vector has {} entries, expected {dim}",
                initial.len()
            )));
        }
        if initial.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidMeasure("initial vector must be nonnegative".into()));
        }
        let total: f64 = initial.iter().sum();
        if (total - 1.0).abs() > MEASURE_TOL {
            return Err(Error::InvalidMeasure(format!(
                "initial vector sums to {total}, expected 1"
            )));
        }
        let q = sum_matrices(&matrices, dim);
        let pq = q.left_mul(&initial);
        let drift = pq
            .iter()
            .zip(&initial)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if drift > MEASURE_TOL {
            return Err(Error::InvalidMeasure(format!(
                "initial vector is not stationary for the summed matrix (drift {drift:.3e})"
            )));
        }
        Ok(Self {
            sft: sft.clone(),
            initial,
            matrices,
        })
    }

    /// Hidden-Markov measure with `p` the stationary vector of `Σ_a N_a`,
    /// which must be irreducible.
    pub fn hidden_markov_stationary(sft: &Sft, matrices: Vec<Matrix>) -> Result<Self> {
        let dim = check_matrices(sft, &matrices)?;
        let q = sum_matrices(&matrices, dim);
        // The lazy chain (I + Q)/2 has the same stationary vector and is
        // aperiodic whenever Q is irreducible.
        let (_, mut p, _, converged) = power_iteration(dim, |x, y| {
            let xq = q.left_mul(x);
            for i in 0..dim {
                y[i] = 0.5 * (x[i] + xq[i]);
            }
        });
        if !converged {
            return Err(Error::InvalidMeasure(
                "summed matrix is not irreducible; no unique stationary vector".into(),
            ));
        }
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= s);
        Self::hidden_markov(sft, p, matrices)
    }

    /// Product measure with symbol weights `probs`; requires the full shift.
    pub fn bernoulli(sft: &Sft, probs: &[f64]) -> Result<Self> {
        if !sft.is_full() {
            return Err(Error::InvalidMeasure(
                "Bernoulli measures charge forbidden words unless the shift is full".into(),
            ));
        }
        let matrices = probs
            .iter()
            .map(|&p| Matrix::from_rows(&[vec![p]]).expect("1x1"))
            .collect();
        Self::hidden_markov(sft, vec![1.0], matrices)
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `μ([w])`.
    pub fn prob(&self, word: &[u8]) -> f64 {
        let d = self.dim();
        let mut row = self.initial.clone();
        let mut next = vec![0.0; d];
        let mut scale = 0.0;
        for &a in word {
            crate::linalg::left_mul_into(&row, self.matrices[a as usize].entries(), d, &mut next);
            std::mem::swap(&mut row, &mut next);
            let m = row.iter().copied().fold(0.0f64, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            row.iter_mut().for_each(|v| *v /= m);
            scale += m.ln();
        }
        (scale + row.iter().sum::<f64>().ln()).exp()
    }

    /// `log μ([w])`; errors on a null cylinder.
    pub fn log_prob(&self, word: &[u8]) -> Result<f64> {
        self.sft.check_word(word)?;
        let v = log_prob_unchecked(self, word);
        if v == f64::NEG_INFINITY {
            return Err(Error::ZeroProbability {
                word: Word::from(word).to_string(),
            });
        }
        Ok(v)
    }

    /// Symbols with `μ([a]) = 0`.
    pub fn null_symbols(&self) -> Vec<u8> {
        (0..self.sft.alphabet_size() as u16)
            .map(|a| a as u8)
            .filter(|&a| self.prob(&[a]) == 0.0)
            .collect()
    }

    /// Largest violation of `Σ_{|w|=n} μ(w) = 1` and `μ(w) = Σ_a μ(wa)` over
    /// admissible words of length at most `horizon`.
    pub fn consistency_defect(&self, horizon: usize) -> Result<f64> {
        self.sft.ensure_words_within_cap(horizon + 1)?;
        let mut worst = 0.0f64;
        for n in 1..=horizon {
            let mut total = 0.0;
            for_each_word(&self.sft, n, |w| {
                let p = self.prob(w);
                total += p;
                let mut ext = w.to_vec();
                ext.push(0);
                let mut children = 0.0;
                for b in self.sft.successors(*w.last().expect("non-empty")) {
                    *ext.last_mut().expect("non-empty") = b;
                    children += self.prob(&ext);
                }
                worst = worst.max((p - children).abs());
            });
            worst = worst.max((total - 1.0).abs());
        }
        Ok(worst)
    }
}

pub(crate) fn log_prob_unchecked(mu: &CylinderMeasure, word: &[u8]) -> f64 {
    let p = mu.prob(word);
    if p > 0.0 {
        p.ln()
    } else {
        f64::NEG_INFINITY
    }
}

fn check_matrices(sft: &Sft, matrices: &[Matrix]) -> Result<usize> {
    if matrices.len() != sft.alphabet_size() {
        return Err(Error::InvalidMeasure(format!(
            "{} matrices given for an alphabet of {} symbols",
            matrices.len(),
            sft.alphabet_size()
        )));
    }
    let dim = matrices[0].dim();
    if dim == 0 {
        return Err(Error::InvalidMeasure("hidden state space is empty".into()));
    }
    for (a, m) in matrices.iter().enumerate() {
        if m.dim() != dim {
            return Err(Error::InvalidMeasure(format!(
                "matrix for symbol {a} has dimension {}, expected {dim}",
                m.dim()
            )));
        }
        if m.entries().iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "matrix for symbol {a} must be nonnegative, square and finite"
            )));
        }
    }
    let q = sum_matrices(matrices, dim);
    for (i, s) in q.row_sums().into_iter().enumerate() {
        if (s - 1.0).abs() > MEASURE_TOL {
            return Err(Error::InvalidMeasure(format!(
                "row {i} of the summed matrix sums to {s}, expected 1"
            )));
        }
    }
    for a in 0..sft.alphabet_size() {
        for b in 0..sft.alphabet_size() {
            if sft.allows(a as u8, b as u8) {
                continue;
            }
            let ab = matrices[a].mul(&matrices[b]);
            if ab.entry_sum() > 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "measure charges the forbidden word {}",
                    Word::from(vec![a as u8, b as u8])
                )));
            }
        }
    }
    Ok(dim)
}

fn sum_matrices(matrices: &[Matrix], dim: usize) -> Matrix {
    matrices.iter().fold(Matrix::zeros(dim), |acc, m| acc.add(m))
}
