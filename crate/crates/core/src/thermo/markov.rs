use crate::error::{Error, Result};
use crate::linalg::{power_iteration, Matrix};
use crate::potential::LocallyConstantPotential;
use crate::sequence::CylinderMeasure;
use crate::shift::{enumerate_words, Sft, Word};

const KERNEL_TOL: f64 = 1e-12;

/// An `m`-step Markov measure: a kernel from admissible `m`-words to next
/// symbols and its stationary distribution. Order 0 is a product measure.
#[derive(Clone, Debug)]
pub struct MarkovMeasure {
    sft: Sft,
    order: usize,
    states: Vec<Word>,
    /// Dense index by word code; `u32::MAX` marks inadmissible codes.
    index: Vec<u32>,
    /// `kernel[s * |A| + a] = P(s, a)`.
    kernel: Vec<f64>,
    stationary: Vec<f64>,
}

impl MarkovMeasure {
    /// Kernel rows indexed by the admissible `order`-words in lexicographic
    /// order; the stationary distribution is computed.
    pub fn from_kernel(sft: &Sft, order: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut m = Self::skeleton(sft, order)?;
        let a = sft.alphabet_size();
        if rows.len() != m.states.len() {
            return Err(Error::InvalidMeasure(format!(
                "kernel has {} rows, expected {} (one per admissible {order}-word)",
                rows.len(),
                m.states.len()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != a {
                return Err(Error::InvalidMeasure(format!(
                    "kernel row {i} has {} entries, expected {a}",
                    r.len()
                )));
            }
            let s = &m.states[i];
            let mut total = 0.0;
            for (b, &p) in r.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidMeasure(format!("kernel entry ({i},{b}) is {p}")));
                }
                if p > 0.0 && !s.last().is_none_or(|&l| sft.allows(l, b as u8)) {
                    return Err(Error::InvalidMeasure(format!(
                        "kernel allows the forbidden transition {s} -> {b}"
                    )));
                }
                total += p;
            }
            if (total - 1.0).abs() > KERNEL_TOL {
                return Err(Error::InvalidMeasure(format!(
                    "kernel row {i} sums to {total}, expected 1"
                )));
            }
            m.kernel[i * a..(i + 1) * a].copy_from_slice(r);
        }
        m.stationary = m.solve_stationary()?;
        Ok(m)
    }

    /// Product measure with symbol weights `probs`; requires the full shift.
    pub fn bernoulli(sft: &Sft, probs: &[f64]) -> Result<Self> {
        if !sft.is_full() {
            return Err(Error::InvalidMeasure(
                "Bernoulli measures charge forbidden words unless the shift is full".into(),
            ));
        }
        Self::from_kernel(sft, 0, vec![probs.to_vec()])
    }

    /// Uniform product measure.
    pub fn uniform(sft: &Sft) -> Result<Self> {
        let a = sft.alphabet_size();
        Self::bernoulli(sft, &vec![1.0 / a as f64; a])
    }

    fn skeleton(sft: &Sft, order: usize) -> Result<Self> {
        let states = if order == 0 {
            vec![Word::default()]
        } else {
            enumerate_words(sft, order)?
        };
        sft.ensure_code_space_within_cap(order)?;
        let mut index = vec![u32::MAX; sft.code_space(order) as usize];
        for (i, s) in states.iter().enumerate() {
            index[sft.code(s)] = i as u32;
        }
        let a = sft.alphabet_size();
        Ok(Self {
            sft: sft.clone(),
            order,
            kernel: vec![0.0; states.len() * a],
            stationary: vec![0.0; states.len()],
            states,
            index,
        })
    }

    /// Builds from kernel and stationary data already known to be consistent.
    pub(crate) fn from_parts(
        sft: &Sft,
        order: usize,
        kernel: impl Fn(&[u8], u8) -> f64,
        stationary: impl Fn(&[u8]) -> f64,
    ) -> Result<Self> {
        let mut m = Self::skeleton(sft, order)?;
        let a = sft.alphabet_size();
        let mut total = 0.0;
        for (i, s) in m.states.iter().enumerate() {
            for b in 0..a {
                let allowed = s.last().is_none_or(|&l| sft.allows(l, b as u8));
                m.kernel[i * a + b] = if allowed { kernel(s, b as u8) } else { 0.0 };
            }
            m.stationary[i] = stationary(s);
            total += m.stationary[i];
        }
        m.stationary.iter_mut().for_each(|p| *p /= total);
        Ok(m)
    }

    fn next_state(&self, s: usize, b: u8) -> usize {
        if self.order == 0 {
            return 0;
        }
        let a = self.sft.alphabet_size();
        let tail = self.sft.code(&self.states[s]) % self.sft.code_space(self.order - 1) as usize;
        self.index[tail * a + b as usize] as usize
    }

    fn solve_stationary(&self) -> Result<Vec<f64>> {
        let n = self.states.len();
        let a = self.sft.alphabet_size();
        // Lazy chain: same stationary vector, aperiodic when irreducible.
        let (_, mut pi, _, converged) = power_iteration(n, |x, y| {
            for (i, v) in y.iter_mut().enumerate() {
                *v = 0.5 * x[i];
            }
            for s in 0..n {
                for b in 0..a {
                    let p = self.kernel[s * a + b];
                    if p > 0.0 {
                        y[self.next_state(s, b as u8)] += 0.5 * x[s] * p;
                    }
                }
            }
        });
        if !converged {
            return Err(Error::InvalidMeasure(
                "kernel is not irreducible; no unique stationary distribution".into(),
            ));
        }
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|p| *p /= total);
        Ok(pi)
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// `P(s, a)` for state index `s`.
    pub fn kernel(&self, s: usize, a: u8) -> f64 {
        self.kernel[s * self.sft.alphabet_size() + a as usize]
    }

    /// Kernel rows in state order.
    pub fn kernel_rows(&self) -> Vec<Vec<f64>> {
        self.kernel
            .chunks(self.sft.alphabet_size())
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn state_index(&self, word: &[u8]) -> Option<usize> {
        match self.index.get(self.sft.code(word)) {
            Some(&i) if i != u32::MAX && word.len() == self.order => Some(i as usize),
            _ => None,
        }
    }

    /// `μ([w])`; zero for inadmissible words.
    pub fn cylinder_prob(&self, word: &[u8]) -> f64 {
        if !self.sft.is_admissible(word) {
            return 0.0;
        }
        let m = self.order;
        if word.len() < m {
            return self
                .states
                .iter()
                .zip(&self.stationary)
                .filter(|(s, _)| s.starts_with(word))
                .map(|(_, p)| p)
                .sum();
        }
        let mut s = self.state_index(&word[..m]).expect("admissible state");
        let mut p = self.stationary[s];
        for &b in &word[m..] {
            p *= self.kernel(s, b);
            if p == 0.0 {
                return 0.0;
            }
            s = self.next_state(s, b);
        }
        p
    }

    /// `∫ f dμ`, exact.
    pub fn integrate(&self, f: &LocallyConstantPotential) -> Result<f64> {
        if *f.sft() != self.sft {
            return Err(Error::MixedShift);
        }
        Ok(f.graph()
            .nodes()
            .iter()
            .zip(f.values())
            .map(|(w, &v)| self.cylinder_prob(w) * v)
            .sum())
    }

    /// Kolmogorov-Sinai entropy `-Σ_s π(s) Σ_a P(s,a) log P(s,a)`.
    pub fn entropy(&self) -> f64 {
        let a = self.sft.alphabet_size();
        let mut h = 0.0;
        for (s, &pi) in self.stationary.iter().enumerate() {
            for b in 0..a {
                let p = self.kernel[s * a + b];
                if p > 0.0 {
                    h -= pi * p * p.ln();
                }
            }
        }
        h
    }

    /// Largest `|Σ_s π(s) P(s → s')  - π(s')|`.
    pub fn stationarity_defect(&self) -> f64 {
        let a = self.sft.alphabet_size();
        let mut next = vec![0.0; self.states.len()];
        for s in 0..self.states.len() {
            for b in 0..a {
                let p = self.kernel[s * a + b];
                if p > 0.0 {
                    next[self.next_state(s, b as u8)] += self.stationary[s] * p;
                }
            }
        }
        next.iter()
            .zip(&self.stationary)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    /// The same measure as hidden-Markov cylinder weights over the states.
    pub fn to_cylinder_measure(&self) -> Result<CylinderMeasure> {
        let n = self.states.len();
        let a = self.sft.alphabet_size();
        let mut mats = vec![Matrix::zeros(n); a];
        for s in 0..n {
            for b in 0..a {
                let p = self.kernel[s * a + b];
                if p > 0.0 {
                    mats[b].set(s, self.next_state(s, b as u8), p);
                }
            }
        }
        CylinderMeasure::hidden_markov(&self.sft, self.stationary.clone(), mats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_entropy_and_probabilities() {
        let sft = Sft::full(2).unwrap();
        let m = MarkovMeasure::bernoulli(&sft, &[0.25, 0.75]).unwrap();
        let want = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        assert!((m.entropy() - want).abs() < 1e-15);
        assert!((m.cylinder_prob(&[1, 0, 1]) - 0.75 * 0.25 * 0.75).abs() < 1e-15);
        let u = MarkovMeasure::uniform(&sft).unwrap();
        assert!((u.entropy() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn first_order_chain_on_the_golden_mean() {
        let gm = Sft::golden_mean();
        let m = MarkovMeasure::from_kernel(&gm, 1, vec![vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!(m.stationarity_defect() < 1e-12);
        assert!((m.stationary()[0] - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.cylinder_prob(&[1, 1]), 0.0);
        let hm = m.to_cylinder_measure().unwrap();
        for w in enumerate_words(&gm, 5).unwrap() {
            assert!((hm.prob(&w) - m.cylinder_prob(&w)).abs() < 1e-14);
        }
        assert!(MarkovMeasure::from_kernel(&gm, 1, vec![vec![0.5, 0.5], vec![0.5, 0.5]]).is_err());
    }
}
