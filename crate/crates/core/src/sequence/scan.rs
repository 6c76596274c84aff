//! Incremental evaluation of a sequence along a depth-first word walk.
//!
//! A [`Cursor`] keeps one state slot per word length, so extending a word by
//! one symbol costs one matrix (or vector) product no matter how long the
//! word is, and a single walk to length `L` yields `f_n` for every `n ≤ L`.
//! Products are renormalized at every step with the log of the scale kept
//! separately.

use crate::error::Result;
use crate::linalg::{left_mul_into, mul_into, Matrix};
use crate::potential::LocallyConstantPotential;
use crate::sequence::cocycle::NormKind;
use crate::sequence::{CustomSequence, PotentialSequence, SequenceKind};
use crate::shift::{walk_words, WordVisitor};

pub(crate) struct Cursor<'a> {
    lag: usize,
    state: State<'a>,
}

enum State<'a> {
    Additive {
        f: &'a LocallyConstantPotential,
        sums: Vec<f64>,
    },
    Product {
        dim: usize,
        mats: &'a [Matrix],
        /// `Some` for cocycles (full products), `None` for measures (row vectors).
        norm: Option<NormKind>,
        data: Vec<Vec<f64>>,
        scale: Vec<f64>,
    },
    Custom(&'a CustomSequence),
    Combination(Vec<(f64, Cursor<'a>)>),
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(seq: &'a PotentialSequence, max_len: usize) -> Self {
        let slots = max_len + 1;
        let state = match seq.kind() {
            SequenceKind::Additive(f) => State::Additive {
                f,
                sums: vec![0.0; slots],
            },
            SequenceKind::Cocycle(c) => {
                let mut data = vec![vec![0.0; c.dim() * c.dim()]; slots];
                data[0] = Matrix::identity(c.dim()).entries().to_vec();
                State::Product {
                    dim: c.dim(),
                    mats: c.matrices(),
                    norm: Some(c.norm()),
                    data,
                    scale: vec![0.0; slots],
                }
            }
            SequenceKind::MeasureLog(mu) => {
                let mut data = vec![vec![0.0; mu.dim()]; slots];
                data[0] = mu.initial().to_vec();
                State::Product {
                    dim: mu.dim(),
                    mats: mu.matrices(),
                    norm: None,
                    data,
                    scale: vec![0.0; slots],
                }
            }
            SequenceKind::Custom(c) => State::Custom(c),
            SequenceKind::Combination(terms) => State::Combination(
                terms
                    .iter()
                    .map(|(c, s)| (*c, Cursor::new(s, max_len)))
                    .collect(),
            ),
        };
        Cursor {
            lag: seq.lag(),
            state,
        }
    }

    /// Advances to `word`, whose prefix of length `word.len() - 1` is the
    /// word of the previous push at that length.
    pub(crate) fn push(&mut self, word: &[u8]) {
        let l = word.len();
        match &mut self.state {
            State::Additive { f, sums } => {
                let k = f.depth();
                let add = if l >= k {
                    f.value_by_code(f.sft().code(&word[l - k..]))
                } else {
                    0.0
                };
                sums[l] = sums[l - 1] + add;
            }
            State::Product {
                dim,
                mats,
                norm,
                data,
                scale,
            } => {
                let d = *dim;
                let m = mats[word[l - 1] as usize].entries();
                let (prev, cur) = data.split_at_mut(l);
                let cur = &mut cur[0];
                if norm.is_some() {
                    mul_into(&prev[l - 1], m, d, cur);
                } else {
                    left_mul_into(&prev[l - 1], m, d, cur);
                }
                let mx = cur.iter().copied().fold(0.0f64, f64::max);
                if mx > 0.0 {
                    cur.iter_mut().for_each(|v| *v /= mx);
                    scale[l] = scale[l - 1] + mx.ln();
                } else {
                    scale[l] = f64::NEG_INFINITY;
                }
            }
            State::Custom(_) => {}
            State::Combination(terms) => terms.iter_mut().for_each(|(_, c)| c.push(word)),
        }
    }

    /// `(inf, sup)` of `f_{len - lag}` on the cylinder of `word[..len]`;
    /// requires `lag < len ≤` the last pushed length.
    pub(crate) fn range_at(&self, word: &[u8], len: usize) -> (f64, f64) {
        debug_assert!(len > self.lag);
        match &self.state {
            State::Additive { sums, .. } => (sums[len], sums[len]),
            State::Product {
                dim,
                norm,
                data,
                scale,
                ..
            } => {
                if scale[len] == f64::NEG_INFINITY {
                    return (f64::NEG_INFINITY, f64::NEG_INFINITY);
                }
                let mass = match norm {
                    Some(kind) => kind.apply(&data[len], *dim),
                    None => data[len].iter().sum(),
                };
                let v = scale[len] + mass.ln();
                (v, v)
            }
            State::Custom(c) => c.bounds(&word[..len]),
            State::Combination(terms) => {
                let n = len - self.lag;
                let (mut lo, mut hi) = (0.0, 0.0);
                for (c, cur) in terms {
                    let (a, b) = cur.range_at(word, n + cur.lag);
                    if *c >= 0.0 {
                        lo += c * a;
                        hi += c * b;
                    } else {
                        lo += c * b;
                        hi += c * a;
                    }
                }
                (lo, hi)
            }
        }
    }
}

/// Walks every admissible word of length `1..=max_len` with a cursor kept in
/// step; `visit` returns `false` to prune the subtree.
pub(crate) fn scan<F>(seq: &PotentialSequence, max_len: usize, visit: F) -> Result<()>
where
    F: FnMut(&[u8], &Cursor<'_>) -> Result<bool>,
{
    struct V<'a, F> {
        cursor: Cursor<'a>,
        visit: F,
    }
    impl<F> WordVisitor for V<'_, F>
    where
        F: FnMut(&[u8], &Cursor<'_>) -> Result<bool>,
    {
        fn enter(&mut self, word: &[u8]) -> Result<bool> {
            self.cursor.push(word);
            (self.visit)(word, &self.cursor)
        }
    }
    seq.sft().ensure_words_within_cap(max_len)?;
    let mut v = V {
        cursor: Cursor::new(seq, max_len),
        visit,
    };
    walk_words(seq.sft(), max_len, &mut v)
}

/// Calls `visit(n, w, inf, sup)` with the range of `f_n` over the rank-`n`
/// cylinder `[w]`, for every admissible `n`-word and every `n ≤ max_n`.
/// Ranges are taken over the `lag` trailing symbols `f_n` also reads.
pub(crate) fn scan_cylinder_ranges<F>(seq: &PotentialSequence, max_n: usize, visit: F) -> Result<()>
where
    F: FnMut(usize, &[u8], f64, f64),
{
    struct V<'a, F> {
        cursor: Cursor<'a>,
        lag: usize,
        max_n: usize,
        acc: Vec<(f64, f64)>,
        visit: F,
    }
    impl<F: FnMut(usize, &[u8], f64, f64)> WordVisitor for V<'_, F> {
        fn enter(&mut self, word: &[u8]) -> Result<bool> {
            let l = word.len();
            self.cursor.push(word);
            if l <= self.max_n {
                self.acc[l] = (f64::INFINITY, f64::NEG_INFINITY);
            }
            if l > self.lag {
                let (lo, hi) = self.cursor.range_at(word, l);
                let a = &mut self.acc[l - self.lag];
                a.0 = a.0.min(lo);
                a.1 = a.1.max(hi);
            }
            Ok(true)
        }
        fn leave(&mut self, word: &[u8]) {
            let l = word.len();
            if l <= self.max_n {
                let (lo, hi) = self.acc[l];
                (self.visit)(l, word, lo, hi);
            }
        }
    }
    let lag = seq.lag();
    let max_len = max_n + lag;
    seq.sft().ensure_words_within_cap(max_len)?;
    let mut v = V {
        cursor: Cursor::new(seq, max_len),
        lag,
        max_n,
        acc: vec![(0.0, 0.0); max_n + 1],
        visit,
    };
    walk_words(seq.sft(), max_len, &mut v)
}

/// Ranges of `f_n` on `(n + lag)`-cylinders, stored densely by word code.
pub(crate) struct DenseRanges {
    pub(crate) lag: usize,
    /// `tables[n][code]`; NaN marks inadmissible codes. `tables[0]` is empty.
    pub(crate) tables: Vec<Vec<(f64, f64)>>,
}

impl DenseRanges {
    pub(crate) fn build(seq: &PotentialSequence, max_n: usize) -> Result<Self> {
        let sft = seq.sft();
        let lag = seq.lag();
        let max_len = max_n + lag;
        let total: u128 = (1..=max_n).map(|n| sft.code_space(n + lag)).sum();
        sft.ensure_within_cap(total, format!("dense cylinder tables up to length {max_len}"))?;
        let mut tables: Vec<Vec<(f64, f64)>> = (0..=max_n)
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    vec![(f64::NAN, f64::NAN); sft.code_space(n + lag) as usize]
                }
            })
            .collect();
        scan(seq, max_len, |w, cur| {
            let l = w.len();
            if l > lag {
                tables[l - lag][sft.code(w)] = cur.range_at(w, l);
            }
            Ok(true)
        })?;
        Ok(Self { lag, tables })
    }
}
