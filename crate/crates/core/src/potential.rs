//! Locally constant potentials and the quotient seminorm.
//!
//! A potential of depth `k` assigns a value to every admissible `k`-word and
//! is read on a point `x` through its first `k` symbols. On the depth-`k`
//! [`WordGraph`] the edge `w -> w'` carries weight `f(w)`, so the Birkhoff sum
//! `S_n f(x)` is the weight of the `n`-edge path starting at `x_1 .. x_k`, and
//! it depends on the first `n + k - 1` symbols of `x`.
//!
//! Extremal invariant averages of `f` are attained on periodic orbits, so
//! `sup_μ |∫ f dμ|` (the quotient seminorm, the distance from `f` to the
//! closure of the coboundaries) is a pair of maximum-mean-cycle problems.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmc::{max_mean_cycle, min_mean_cycle};
use crate::shift::{word_graph, PeriodicOrbit, Sft, Word, WordGraph};

/// Default absolute tolerance used for comparisons throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A potential depending on the first `depth` symbols.
#[derive(Clone, Debug)]
pub struct LocallyConstantPotential {
    graph: Arc<WordGraph>,
    values: Vec<f64>,
}

impl LocallyConstantPotential {
    /// Values listed in lexicographic order of the admissible `depth`-words.
    pub fn from_values(sft: &Sft, depth: usize, values: Vec<f64>) -> Result<Self> {
        let graph = Arc::new(word_graph(sft, depth)?);
        Self::on_graph(graph, values)
    }

    pub(crate) fn on_graph(graph: Arc<WordGraph>, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.node_count() {
            return Err(Error::InvalidPotential(format!(
                "depth-{} potential needs {} values, got {}",
                graph.depth(),
                graph.node_count(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential(format!(
                "non-finite value on word {}",
                graph.node(i)
            )));
        }
        Ok(Self { graph, values })
    }

    pub fn from_fn<F: FnMut(&[u8]) -> f64>(sft: &Sft, depth: usize, mut f: F) -> Result<Self> {
        let graph = Arc::new(word_graph(sft, depth)?);
        let values = graph.nodes().iter().map(|w| f(w)).collect();
        Self::on_graph(graph, values)
    }

    /// The constant potential `c` (depth 1).
    pub fn constant(sft: &Sft, c: f64) -> Result<Self> {
        Self::from_fn(sft, 1, |_| c)
    }

    /// Depth-1 potential with `values[a]` on symbol `a`.
    pub fn from_symbol_values(sft: &Sft, values: &[f64]) -> Result<Self> {
        Self::from_values(sft, 1, values.to_vec())
    }

    /// Builds from a map keyed by symbol strings; every admissible word must
    /// appear and no inadmissible word may.
    pub fn from_word_map(sft: &Sft, depth: usize, map: &BTreeMap<String, f64>) -> Result<Self> {
        let graph = Arc::new(word_graph(sft, depth)?);
        let mut values = vec![f64::NAN; graph.node_count()];
        for (key, &v) in map {
            let w: Word = key.parse()?;
            if w.len() != depth {
                return Err(Error::InvalidPotential(format!(
                    "word {key:?} has length {}, expected {depth}",
                    w.len()
                )));
            }
            let i = graph.node_index(&w).ok_or_else(|| {
                Error::InvalidPotential(format!("word {key:?} is not admissible"))
            })?;
            values[i] = v;
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::InvalidPotential(format!(
                "missing value for word {}",
                graph.node(i)
            )));
        }
        Self::on_graph(graph, values)
    }

    pub fn sft(&self) -> &Sft {
        self.graph.sft()
    }

    pub fn depth(&self) -> usize {
        self.graph.depth()
    }

    pub fn graph(&self) -> &WordGraph {
        &self.graph
    }

    /// Values in lexicographic order of the admissible `depth`-words.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value_at(&self, node: usize) -> f64 {
        self.values[node]
    }

    /// Value on the cylinder named by the first `depth` symbols of `word`.
    pub fn get(&self, word: &[u8]) -> Option<f64> {
        if word.len() < self.depth() {
            return None;
        }
        self.graph
            .node_index(&word[..self.depth()])
            .map(|i| self.values[i])
    }

    /// Like [`get`](Self::get) for words already known to be admissible.
    #[inline]
    pub(crate) fn value_by_code(&self, code: usize) -> f64 {
        self.values[self.graph.node_index_by_code(code).expect("admissible window")]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// The same function read through a longer window.
    pub fn lift(&self, depth: usize) -> Result<Self> {
        if depth < self.depth() {
            return Err(Error::InvalidPotential(format!(
                "cannot lift depth {} down to {depth}",
                self.depth()
            )));
        }
        if depth == self.depth() {
            return Ok(self.clone());
        }
        let k = self.depth();
        Self::from_fn(self.sft(), depth, |w| {
            self.get(&w[..k]).expect("prefix of admissible word")
        })
    }

    /// Lifts both potentials to the larger depth.
    pub fn reconcile(&self, other: &Self) -> Result<(Self, Self)> {
        if self.sft() != other.sft() {
            return Err(Error::MixedShift);
        }
        let d = self.depth().max(other.depth());
        Ok((self.lift(d)?, other.lift(d)?))
    }

    fn combine(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let (a, b) = self.reconcile(other)?;
        let values = a.values.iter().zip(&b.values).map(|(&x, &y)| op(x, y)).collect();
        Self::on_graph(a.graph.clone(), values)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x - y)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            graph: self.graph.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        Self {
            graph: self.graph.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Sum of `f` over every depth-window lying inside `word`, i.e.
    /// `S_n f` on the cylinder of `word` with `n = |word| - depth + 1`.
    pub fn path_sum(&self, word: &[u8]) -> Option<f64> {
        let k = self.depth();
        if word.len() < k {
            return None;
        }
        word.windows(k).map(|w| self.get(w)).sum()
    }

    /// `S_n f(x)` on a word of length at least `n + depth - 1`.
    pub fn birkhoff_sum(&self, word: &[u8], n: usize) -> Option<f64> {
        let k = self.depth();
        if n == 0 || word.len() < n + k - 1 {
            return None;
        }
        self.path_sum(&word[..n + k - 1])
    }

    /// The potential `(1/n) S_n f`, of depth `n + depth - 1`.
    pub fn birkhoff_average(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("Birkhoff horizon must be at least 1".into()));
        }
        let k = self.depth();
        Self::from_fn(self.sft(), n + k - 1, |w| {
            self.path_sum(w).expect("admissible") / n as f64
        })
    }

    pub fn to_spec(&self) -> PotentialSpec {
        PotentialSpec {
            depth: self.depth(),
            values: self
                .graph
                .nodes()
                .iter()
                .zip(&self.values)
                .map(|(w, &v)| (w.to_string(), v))
                .collect(),
        }
    }
}

impl Serialize for LocallyConstantPotential {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

/// JSON form `{"depth": k, "values": {"word": number, ..}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub depth: usize,
    pub values: BTreeMap<String, f64>,
}

impl PotentialSpec {
    pub fn build(&self, sft: &Sft) -> Result<LocallyConstantPotential> {
        LocallyConstantPotential::from_word_map(sft, self.depth, &self.values)
    }
}

/// Exact extrema of `S_n f` over the whole shift.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BirkhoffExtrema {
    pub n: usize,
    pub min_value: f64,
    pub max_value: f64,
    /// Word of length `n + depth - 1` naming a minimizing cylinder.
    pub argmin_word: Word,
    pub argmax_word: Word,
}

impl BirkhoffExtrema {
    pub fn sup_norm(&self) -> f64 {
        self.min_value.abs().max(self.max_value.abs())
    }
}

/// Max-plus (and min-plus) dynamic programming over `n`-node paths.
pub fn birkhoff_extrema(f: &LocallyConstantPotential, n: usize) -> Result<BirkhoffExtrema> {
    if n == 0 {
        return Err(Error::Domain("Birkhoff horizon must be at least 1".into()));
    }
    let g = f.graph();
    let nodes = g.node_count();
    f.sft()
        .ensure_within_cap((n as u128) * nodes as u128, "Birkhoff backpointer table")?;
    let (max_value, argmax_word) = extremal_path(f, n, |a, b| a > b);
    let (min_value, argmin_word) = extremal_path(f, n, |a, b| a < b);
    Ok(BirkhoffExtrema {
        n,
        min_value,
        max_value,
        argmin_word,
        argmax_word,
    })
}

fn extremal_path(
    f: &LocallyConstantPotential,
    n: usize,
    better: impl Fn(f64, f64) -> bool,
) -> (f64, Word) {
    let g = f.graph();
    let nodes = g.node_count();
    let mut cur: Vec<f64> = f.values.clone();
    let mut back: Vec<u32> = Vec::with_capacity((n - 1) * nodes);
    for _ in 1..n {
        let mut next = vec![0.0; nodes];
        for v in 0..nodes {
            let mut best = f64::NAN;
            let mut arg = u32::MAX;
            for u in g.predecessors(v) {
                if best.is_nan() || better(cur[u], best) {
                    best = cur[u];
                    arg = u as u32;
                }
            }
            next[v] = best + f.values[v];
            back.push(arg);
        }
        cur = next;
    }
    let mut end = 0;
    for v in 1..nodes {
        if better(cur[v], cur[end]) {
            end = v;
        }
    }
    let value = cur[end];
    let mut path = vec![end; n];
    for step in (1..n).rev() {
        path[step - 1] = back[(step - 1) * nodes + path[step]] as usize;
    }
    let mut word = g.node(path[0]).to_vec();
    for &v in &path[1..] {
        word.push(*g.node(v).last().expect("depth >= 1"));
    }
    (value, Word::from(word))
}

/// `(min S_n f, max S_n f)` for every `n = 1..=n_max`, in one pass.
pub fn birkhoff_extrema_trace(f: &LocallyConstantPotential, n_max: usize) -> Vec<(f64, f64)> {
    let g = f.graph();
    let nodes = g.node_count();
    let mut hi = f.values.clone();
    let mut lo = f.values.clone();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            let mut nh = vec![0.0; nodes];
            let mut nl = vec![0.0; nodes];
            for v in 0..nodes {
                let (mut a, mut b) = (f64::NEG_INFINITY, f64::INFINITY);
                for u in g.predecessors(v) {
                    a = a.max(hi[u]);
                    b = b.min(lo[u]);
                }
                nh[v] = a + f.values[v];
                nl[v] = b + f.values[v];
            }
            hi = nh;
            lo = nl;
        }
        let mx = hi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mn = lo.iter().copied().fold(f64::INFINITY, f64::min);
        out.push((mn, mx));
    }
    out
}

/// Quotient seminorm with its witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct SeminormReport {
    pub value: f64,
    /// Largest invariant average, attained on `max_witness`.
    pub max_mean: f64,
    /// Smallest invariant average, attained on `min_witness`.
    pub min_mean: f64,
    pub max_witness: PeriodicOrbit,
    pub min_witness: PeriodicOrbit,
    /// `(n, (1/n)‖S_n f‖∞)` when a convergence trace was requested.
    pub trace: Vec<(usize, f64)>,
    /// Last trace entry minus `value`; zero without a trace.
    pub gap: f64,
}

/// `‖f̃‖_* = max(MMC(f), -MMC(-f))`, equal to `lim (1/n)‖S_n f‖∞`.
pub fn quotient_seminorm(f: &LocallyConstantPotential) -> Result<SeminormReport> {
    let g = f.graph();
    let hi = max_mean_cycle(g, |u, _| f.values[u])?;
    let lo = min_mean_cycle(g, |u, _| f.values[u])?;
    Ok(SeminormReport {
        value: hi.mean.max(-lo.mean),
        max_mean: hi.mean,
        min_mean: lo.mean,
        max_witness: hi.orbit,
        min_witness: lo.orbit,
        trace: Vec::new(),
        gap: 0.0,
    })
}

/// The seminorm together with `(1/n)‖S_n f‖∞` for `n = 1..=n_max`; every
/// trace entry is bounded below by the seminorm.
pub fn seminorm_convergence_trace(
    f: &LocallyConstantPotential,
    n_max: usize,
) -> Result<SeminormReport> {
    if n_max == 0 {
        return Err(Error::Domain("trace horizon must be at least 1".into()));
    }
    let mut report = quotient_seminorm(f)?;
    report.trace = birkhoff_extrema_trace(f, n_max)
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| (i + 1, lo.abs().max(hi.abs()) / (i + 1) as f64))
        .collect();
    report.gap = report.trace.last().map_or(0.0, |&(_, t)| t - report.value);
    Ok(report)
}

/// `h - h∘T`, a potential of depth `depth(h) + 1`.
pub fn coboundary(h: &LocallyConstantPotential) -> Result<LocallyConstantPotential> {
    let k = h.depth();
    LocallyConstantPotential::from_fn(h.sft(), k + 1, |w| {
        h.get(&w[..k]).expect("admissible") - h.get(&w[1..]).expect("admissible")
    })
}

/// `‖f̃ - g̃‖_*`; vanishes exactly when `f` and `g` are physically equivalent.
pub fn quotient_distance(f: &LocallyConstantPotential, g: &LocallyConstantPotential) -> Result<f64> {
    Ok(quotient_seminorm(&f.sub(g)?)?.value)
}

/// `(min, max)` of `∫ f dμ` over shift-invariant probability measures.
pub fn invariant_average_range(f: &LocallyConstantPotential) -> Result<(f64, f64)> {
    let r = quotient_seminorm(f)?;
    Ok((r.min_mean, r.max_mean))
}
