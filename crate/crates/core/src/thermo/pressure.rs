use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{power_iteration, PerronData};
use crate::potential::LocallyConstantPotential;
use crate::sequence::scan::{scan, scan_cylinder_ranges};
use crate::sequence::{PotentialSequence, SequenceKind};
use crate::thermo::markov::MarkovMeasure;

/// Warning attached to every finite-horizon estimate of a limsup.
pub const FINITE_HORIZON_WARNING: &str =
    "limsup estimated at finite horizon: the point estimate is the value at the largest computed n";

/// `M[w][w'] = e^{f(w) - max f}` on the edges of the depth-`k` word graph,
/// with its Perron data.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    potential: LocallyConstantPotential,
    offset: f64,
    weights: Vec<f64>,
    perron: PerronData,
}

impl TransferMatrix {
    pub fn new(f: &LocallyConstantPotential) -> Self {
        let g = f.graph();
        let n = g.node_count();
        let offset = f.max_value();
        let weights: Vec<f64> = f.values().iter().map(|v| (v - offset).exp()).collect();
        let (root, right, it_r, ok_r) = power_iteration(n, |x, y| {
            for w in 0..n {
                y[w] = weights[w] * g.successors(w).map(|s| x[s]).sum::<f64>();
            }
        });
        let (_, left, it_l, ok_l) = power_iteration(n, |x, y| {
            for v in 0..n {
                y[v] = g.predecessors(v).map(|u| x[u] * weights[u]).sum::<f64>();
            }
        });
        Self {
            potential: f.clone(),
            offset,
            weights,
            perron: PerronData {
                root,
                left,
                right,
                iterations: it_r.max(it_l),
                converged: ok_r && ok_l,
            },
        }
    }

    pub fn depth(&self) -> usize {
        self.potential.depth()
    }

    /// `log λ` of the unshifted matrix `e^{f(w)}`.
    pub fn log_root(&self) -> f64 {
        self.perron.root.ln() + self.offset
    }

    /// Perron data of the shifted matrix `e^{f(w) - max f}`.
    pub fn perron(&self) -> &PerronData {
        &self.perron
    }

    /// `‖M v - λ v‖∞` for the normalized right vector.
    pub fn residual(&self) -> f64 {
        let g = self.potential.graph();
        let v = &self.perron.right;
        (0..v.len())
            .map(|w| {
                let mv = self.weights[w] * g.successors(w).map(|s| v[s]).sum::<f64>();
                (mv - self.perron.root * v[w]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Topological pressure of a locally constant potential: `log` of the
/// Perron root of its transfer matrix.
pub fn pressure_additive(f: &LocallyConstantPotential) -> f64 {
    TransferMatrix::new(f).log_root()
}

/// The equilibrium state of `f`, as a Markov measure of order `k - 1`
/// (order at least 1 off the full shift, where the kernel must see the last
/// symbol).
pub fn equilibrium_state(f: &LocallyConstantPotential) -> Result<MarkovMeasure> {
    let tm = TransferMatrix::new(f);
    let g = f.graph();
    let k = f.depth();
    let sft = f.sft();
    let order = if sft.is_full() { k - 1 } else { (k - 1).max(1) };
    let u = &tm.perron.left;
    let v = &tm.perron.right;
    // State s (length `order`) followed by b determines the k-word
    // last_k(s b); the chain moves there with probability ∝ v.
    let target = |s: &[u8], b: u8| -> usize {
        let mut w = s.to_vec();
        w.push(b);
        g.node_index(&w[w.len() - k..]).expect("admissible k-word")
    };
    let kernel = |s: &[u8], b: u8| -> f64 {
        let total: f64 = sft.followers(s).into_iter().map(|c| v[target(s, c)]).sum();
        v[target(s, b)] / total
    };
    let stationary = |s: &[u8]| -> f64 {
        g.nodes()
            .iter()
            .enumerate()
            .filter(|(_, w)| w.starts_with(s))
            .map(|(i, _)| u[i] * v[i])
            .sum()
    };
    MarkovMeasure::from_parts(sft, order, kernel, stationary)
}

/// Kolmogorov-Sinai entropy of a Markov measure.
pub fn entropy(mu: &MarkovMeasure) -> f64 {
    mu.entropy()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariationalReport {
    pub pressure: f64,
    pub entropy: f64,
    pub integral: f64,
    /// `|P(f) - h(μ_f) - ∫ f dμ_f|`.
    pub residual: f64,
    pub perron_residual: f64,
}

/// Residual of the variational identity at the equilibrium state.
pub fn variational_check(f: &LocallyConstantPotential) -> Result<VariationalReport> {
    let tm = TransferMatrix::new(f);
    let mu = equilibrium_state(f)?;
    let pressure = tm.log_root();
    let h = mu.entropy();
    let integral = mu.integrate(f)?;
    Ok(VariationalReport {
        pressure,
        entropy: h,
        integral,
        residual: (pressure - h - integral).abs(),
        perron_residual: tm.residual(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PressureRow {
    pub n: usize,
    /// `log Z_n`, `Z_n = Σ_{rank-n cylinders C} sup_C e^{f_n}`.
    pub log_z: f64,
    /// `(1/n) log Z_n`.
    pub value: f64,
    /// `max_{n' ≤ n} (log Z_{n'} - C)/n'`.
    pub lower: Option<f64>,
    /// `min_{n' ≤ n} (log Z_{n'} + C)/n'`.
    pub upper: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PressureEstimate {
    pub rows: Vec<PressureRow>,
    /// Value at the largest computed `n`.
    pub point: f64,
    pub additivity_constant: Option<f64>,
    /// `(lower, upper)` at the largest computed `n`.
    pub enclosure: Option<(f64, f64)>,
    pub warnings: Vec<String>,
}

/// Cylinder-sum pressure of a sequence for `n = 1..=n_max`, with an
/// enclosure when an almost-additivity constant `c` is supplied.
///
/// The enclosure needs `log Z_n + C` subadditive and `log Z_n - C`
/// superadditive. The second needs every concatenation of admissible words
/// to be admissible and `f_n` to be read on rank-`n` cylinders exactly, so it
/// is produced only for lag-0 cylinder-constant sequences on a full shift.
pub fn pressure_sequence(
    seq: &PotentialSequence,
    n_max: usize,
    c: Option<f64>,
) -> Result<PressureEstimate> {
    if n_max == 0 {
        return Err(Error::Domain("pressure horizon must be at least 1".into()));
    }
    let mut acc = vec![(f64::NEG_INFINITY, 0.0f64); n_max + 1];
    scan_cylinder_ranges(seq, n_max, |n, _, _, hi| {
        let (m, s) = &mut acc[n];
        if hi == f64::NEG_INFINITY {
            return;
        }
        if hi > *m {
            *s = *s * (*m - hi).exp() + 1.0;
            *m = hi;
        } else {
            *s += (hi - *m).exp();
        }
    })?;
    let mut warnings = vec![FINITE_HORIZON_WARNING.to_string()];
    let enclosure_ok = match c {
        Some(c) if !(c.is_finite() && c >= 0.0) => {
            return Err(Error::Domain(format!("almost-additivity constant {c} is invalid")));
        }
        Some(_) => {
            let ok = seq.lag() == 0 && seq.is_cylinder_constant() && seq.sft().is_full();
            if !ok {
                warnings.push(
                    "Fekete enclosure omitted: it needs a lag-0 cylinder-constant sequence on a full shift"
                        .into(),
                );
            }
            ok
        }
        None => false,
    };
    let mut rows = Vec::with_capacity(n_max);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for n in 1..=n_max {
        let (m, s) = acc[n];
        let log_z = m + s.ln();
        let nf = n as f64;
        let (lower, upper) = if enclosure_ok {
            let c = c.expect("checked");
            lo = lo.max((log_z - c) / nf);
            hi = hi.min((log_z + c) / nf);
            (Some(lo), Some(hi))
        } else {
            (None, None)
        };
        rows.push(PressureRow {
            n,
            log_z,
            value: log_z / nf,
            lower,
            upper,
        });
    }
    let last = rows.last().expect("n_max >= 1");
    Ok(PressureEstimate {
        point: last.value,
        enclosure: last.lower.zip(last.upper),
        additivity_constant: c,
        rows,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    /// `(n, (1/n) ∫ f_n dμ)`.
    pub trace: Vec<(usize, f64)>,
    pub point: f64,
    /// True when the value is a closed form rather than a finite-`n` value.
    pub exact: bool,
}

/// `F_*(μ) = lim (1/n) ∫ f_n dμ`; exact for additive sequences.
pub fn lyapunov_exponent(
    seq: &PotentialSequence,
    mu: &MarkovMeasure,
    n_max: usize,
) -> Result<LyapunovEstimate> {
    if seq.sft() != mu.sft() {
        return Err(Error::MixedShift);
    }
    if n_max == 0 {
        return Err(Error::Domain("Lyapunov horizon must be at least 1".into()));
    }
    if let SequenceKind::Additive(f) = seq.kind() {
        let v = mu.integrate(f)?;
        return Ok(LyapunovEstimate {
            trace: (1..=n_max).map(|n| (n, v)).collect(),
            point: v,
            exact: true,
        });
    }
    let lag = seq.lag();
    let mut sums = vec![0.0f64; n_max + 1];
    scan(seq, n_max + lag, |w, cur| {
        let l = w.len();
        if l > lag {
            let p = mu.cylinder_prob(w);
            if p > 0.0 {
                let (a, b) = cur.range_at(w, l);
                let v = if a == b { a } else { 0.5 * (a + b) };
                sums[l - lag] += p * v;
            }
        }
        Ok(true)
    })?;
    let trace: Vec<(usize, f64)> = (1..=n_max).map(|n| (n, sums[n] / n as f64)).collect();
    Ok(LyapunovEstimate {
        point: trace.last().expect("n_max >= 1").1,
        trace,
        exact: false,
    })
}
