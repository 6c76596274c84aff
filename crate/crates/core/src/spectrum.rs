//! Pressure curves `q ↦ P(q f)`, the entropy spectrum obtained from them by a
//! Legendre transform, and large-deviation rate functions.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{invariant_average_range, LocallyConstantPotential};
use crate::thermo::{equilibrium_state, pressure_additive};

/// Points per Legendre search window.
const WINDOW_POINTS: usize = 33;
/// Initial search window `[-8, 8]`.
const WINDOW_HALF_WIDTH: f64 = 8.0;
/// Refinement stops once the minimum is bracketed within this.
const REFINE_TOL: f64 = 1e-8;
const MAX_REFINEMENTS: usize = 64;
/// Windows are widened until `|t| · (max f - min f)` reaches this, which keeps
/// every transfer weight above `e^{-600}`.
const SATURATION: f64 = 600.0;
/// Largest `|t|` searched; power iteration stalls on the nearly reducible
/// transfer matrices beyond it.
const MAX_PARAMETER: f64 = 1024.0;
/// Relative slack for treating a point as inside the invariant range.
const RANGE_SLACK: f64 = 1e-12;
/// Relative slack for an edge to count as tight against an extremal mean.
const TIGHT_SLACK: f64 = 1e-9;
/// Squarings used to read a spectral radius off `‖A^m‖^{1/m}`, `m = 2^60`.
const RADIUS_SQUARINGS: usize = 61;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PressureCurve {
    pub q: Vec<f64>,
    /// `P(q f)`.
    pub values: Vec<f64>,
    /// `∫ f dμ_q` with `μ_q` the equilibrium state of `q f`.
    pub derivatives: Vec<f64>,
}

/// `P(q f)` and its derivative along a sorted grid.
pub fn pressure_curve(f: &LocallyConstantPotential, q_grid: &[f64]) -> Result<PressureCurve> {
    check_sorted(q_grid, "q grid")?;
    let rows = q_grid
        .par_iter()
        .map(|&q| {
            let g = f.scale(q);
            let mu = equilibrium_state(&g)?;
            Ok((pressure_additive(&g), mu.integrate(f)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (values, derivatives) = rows.into_iter().unzip();
    Ok(PressureCurve {
        q: q_grid.to_vec(),
        values,
        derivatives,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub alpha: Vec<f64>,
    /// `E(α)`; `-∞` outside `[alpha_min, alpha_max]`.
    pub values: Vec<f64>,
    /// Additive uncertainty on both `α` and `E` inherited from the representative.
    pub band: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Set when `f` is cohomologous to a constant; the spectrum is then the
    /// single point `(c, P(0))`.
    pub degenerate: bool,
    /// `q` attaining the minimum for each `α`, `NaN` outside the range.
    pub argmin_q: Vec<f64>,
}

impl SpectrumResult {
    pub fn with_band(mut self, band: f64) -> Self {
        self.band = band;
        self
    }
}

/// `E(α) = inf_q (P(q f) - q α)` on the grid.
pub fn entropy_spectrum(f: &LocallyConstantPotential, alpha_grid: &[f64]) -> Result<SpectrumResult> {
    check_sorted(alpha_grid, "alpha grid")?;
    let (alpha_min, alpha_max) = invariant_average_range(f)?;
    let width = alpha_max - alpha_min;
    let scale = f.sup_norm().max(1.0);
    if width <= crate::potential::DEFAULT_TOL * scale {
        let c = 0.5 * (alpha_min + alpha_max);
        return Ok(SpectrumResult {
            alpha: vec![c],
            values: vec![pressure_additive(&f.scale(0.0))],
            band: 0.0,
            alpha_min,
            alpha_max,
            degenerate: true,
            argmin_q: vec![0.0],
        });
    }
    let slack = RANGE_SLACK * scale;
    let spread = f.max_value() - f.min_value();
    let p = |q: f64| pressure_additive(&f.scale(q));
    let rows: Vec<(f64, f64)> = alpha_grid
        .par_iter()
        .map(|&a| {
            if a < alpha_min - slack || a > alpha_max + slack {
                return (f64::NEG_INFINITY, f64::NAN);
            }
            if let Some(v) = endpoint(a, alpha_min, alpha_max, slack).and_then(|upper| {
                extremal_pressure(f, None, if upper { alpha_max } else { alpha_min }, upper)
            })
            {
                let q = if a > alpha_min + slack { f64::INFINITY } else { f64::NEG_INFINITY };
                return (v.max(0.0), q);
            }
            let (v, q) = legendre_inf(&p, a.clamp(alpha_min, alpha_max), spread);
            (v.max(0.0), q)
        })
        .collect();
    let (values, argmin_q) = rows.into_iter().unzip();
    Ok(SpectrumResult {
        alpha: alpha_grid.to_vec(),
        values,
        band: 0.0,
        alpha_min,
        alpha_max,
        degenerate: false,
        argmin_q,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateFunction {
    pub x: Vec<f64>,
    /// `I(x)`; `+∞` outside the range of invariant averages of `f`.
    pub values: Vec<f64>,
    /// `x̄ = ∫ f dμ_g`, where `I` vanishes.
    pub minimizer: f64,
    pub x_min: f64,
    pub x_max: f64,
}

/// `I(x) = sup_t (t x - P(g + t f)) + P(g)` for averages of `f` under the
/// equilibrium state of `g`.
pub fn rate_function(
    f: &LocallyConstantPotential,
    g: &LocallyConstantPotential,
    x_grid: &[f64],
) -> Result<RateFunction> {
    check_sorted(x_grid, "x grid")?;
    let (f, g) = f.reconcile(g)?;
    let (x_min, x_max) = invariant_average_range(&f)?;
    let minimizer = equilibrium_state(&g)?.integrate(&f)?;
    let p_g = pressure_additive(&g);
    let width = x_max - x_min;
    let scale = f.sup_norm().max(1.0);
    let slack = RANGE_SLACK * scale;
    let degenerate = width <= crate::potential::DEFAULT_TOL * scale;
    let spread = f.max_value() - f.min_value();
    let p = |t: f64| pressure_additive(&g.add(&f.scale(t)).expect("reconciled depths"));
    let values = x_grid
        .par_iter()
        .map(|&x| {
            if x < x_min - slack || x > x_max + slack {
                return f64::INFINITY;
            }
            if degenerate {
                return 0.0;
            }
            if let Some(v) = endpoint(x, x_min, x_max, slack).and_then(|upper| {
                extremal_pressure(&f, Some(&g), if upper { x_max } else { x_min }, upper)
            })
            {
                return (p_g - v).max(0.0);
            }
            let (v, _) = legendre_inf(&p, x.clamp(x_min, x_max), spread);
            (p_g - v).max(0.0)
        })
        .collect();
    Ok(RateFunction {
        x: x_grid.to_vec(),
        values,
        minimizer,
        x_min,
        x_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivativeCheck {
    /// `∫ f dμ_q`.
    pub analytic: f64,
    /// `(P((q+h) f) - P((q-h) f)) / 2h`.
    pub numeric: f64,
    pub gap: f64,
}

/// Compares the equilibrium-state integral with a central difference of the
/// pressure curve.
pub fn derivative_check(f: &LocallyConstantPotential, q: f64, h: f64) -> Result<DerivativeCheck> {
    if !(h > 0.0 && h.is_finite()) || !q.is_finite() {
        return Err(Error::Domain(format!(
            "derivative check needs finite q and h > 0, got q = {q}, h = {h}"
        )));
    }
    let analytic = equilibrium_state(&f.scale(q))?.integrate(f)?;
    let numeric =
        (pressure_additive(&f.scale(q + h)) - pressure_additive(&f.scale(q - h))) / (2.0 * h);
    Ok(DerivativeCheck {
        analytic,
        numeric,
        gap: (analytic - numeric).abs(),
    })
}

/// Discrete Legendre conjugate `s ↦ max_i (s x_i - y_i)` of sampled points.
pub fn legendre_conjugate(xs: &[f64], ys: &[f64], slopes: &[f64]) -> Vec<f64> {
    slopes
        .iter()
        .map(|&s| {
            xs.iter()
                .zip(ys)
                .map(|(&x, &y)| s * x - y)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

fn check_sorted(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("{what} has a non-finite entry")));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidGrid(format!("{what} is not sorted")));
    }
    Ok(())
}

/// `Some(true)` at the top of `[lo, hi]`, `Some(false)` at the bottom.
fn endpoint(x: f64, lo: f64, hi: f64, slack: f64) -> Option<bool> {
    if (x - hi).abs() <= slack {
        Some(true)
    } else if (x - lo).abs() <= slack {
        Some(false)
    } else {
        None
    }
}

/// `max { h(μ) + ∫ g dμ : ∫ f dμ = mean }` for `mean` the top (`upper`) or
/// bottom of the invariant range of `f`, with `g = 0` when absent.
///
/// Measures extremizing `∫ f dμ` live on the edges that are tight for a
/// subaction `u`, i.e. `f(v) - m + u(v) = u(w)` on `v -> w`. The value is
/// the log spectral radius of `e^g` restricted to those edges. `None` when
/// rounding leaves no tight cycle; the caller then falls back to the
/// Legendre search. `f` and `g` share a depth.
fn extremal_pressure(
    f: &LocallyConstantPotential,
    g: Option<&LocallyConstantPotential>,
    mean: f64,
    upper: bool,
) -> Option<f64> {
    let sign = if upper { 1.0 } else { -1.0 };
    let graph = f.graph();
    let n = graph.node_count();
    let w = |v: usize| sign * (f.value_at(v) - mean);
    // Heaviest walk of at most n edges into each node; no cycle is positive.
    let mut u = vec![0.0f64; n];
    for _ in 0..n {
        let mut next = u.clone();
        for v in 0..n {
            for s in graph.successors(v) {
                next[s] = next[s].max(u[v] + w(v));
            }
        }
        u = next;
    }
    let tol = TIGHT_SLACK * f.sup_norm().max(1.0) * n as f64;
    let mut keep = vec![true; n];
    let tight = |v: usize, s: usize| (u[v] + w(v) - u[s]).abs() <= tol;
    // Nodes off every tight cycle lack a tight edge in or out; peel them.
    loop {
        let mut changed = false;
        for v in 0..n {
            if !keep[v] {
                continue;
            }
            let out = graph.successors(v).any(|s| keep[s] && tight(v, s));
            let inc = graph.predecessors(v).any(|p| keep[p] && tight(p, v));
            if !(out && inc) {
                keep[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let nodes: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    if nodes.is_empty() {
        return None;
    }
    let d = nodes.len();
    let offset = g.map_or(0.0, |g| nodes.iter().map(|&v| g.value_at(v)).fold(f64::NEG_INFINITY, f64::max));
    let mut a = vec![0.0; d * d];
    for (i, &v) in nodes.iter().enumerate() {
        for (j, &s) in nodes.iter().enumerate() {
            if graph.successors(v).any(|x| x == s) && tight(v, s) {
                a[i * d + j] = g.map_or(1.0, |g| (g.value_at(v) - offset).exp());
            }
        }
    }
    Some(log_spectral_radius(a, d) + offset)
}

/// `log ρ(A)` for a nonnegative matrix with a cycle, from `‖A^m‖^{1/m}`
/// with entry-sum norm; exact up to `O(log(d) / m)`.
fn log_spectral_radius(mut a: Vec<f64>, d: usize) -> f64 {
    let mut log_scale = 0.0;
    let mut power = 1.0;
    let mut out = vec![0.0; d * d];
    let mut estimate = 0.0;
    for _ in 0..RADIUS_SQUARINGS {
        let top = a.iter().copied().fold(0.0f64, f64::max);
        for x in &mut a {
            *x /= top;
        }
        log_scale += top.ln();
        estimate = (log_scale + a.iter().sum::<f64>().ln()) / power;
        crate::linalg::mul_into(&a, &a, d, &mut out);
        std::mem::swap(&mut a, &mut out);
        log_scale *= 2.0;
        power *= 2.0;
    }
    estimate
}

/// Minimum of `phi` on `WINDOW_POINTS` equispaced points of `[lo, hi]`.
struct WindowMin {
    index: usize,
    value: f64,
    arg: f64,
    /// Largest rise from the minimum to a grid neighbour. For convex `phi`
    /// and an interior minimum, the secants through the neighbours keep the
    /// true minimum within this of `value`.
    bracket: f64,
}

fn window_min(phi: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> WindowMin {
    let step = (hi - lo) / (WINDOW_POINTS - 1) as f64;
    let values: Vec<(f64, f64)> = (0..WINDOW_POINTS)
        .map(|i| {
            let t = if i == WINDOW_POINTS - 1 { hi } else { lo + step * i as f64 };
            (t, phi(t))
        })
        .collect();
    let mut index = 0;
    for (i, &(_, v)) in values.iter().enumerate() {
        if v < values[index].1 {
            index = i;
        }
    }
    let (arg, value) = values[index];
    let rise = |j: usize| values.get(j).map_or(0.0, |&(_, v)| v - value);
    let bracket = rise(index + 1).max(index.checked_sub(1).map_or(0.0, rise));
    WindowMin {
        index,
        value,
        arg,
        bracket,
    }
}

/// `(inf_t (p(t) - t x), argmin)` for convex `p(t) = P(g + t f)` with
/// `spread = max f - min f`.
fn legendre_inf(p: &impl Fn(f64) -> f64, x: f64, spread: f64) -> (f64, f64) {
    let phi = |t: f64| p(t) - t * x;
    let limit = (SATURATION / spread).clamp(WINDOW_HALF_WIDTH, MAX_PARAMETER);
    let (mut lo, mut hi) = (-WINDOW_HALF_WIDTH, WINDOW_HALF_WIDTH);
    let mut m = window_min(&phi, lo, hi);
    // Slide the window outward while the minimum sits on an open edge.
    loop {
        let w = hi - lo;
        let step = w / (WINDOW_POINTS - 1) as f64;
        if m.index == 0 && lo > -limit {
            hi = lo + step;
            lo = (lo - 2.0 * w).max(-limit);
        } else if m.index == WINDOW_POINTS - 1 && hi < limit {
            lo = hi - step;
            hi = (hi + 2.0 * w).min(limit);
        } else {
            break;
        }
        m = window_min(&phi, lo, hi);
    }
    let (mut best, mut t_best) = (m.value, m.arg);
    for _ in 0..MAX_REFINEMENTS {
        let interior = m.index > 0 && m.index < WINDOW_POINTS - 1;
        if interior && m.bracket < REFINE_TOL {
            break;
        }
        let step = (hi - lo) / (WINDOW_POINTS - 1) as f64;
        let (a, b) = ((t_best - step).max(lo), (t_best + step).min(hi));
        if b - a <= f64::EPSILON * t_best.abs().max(1.0) {
            break;
        }
        m = window_min(&phi, a, b);
        (lo, hi) = (a, b);
        if m.value < best {
            best = m.value;
            t_best = m.arg;
        }
    }
    (best, t_best)
}
