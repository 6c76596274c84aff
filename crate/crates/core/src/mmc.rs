//! Maximum mean cycle on a strongly connected word graph (Karp).
//!
//! `D[j][v]` is the heaviest walk of exactly `j` edges from a fixed source to
//! `v`; the maximum cycle mean is
//! `max_v min_{0<=j<n} (D[n][v] - D[j][v]) / (n - j)`. The walk realizing
//! `D[n][v*]` at the optimal `v*` contains an optimal cycle, which is
//! extracted as the witness.

use crate::error::Result;
use crate::shift::{PeriodicOrbit, WordGraph};

/// A cycle of maximal mean weight.
#[derive(Clone, Debug)]
pub struct MeanCycle {
    pub mean: f64,
    pub orbit: PeriodicOrbit,
    /// Node indices along the cycle, starting at the node whose first symbol
    /// opens the canonical rotation.
    pub nodes: Vec<usize>,
}

/// Maximum over directed cycles of (cycle weight / cycle length).
///
/// `weight(u, v)` gives the weight of the edge `u -> v`. The graph must be
/// strongly connected, which holds for word graphs of primitive shifts.
pub fn max_mean_cycle<W>(graph: &WordGraph, weight: W) -> Result<MeanCycle>
where
    W: Fn(usize, usize) -> f64,
{
    let n = graph.node_count();
    graph.sft().ensure_within_cap(
        (n as u128) * (n as u128 + 1),
        format!("Karp table for a {n}-node graph"),
    )?;
    let neg = f64::NEG_INFINITY;
    let mut d = vec![neg; (n + 1) * n];
    let mut pred = vec![u32::MAX; (n + 1) * n];
    d[0] = 0.0;
    for j in 1..=n {
        let (prev, cur) = d.split_at_mut(j * n);
        let prev = &prev[(j - 1) * n..];
        let cur = &mut cur[..n];
        let pj = &mut pred[j * n..(j + 1) * n];
        for v in 0..n {
            let mut best = neg;
            let mut arg = u32::MAX;
            for u in graph.predecessors(v) {
                if prev[u] == neg {
                    continue;
                }
                let cand = prev[u] + weight(u, v);
                if cand > best {
                    best = cand;
                    arg = u as u32;
                }
            }
            cur[v] = best;
            pj[v] = arg;
        }
    }

    let dn = &d[n * n..];
    let mut best_value = neg;
    let mut best_v = usize::MAX;
    for v in 0..n {
        if dn[v] == neg {
            continue;
        }
        let mut worst = f64::INFINITY;
        for j in 0..n {
            let dj = d[j * n + v];
            if dj == neg {
                continue;
            }
            worst = worst.min((dn[v] - dj) / (n - j) as f64);
        }
        if worst > best_value {
            best_value = worst;
            best_v = v;
        }
    }

    // Walk of length n ending at best_v, oldest node first.
    let mut walk = vec![best_v; n + 1];
    let mut v = best_v;
    for j in (1..=n).rev() {
        let u = pred[j * n + v] as usize;
        walk[j - 1] = u;
        v = u;
    }

    let candidates = decompose_cycles(&walk);
    let mut chosen: Option<(f64, Vec<usize>, PeriodicOrbit)> = None;
    for cyc in candidates {
        let len = cyc.len();
        let total: f64 = (0..len).map(|i| weight(cyc[i], cyc[(i + 1) % len])).sum();
        let mean = total / len as f64;
        let orbit = PeriodicOrbit::from_canonical(graph.cycle_word(&cyc));
        let better = match &chosen {
            None => true,
            Some((m, _, o)) => {
                let tol = 1e-12 * (1.0 + m.abs());
                mean > m + tol || ((mean - m).abs() <= tol && orbit < *o)
            }
        };
        if better {
            chosen = Some((mean, cyc, orbit));
        }
    }
    let (mean, cyc, orbit) = chosen.expect("a walk of n edges on n nodes repeats a node");
    let nodes = rotate_to_canonical(graph, cyc, &orbit);
    debug_assert!(
        (mean - best_value).abs() <= 1e-8 * (1.0 + best_value.abs()),
        "witness mean {mean} vs Karp value {best_value}"
    );
    Ok(MeanCycle { mean, orbit, nodes })
}

/// Minimum mean cycle, as the negated maximum of negated weights.
pub fn min_mean_cycle<W>(graph: &WordGraph, weight: W) -> Result<MeanCycle>
where
    W: Fn(usize, usize) -> f64,
{
    let mut c = max_mean_cycle(graph, |u, v| -weight(u, v))?;
    c.mean = -c.mean;
    Ok(c)
}

/// Splits a closed-walk-containing node sequence into its simple cycles.
fn decompose_cycles(walk: &[usize]) -> Vec<Vec<usize>> {
    let mut stack: Vec<usize> = Vec::with_capacity(walk.len());
    let mut out = Vec::new();
    for &v in walk {
        if let Some(pos) = stack.iter().position(|&x| x == v) {
            out.push(stack[pos..].to_vec());
            stack.truncate(pos);
        }
        stack.push(v);
    }
    out
}

fn rotate_to_canonical(graph: &WordGraph, mut cyc: Vec<usize>, orbit: &PeriodicOrbit) -> Vec<usize> {
    for _ in 0..cyc.len() {
        if graph.cycle_word(&cyc) == *orbit.cycle() {
            break;
        }
        cyc.rotate_left(1);
    }
    cyc
}
