//! Brute-force oracles shared by the integration tests. None of them call the
//! library code they are used to check.

#![allow(dead_code)]

use nadd::potential::LocallyConstantPotential;
use nadd::shift::Sft;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn golden_rows() -> Vec<Vec<bool>> {
    vec![vec![true, true], vec![true, false]]
}

pub fn full_rows(a: usize) -> Vec<Vec<bool>> {
    vec![vec![true; a]; a]
}

pub fn admissible(rows: &[Vec<bool>], w: &[u8]) -> bool {
    w.windows(2).all(|p| rows[p[0] as usize][p[1] as usize])
}

/// Every admissible word of length `n`, in lexicographic order, by odometer.
pub fn words(rows: &[Vec<bool>], n: usize) -> Vec<Vec<u8>> {
    let a = rows.len() as u8;
    let mut out = Vec::new();
    let mut w = vec![0u8; n];
    loop {
        if admissible(rows, &w) {
            out.push(w.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < a {
                break;
            }
            w[i] = 0;
        }
    }
}

/// `(min, max)` of `S_n f` over admissible words of length `n + k - 1`.
pub fn brute_birkhoff(rows: &[Vec<bool>], f: impl Fn(&[u8]) -> f64, k: usize, n: usize) -> (f64, f64) {
    words(rows, n + k - 1)
        .iter()
        .map(|w| w.windows(k).map(&f).sum::<f64>())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)))
}

/// `(min, max)` cycle mean over all simple cycles of the depth-`k` word graph,
/// edge `w → w'` weighted by `f(w)`.
pub fn simple_cycle_means(rows: &[Vec<bool>], f: impl Fn(&[u8]) -> f64, k: usize) -> (f64, f64) {
    let nodes = words(rows, k);
    let n = nodes.len();
    let succ: Vec<Vec<usize>> = nodes
        .iter()
        .map(|w| {
            (0..n)
                .filter(|&j| {
                    let v = &nodes[j];
                    w[1..] == v[..k - 1] && rows[w[k - 1] as usize][v[k - 1] as usize]
                })
                .collect()
        })
        .collect();
    let weight: Vec<f64> = nodes.iter().map(|w| f(w)).collect();
    let mut best = (f64::INFINITY, f64::NEG_INFINITY);
    // Cycles through their smallest node `s` only, so each is met once per rotation start.
    for s in 0..n {
        let mut on_path = vec![false; n];
        let mut stack = vec![(s, 0usize)];
        on_path[s] = true;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < succ[u].len() {
                let v = succ[u][*next];
                *next += 1;
                if v == s {
                    let sum: f64 = stack.iter().map(|&(x, _)| weight[x]).sum();
                    let m = sum / stack.len() as f64;
                    best = (best.0.min(m), best.1.max(m));
                } else if v > s && !on_path[v] {
                    on_path[v] = true;
                    stack.push((v, 0));
                }
            } else {
                on_path[u] = false;
                stack.pop();
            }
        }
    }
    best
}

/// `log ρ(M)` for a primitive nonnegative matrix by repeated squaring.
pub fn log_spectral_radius(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    // a = M^power / e^log_scale throughout.
    let mut log_scale = 0.0f64;
    let mut power = 1.0f64;
    let mut est = f64::NAN;
    for _ in 0..60 {
        let mx = a.iter().flatten().fold(0.0f64, |x, &y| x.max(y));
        a.iter_mut().flatten().for_each(|x| *x /= mx);
        log_scale += mx.ln();
        est = (log_scale + a.iter().flatten().sum::<f64>().ln()) / power;
        let mut b = vec![vec![0.0; n]; n];
        for i in 0..n {
            for l in 0..n {
                let x = a[i][l];
                if x != 0.0 {
                    for j in 0..n {
                        b[i][j] += x * a[l][j];
                    }
                }
            }
        }
        a = b;
        log_scale *= 2.0;
        power *= 2.0;
    }
    est
}

/// `log ρ` of the transfer matrix of a depth-`k` potential, built from scratch.
pub fn oracle_pressure(rows: &[Vec<bool>], f: impl Fn(&[u8]) -> f64, k: usize) -> f64 {
    let k = k.max(1);
    let nodes = words(rows, k);
    let n = nodes.len();
    let mut m = vec![vec![0.0; n]; n];
    for (i, w) in nodes.iter().enumerate() {
        for (j, v) in nodes.iter().enumerate() {
            if w[1..] == v[..k - 1] && rows[w[k - 1] as usize][v[k - 1] as usize] {
                m[i][j] = f(w).exp();
            }
        }
    }
    log_spectral_radius(&m)
}

pub fn random_values(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..=scale)).collect()
}

pub fn random_potential(rng: &mut ChaCha8Rng, sft: &Sft, depth: usize) -> LocallyConstantPotential {
    let n = sft.count_words(depth) as usize;
    LocallyConstantPotential::from_values(sft, depth, random_values(rng, n, 1.0)).unwrap()
}

/// A random primitive transition structure on `a` symbols.
pub fn random_primitive(rng: &mut ChaCha8Rng, a: usize) -> (Sft, Vec<Vec<bool>>) {
    loop {
        let rows: Vec<Vec<bool>> = (0..a)
            .map(|_| (0..a).map(|_| rng.gen_bool(0.7)).collect())
            .collect();
        if let Ok(s) = Sft::new(rows.clone()) {
            return (s, rows);
        }
    }
}

pub fn rows_of(sft: &Sft) -> Vec<Vec<bool>> {
    sft.transition_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x == 1).collect())
        .collect()
}
