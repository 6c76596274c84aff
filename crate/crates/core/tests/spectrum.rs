mod common;

use common::*;
use nadd::potential::{coboundary, LocallyConstantPotential};
use nadd::shift::Sft;
use nadd::spectrum::{
    derivative_check, entropy_spectrum, legendre_conjugate, pressure_curve, rate_function,
};
use nadd::thermo::{equilibrium_state, pressure_additive};
use nadd::Error;
use rand::Rng;

/// Natural-log binary entropy.
fn h2(p: f64) -> f64 {
    let t = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    t(p) + t(1.0 - p)
}

fn spin() -> LocallyConstantPotential {
    LocallyConstantPotential::from_symbol_values(&Sft::full(2).unwrap(), &[1.0, -1.0]).unwrap()
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn spin_spectrum_is_binary_entropy() {
    let alphas = grid(-1.0, 1.0, 41);
    let s = entropy_spectrum(&spin(), &alphas).unwrap();
    for (a, e) in alphas.iter().zip(&s.values) {
        assert!((e - h2((1.0 + a) / 2.0)).abs() <= 1e-6, "alpha {a}: {e} vs {}", h2((1.0 + a) / 2.0));
    }
    assert!((s.values[20] - 2f64.ln()).abs() <= 1e-8);
    assert!(s.values[0] <= 1e-6 && s.values[40] <= 1e-6);
}

#[test]
fn golden_mean_symbol_frequency_spectrum() {
    // Words with a fraction α of 1s and no 11 number about C(n(1-α), nα),
    // so E(α) = (1 - α) H(α / (1 - α)) on [0, 1/2].
    let f = LocallyConstantPotential::from_symbol_values(&Sft::golden_mean(), &[0.0, 1.0]).unwrap();
    let alphas = [0.1, 0.2, 0.276393202250021, 0.35, 0.45];
    let s = entropy_spectrum(&f, &alphas).unwrap();
    assert_eq!((s.alpha_min, s.alpha_max), (0.0, 0.5));
    for (a, e) in alphas.iter().zip(&s.values) {
        let expected = (1.0 - a) * h2(a / (1.0 - a));
        assert!((e - expected).abs() <= 1e-6, "alpha {a}: {e} vs {expected}");
    }
    // The peak is the topological entropy, reached at the Parry frequency.
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((s.values[2] - phi.ln()).abs() <= 1e-8);
}

#[test]
fn spectrum_is_concave_and_minus_infinity_outside_range() {
    let mut r = rng(61);
    let sft = Sft::full(2).unwrap();
    for _ in 0..5 {
        let f = random_potential(&mut r, &sft, 2);
        let s0 = entropy_spectrum(&f, &[0.0]).unwrap();
        let alphas = grid(s0.alpha_min, s0.alpha_max, 25);
        let s = entropy_spectrum(&f, &alphas).unwrap();
        for w in s.values.windows(3) {
            assert!(w[1] >= 0.5 * (w[0] + w[2]) - 1e-7);
        }
        let top = s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(top <= 2f64.ln() + 1e-9);
        let out = entropy_spectrum(&f, &[s0.alpha_min - 0.1, s0.alpha_max + 0.1]).unwrap();
        assert!(out.values.iter().all(|&v| v == f64::NEG_INFINITY));
    }
}

#[test]
fn pressure_curve_is_convex_with_matching_slopes() {
    let mut r = rng(62);
    let f = random_potential(&mut r, &Sft::golden_mean(), 2);
    let qs = grid(-4.0, 4.0, 33);
    let c = pressure_curve(&f, &qs).unwrap();
    for w in c.values.windows(3) {
        assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-10);
    }
    assert!(c.derivatives.windows(2).all(|d| d[0] <= d[1] + 1e-9));
    for (q, p) in qs.iter().zip(&c.values) {
        assert!((p - oracle_pressure(&golden_rows(), |w| q * f.get(w).unwrap(), 2)).abs() <= 1e-10);
    }
}

#[test]
fn legendre_duality_recovers_pressure() {
    // P(q f) = max_α (E(α) + q α) over the spectrum.
    let f = spin();
    let alphas = grid(-1.0, 1.0, 2001);
    let s = entropy_spectrum(&f, &alphas).unwrap();
    let neg: Vec<f64> = s.values.iter().map(|v| -v).collect();
    let qs = [-1.5, 0.0, 0.4, 2.0];
    let back = legendre_conjugate(&alphas, &neg, &qs);
    for (q, p) in qs.iter().zip(&back) {
        assert!((p - (2.0 * q.cosh()).ln()).abs() <= 1e-5, "q {q}");
    }
}

#[test]
fn derivative_checks_on_random_potentials() {
    let mut r = rng(63);
    for i in 0..20 {
        let sft = if i % 2 == 0 { Sft::full(2).unwrap() } else { Sft::golden_mean() };
        let f = random_potential(&mut r, &sft, 1 + i % 3);
        let q = r.gen_range(-3.0..3.0);
        let d = derivative_check(&f, q, 1e-4).unwrap();
        assert!(d.gap <= 1e-6, "q {q}: {d:?}");
    }
    assert!(matches!(derivative_check(&spin(), 0.0, 0.0), Err(Error::Domain(_))));
}

#[test]
fn spin_rate_function_against_binomial_rate() {
    let f = spin();
    let g = LocallyConstantPotential::constant(&Sft::full(2).unwrap(), -(2f64.ln())).unwrap();
    let xs = grid(-1.0, 1.0, 21);
    let rf = rate_function(&f, &g, &xs).unwrap();
    assert!(rf.minimizer.abs() <= 1e-12);
    for (x, i) in xs.iter().zip(&rf.values) {
        let expected = 2f64.ln() - h2((1.0 + x) / 2.0);
        assert!((i - expected).abs() <= 1e-6, "x {x}");
    }
    assert!(rf.values[10] <= 1e-8);
    let out = rate_function(&f, &g, &[-1.5, 1.5]).unwrap();
    assert!(out.values.iter().all(|&v| v == f64::INFINITY));
}

#[test]
fn rate_function_of_a_potential_against_itself() {
    // Averages of g under its own equilibrium state concentrate at ∫ g dμ_g.
    let mut r = rng(64);
    let g = random_potential(&mut r, &Sft::golden_mean(), 2);
    let mean = equilibrium_state(&g).unwrap().integrate(&g).unwrap();
    let rf = rate_function(&g, &g, &[mean]).unwrap();
    assert!((rf.minimizer - mean).abs() <= 1e-12);
    assert!(rf.values[0] <= 1e-8);
}

#[test]
fn spectrum_is_class_invariant() {
    let mut r = rng(65);
    let sft = Sft::full(2).unwrap();
    let f = random_potential(&mut r, &sft, 2);
    let h = random_potential(&mut r, &sft, 1);
    let g = f.add(&coboundary(&h).unwrap()).unwrap();
    let s0 = entropy_spectrum(&f, &[0.0]).unwrap();
    let alphas = grid(s0.alpha_min, s0.alpha_max, 11);
    let a = entropy_spectrum(&f, &alphas).unwrap();
    let b = entropy_spectrum(&g, &alphas).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() <= 1e-6);
    }
    assert!((pressure_additive(&f) - pressure_additive(&g)).abs() <= 1e-10);
}

#[test]
fn constant_potential_has_a_one_point_spectrum() {
    let f = LocallyConstantPotential::constant(&Sft::golden_mean(), 0.3).unwrap();
    let s = entropy_spectrum(&f, &[0.0, 0.3, 1.0]).unwrap();
    assert!(s.degenerate);
    assert_eq!(s.alpha, vec![0.3]);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((s.values[0] - phi.ln()).abs() <= 1e-10);
}

#[test]
fn endpoint_values_count_every_extremal_measure() {
    // Means of (1, 1, 0) peak at 1 on the full 2-shift over {0, 1}.
    let sft = Sft::full(3).unwrap();
    let f = LocallyConstantPotential::from_symbol_values(&sft, &[1.0, 1.0, 0.0]).unwrap();
    let s = entropy_spectrum(&f, &[0.0, 1.0]).unwrap();
    assert!(s.values[0].abs() <= 1e-12);
    assert!((s.values[1] - 2f64.ln()).abs() <= 1e-12);
    // Against the uniform measure the top costs log 3 - log 2.
    let g = LocallyConstantPotential::constant(&sft, -(3f64.ln())).unwrap();
    let rf = rate_function(&f, &g, &[0.0, 1.0]).unwrap();
    assert!((rf.values[0] - 3f64.ln()).abs() <= 1e-12);
    assert!((rf.values[1] - 1.5f64.ln()).abs() <= 1e-12);
}
