mod common;

use common::*;
use nadd::potential::{
    birkhoff_extrema, coboundary, invariant_average_range, quotient_distance, quotient_seminorm,
    seminorm_convergence_trace, LocallyConstantPotential,
};
use nadd::shift::Sft;
use proptest::prelude::*;

fn shifts() -> Vec<(Sft, Vec<Vec<bool>>)> {
    vec![
        (Sft::full(2).unwrap(), full_rows(2)),
        (Sft::golden_mean(), golden_rows()),
        (Sft::full(3).unwrap(), full_rows(3)),
    ]
}

#[test]
fn karp_matches_simple_cycle_enumeration() {
    let mut r = rng(21);
    for (sft, rows) in shifts() {
        for depth in 1..=3 {
            for _ in 0..15 {
                let f = random_potential(&mut r, &sft, depth);
                let (lo, hi) = simple_cycle_means(&rows, |w| f.get(w).unwrap(), depth);
                let s = quotient_seminorm(&f).unwrap();
                assert!((s.max_mean - hi).abs() <= 1e-12, "{} vs {hi}", s.max_mean);
                assert!((s.min_mean - lo).abs() <= 1e-12, "{} vs {lo}", s.min_mean);
                assert!((s.value - hi.max(-lo)).abs() <= 1e-12);
                assert_eq!(invariant_average_range(&f).unwrap(), (s.min_mean, s.max_mean));
            }
        }
    }
}

#[test]
fn witnesses_attain_the_extreme_means() {
    let mut r = rng(22);
    for (sft, _) in shifts() {
        let f = random_potential(&mut r, &sft, 2);
        let s = quotient_seminorm(&f).unwrap();
        for (orbit, target) in [(&s.max_witness, s.max_mean), (&s.min_witness, s.min_mean)] {
            let c = orbit.cycle().to_vec();
            let p = c.len();
            // p windows of length 2 around the cycle.
            let looped: Vec<u8> = c.iter().chain(c.iter()).copied().take(p + 1).collect();
            let mean = looped.windows(2).map(|w| f.get(w).unwrap()).sum::<f64>() / p as f64;
            assert!((mean - target).abs() <= 1e-12);
        }
    }
}

#[test]
fn birkhoff_extrema_match_brute_force() {
    let mut r = rng(23);
    for (sft, rows) in shifts() {
        for depth in 1..=2 {
            let f = random_potential(&mut r, &sft, depth);
            for n in [1, 2, 5, 9] {
                let e = birkhoff_extrema(&f, n).unwrap();
                let (lo, hi) = brute_birkhoff(&rows, |w| f.get(w).unwrap(), depth, n);
                assert!((e.min_value - lo).abs() <= 1e-12 && (e.max_value - hi).abs() <= 1e-12);
                assert!((f.birkhoff_sum(&e.argmax_word, n).unwrap() - hi).abs() <= 1e-12);
                assert!((f.birkhoff_sum(&e.argmin_word, n).unwrap() - lo).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn averaged_sup_norm_bounds_the_seminorm_and_decreases_towards_it() {
    let mut r = rng(24);
    for (sft, _) in shifts() {
        for _ in 0..10 {
            let f = random_potential(&mut r, &sft, 2);
            let t = seminorm_convergence_trace(&f, 256).unwrap();
            for &(_, v) in &t.trace {
                assert!(v >= t.value - 1e-12);
            }
            assert!(t.trace[255].1 <= t.trace[15].1 + 1e-12);
            // The n-th entry exceeds the seminorm by at most 2‖f‖∞(k-1)/n + O(1/n).
            assert!(t.gap <= 4.0 * f.sup_norm() * 2.0 / 256.0 + 1e-9);
        }
    }
}

#[test]
fn golden_mean_seminorm_of_indicator() {
    // f = 1 on symbol 0: means range over [1/2, 1] since 11 is forbidden.
    let f = LocallyConstantPotential::from_symbol_values(&Sft::golden_mean(), &[1.0, 0.0]).unwrap();
    let s = quotient_seminorm(&f).unwrap();
    assert_eq!((s.min_mean, s.max_mean, s.value), (0.5, 1.0, 1.0));
}

#[test]
fn coboundaries_have_zero_seminorm() {
    let mut r = rng(25);
    for (sft, _) in shifts() {
        for depth in 1..=3 {
            let h = random_potential(&mut r, &sft, depth);
            let c = coboundary(&h).unwrap();
            assert!(quotient_seminorm(&c).unwrap().value <= 1e-12);
        }
    }
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, f64)> {
    (
        prop::collection::vec(-2.0f64..2.0, 4),
        prop::collection::vec(-2.0f64..2.0, 4),
        prop::collection::vec(-2.0f64..2.0, 2),
        -3.0f64..3.0,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seminorm_is_a_class_invariant_seminorm((fv, gv, hv, c) in pair()) {
        let sft = Sft::full(2).unwrap();
        let f = LocallyConstantPotential::from_values(&sft, 2, fv).unwrap();
        let g = LocallyConstantPotential::from_values(&sft, 2, gv).unwrap();
        let h = LocallyConstantPotential::from_values(&sft, 1, hv).unwrap();
        let s = |p: &LocallyConstantPotential| quotient_seminorm(p).unwrap().value;
        let shifted = f.add(&coboundary(&h).unwrap()).unwrap();
        prop_assert!((s(&shifted) - s(&f)).abs() <= 1e-12);
        prop_assert!(quotient_distance(&f, &shifted).unwrap() <= 1e-12);
        prop_assert!((s(&f.scale(c)) - c.abs() * s(&f)).abs() <= 1e-12);
        prop_assert!(s(&f.add(&g).unwrap()) <= s(&f) + s(&g) + 1e-12);
    }

    #[test]
    fn birkhoff_average_is_equivalent_to_the_potential(
        fv in prop::collection::vec(-2.0f64..2.0, 3), n in 1usize..6,
    ) {
        // Golden-mean 2-words: 00, 01, 10.
        let sft = Sft::golden_mean();
        let f = LocallyConstantPotential::from_values(&sft, 2, fv).unwrap();
        let avg = f.birkhoff_average(n).unwrap();
        prop_assert_eq!(avg.depth(), n + 1);
        prop_assert!(quotient_distance(&avg, &f).unwrap() <= 1e-12);
    }
}
