//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fails.

mod common;

use common::*;
use nadd::equivalence::{approximant, cauchy_table, construct_equivalent};
use nadd::linalg::Matrix;
use nadd::potential::{coboundary, quotient_distance, quotient_seminorm, seminorm_convergence_trace, LocallyConstantPotential};
use nadd::sequence::{almost_additivity_constant, asymptotic_defect, CylinderMeasure, MatrixCocycle, NormKind, PotentialSequence};
use nadd::shift::Sft;
use nadd::spectrum::{derivative_check, entropy_spectrum, rate_function};
use nadd::thermo::{
    equilibrium_state, gibbs_constants, pressure_additive, pressure_sequence, quasi_bernoulli_constants,
    variational_check, Thresholds,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn small_shifts() -> [(Sft, Vec<Vec<bool>>); 2] {
    [(Sft::full(2).unwrap(), full_rows(2)), (Sft::golden_mean(), golden_rows())]
}

fn cocycle() -> PotentialSequence {
    let blocks = vec![
        vec![vec![2.0, 1.0], vec![1.0, 1.0]],
        vec![vec![1.0, 1.0], vec![1.0, 2.0]],
    ];
    PotentialSequence::cocycle(
        &Sft::full(2).unwrap(),
        MatrixCocycle::from_rows(&blocks, NormKind::EntrySum).unwrap(),
    )
    .unwrap()
}

fn seminorm_oracle() -> Outcome {
    let mut r = rng(1001);
    let (mut worst, mut bound_violations) = (0.0f64, 0usize);
    for i in 0..100 {
        let (sft, rows) = &small_shifts()[i % 2];
        let depth = 1 + (i / 2) % 2;
        let f = random_potential(&mut r, sft, depth);
        let (lo, hi) = simple_cycle_means(rows, |w| f.get(w).unwrap(), depth);
        let t = seminorm_convergence_trace(&f, 32).map_err(|e| e.to_string())?;
        worst = worst.max((t.value - hi.max(-lo)).abs());
        bound_violations += t.trace.iter().filter(|&&(_, v)| v < t.value - 1e-12).count();
    }
    check(
        worst <= 1e-9 && bound_violations == 0,
        format!("max |Karp - cycle enumeration| = {worst:.2e}; averaged-norm bound violations for n <= 32: {bound_violations}"),
    )
}

fn additive_construction() -> Outcome {
    let mut r = rng(1002);
    let (mut tail, mut dist) = (0.0f64, 0.0f64);
    for i in 0..20 {
        let (sft, _) = &small_shifts()[i % 2];
        let f = random_potential(&mut r, sft, 1 + (i / 2) % 2);
        let cert = construct_equivalent(&PotentialSequence::additive(f.clone()), &[2, 4, 8], 16, 1e-9)
            .map_err(|e| e.to_string())?;
        tail = tail.max(cert.tail_bound);
        dist = dist.max(quotient_distance(&cert.representative, &f).map_err(|e| e.to_string())?);
    }
    check(
        tail <= 1e-9 && dist <= 1e-9,
        format!("max tail_bound = {tail:.2e}, max distance to input = {dist:.2e}"),
    )
}

fn cocycle_construction() -> Outcome {
    let seq = cocycle();
    let t = cauchy_table(&seq, &[2, 4, 8]).map_err(|e| e.to_string())?;
    let symmetric = (0..3).all(|i| t[i][i] == 0.0 && (0..3).all(|j| t[i][j] == t[j][i]));
    let triangle = (0..3).all(|i| (0..3).all(|j| (0..3).all(|l| t[i][j] <= t[i][l] + t[l][j] + 1e-12)));
    let decaying = t[0][1] > t[1][2];
    let d = asymptotic_defect(&seq, &approximant(&seq, 8).map_err(|e| e.to_string())?, &[4, 16])
        .map_err(|e| e.to_string())?;
    check(
        symmetric && triangle && decaying && d[1].delta < d[0].delta,
        format!(
            "d(2,4) = {:.4e}, d(4,8) = {:.4e}, symmetric {symmetric}, triangle {triangle}; delta_4 = {:.4e}, delta_16 = {:.4e}",
            t[0][1], t[1][2], d[0].delta, d[1].delta
        ),
    )
}

fn closed_form_pressure() -> Outcome {
    let full = Sft::full(2).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut err = (pressure_additive(&LocallyConstantPotential::constant(&full, 0.0).unwrap()) - 2f64.ln()).abs();
    err = err.max(
        (pressure_additive(&LocallyConstantPotential::constant(&Sft::golden_mean(), 0.0).unwrap()) - phi.ln())
            .abs(),
    );
    for (a, b) in [(0.5, -0.25), (-1.0, 2.0), (3.0, 3.0)] {
        let f = LocallyConstantPotential::from_symbol_values(&full, &[a, b]).unwrap();
        err = err.max((pressure_additive(&f) - (f64::exp(a) + f64::exp(b)).ln()).abs());
    }
    let seq = cocycle();
    let c = almost_additivity_constant(&seq, 12, 1e-9).map_err(|e| e.to_string())?.c_estimate;
    let est = pressure_sequence(&seq, 12, Some(c)).map_err(|e| e.to_string())?;
    let (lo, hi) = est.enclosure.ok_or("no enclosure produced")?;
    let target = 5f64.ln();
    check(
        err <= 1e-10 && lo <= target && target <= hi && hi - lo <= 2.0 * c / 12.0,
        format!("max closed-form error = {err:.2e}; enclosure [{lo:.6}, {hi:.6}] vs log 5 = {target:.6}, width {:.4} <= {:.4}", hi - lo, 2.0 * c / 12.0),
    )
}

fn variational_principle() -> Outcome {
    let mut r = rng(1005);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let a = 2 + r.gen_range(0..2usize);
        let (sft, _) = random_primitive(&mut r, a);
        let f = random_potential(&mut r, &sft, 1 + i % 3);
        worst = worst.max(variational_check(&f).map_err(|e| e.to_string())?.residual);
    }
    check(worst <= 1e-8, format!("max residual over 100 potentials = {worst:.2e}"))
}

fn quasi_bernoulli_gibbs() -> Outcome {
    let sft = Sft::full(2).unwrap();
    let hmm = [[[0.5, 0.2], [0.1, 0.3]], [[0.2, 0.1], [0.3, 0.3]]];
    let mats = hmm
        .iter()
        .map(|m| Matrix::from_rows(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap())
        .collect();
    let mu = CylinderMeasure::hidden_markov_stationary(&sft, mats).map_err(|e| e.to_string())?;
    let qb = quasi_bernoulli_constants(&mu, 12, Thresholds::QUASI_BERNOULLI).map_err(|e| e.to_string())?;
    let d_finite = qb.rows.iter().all(|r| r.d_n.is_finite());
    let cert = construct_equivalent(&PotentialSequence::measure_log(mu.clone()), &[2, 4, 8], 16, 1e-2)
        .map_err(|e| e.to_string())?;
    let g = gibbs_constants(&mu, &PotentialSequence::additive(cert.representative), 0.0, 14, Thresholds::GIBBS)
        .map_err(|e| e.to_string())?;
    let (t7, t14) = (g.rows[6].trend, g.rows[13].trend);
    let mut bern = 0.0f64;
    for probs in [[0.5, 0.5], [0.2, 0.8]] {
        let b = CylinderMeasure::bernoulli(&sft, &probs).map_err(|e| e.to_string())?;
        let gb = gibbs_constants(&b, &PotentialSequence::measure_log(b.clone()), 0.0, 14, Thresholds::GIBBS)
            .map_err(|e| e.to_string())?;
        bern = bern.max(gb.rows.iter().fold(0.0f64, |m, r| m.max((r.k_n - 1.0).abs())));
    }
    check(
        d_finite && t14 < 0.5 * t7 && bern <= 1e-9,
        format!(
            "D_n finite for n <= 12: {d_finite}; (1/n) log K_n: n=7 {t7:.4e}, n=14 {t14:.4e}, ratio {:.3} (needs < 0.5); Bernoulli max |K_n - 1| = {bern:.2e}",
            t14 / t7
        ),
    )
}

fn spectrum_and_ldp() -> Outcome {
    let sft = Sft::full(2).unwrap();
    let f = LocallyConstantPotential::from_symbol_values(&sft, &[1.0, -1.0]).unwrap();
    let alphas: Vec<f64> = (0..41).map(|i| -1.0 + i as f64 / 20.0).collect();
    let s = entropy_spectrum(&f, &alphas).map_err(|e| e.to_string())?;
    let e0 = (s.values[20] - 2f64.ln()).abs();
    let ends = s.values[0].max(s.values[40]);
    let concave = s.values.windows(3).all(|w| w[1] >= 0.5 * (w[0] + w[2]) - 1e-12);
    let g = LocallyConstantPotential::constant(&sft, -(2f64.ln())).unwrap();
    let rf = rate_function(&f, &g, &[-1.0, 0.0, 1.0]).map_err(|e| e.to_string())?;
    let i0 = rf.values[1];
    let i1 = (rf.values[0] - 2f64.ln()).abs().max((rf.values[2] - 2f64.ln()).abs());
    let mut r = rng(1007);
    let mut gap = 0.0f64;
    for i in 0..20 {
        let (sh, _) = &small_shifts()[i % 2];
        let p = random_potential(&mut r, sh, 1 + i % 2);
        let q = r.gen_range(-3.0..3.0);
        gap = gap.max(derivative_check(&p, q, 1e-4).map_err(|e| e.to_string())?.gap);
    }
    check(
        e0 <= 1e-8 && ends <= 1e-6 && concave && i0 <= 1e-8 && i1 <= 1e-6 && gap <= 1e-6,
        format!("|E(0) - log 2| = {e0:.2e}, max E(+-1) = {ends:.2e}, concave {concave}; I(0) = {i0:.2e}, max |I(+-1) - log 2| = {i1:.2e}; max derivative gap = {gap:.2e}"),
    )
}

fn class_invariance() -> Outcome {
    let mut r = rng(1008);
    let (mut sem, mut pre, mut spec, mut gibbs_log) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut verdicts_equal = true;
    for i in 0..10 {
        let (sft, _) = &small_shifts()[i % 2];
        let f = random_potential(&mut r, sft, 2);
        let h = random_potential(&mut r, sft, 1 + i % 2);
        let g = f.add(&coboundary(&h).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let sv = |p: &LocallyConstantPotential| quotient_seminorm(p).map(|s| s.value).map_err(|e| e.to_string());
        sem = sem.max((sv(&f)? - sv(&g)?).abs());
        pre = pre.max((pressure_additive(&f) - pressure_additive(&g)).abs());
        let range = entropy_spectrum(&f, &[0.0]).map_err(|e| e.to_string())?;
        let alphas: Vec<f64> = (0..9)
            .map(|j| range.alpha_min + (range.alpha_max - range.alpha_min) * j as f64 / 8.0)
            .collect();
        let ef = entropy_spectrum(&f, &alphas).map_err(|e| e.to_string())?;
        let eg = entropy_spectrum(&g, &alphas).map_err(|e| e.to_string())?;
        for (a, b) in ef.values.iter().zip(&eg.values) {
            spec = spec.max((a - b).abs());
        }
        // Gibbs constants against the equilibrium state of f.
        let mu = equilibrium_state(&f)
            .and_then(|m| m.to_cylinder_measure())
            .map_err(|e| e.to_string())?;
        let p = pressure_additive(&f);
        let kf = gibbs_constants(&mu, &PotentialSequence::additive(f), p, 10, Thresholds::GIBBS)
            .map_err(|e| e.to_string())?;
        let kg = gibbs_constants(&mu, &PotentialSequence::additive(g), p, 10, Thresholds::GIBBS)
            .map_err(|e| e.to_string())?;
        verdicts_equal &= kf.verdict == kg.verdict;
        let bound = 2.0 * h.sup_norm();
        for (a, b) in kf.rows.iter().zip(&kg.rows) {
            gibbs_log = gibbs_log.max((a.log_k_n - b.log_k_n).abs() - bound);
        }
    }
    check(
        sem <= 1e-9 && pre <= 1e-10 && spec <= 1e-6 && verdicts_equal && gibbs_log <= 1e-10,
        format!("max change: seminorm {sem:.2e}, pressure {pre:.2e}, spectrum {spec:.2e}; Gibbs verdicts equal {verdicts_equal}; log K_n excess over 2|h| = {gibbs_log:.2e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("seminorm oracle", seminorm_oracle),
        ("additive construction", additive_construction),
        ("cocycle construction", cocycle_construction),
        ("closed-form pressure", closed_form_pressure),
        ("variational principle", variational_principle),
        ("quasi-Bernoulli implies weak Gibbs", quasi_bernoulli_gibbs),
        ("spectrum and large deviations", spectrum_and_ldp),
        ("class invariance", class_invariance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
