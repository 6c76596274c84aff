//! Quotient seminorm of a golden-mean potential and its extremal orbits.

use nadd::potential::{seminorm_convergence_trace, LocallyConstantPotential};
use nadd::shift::Sft;

fn main() -> nadd::Result<()> {
    let sft = Sft::golden_mean();
    // Values on the admissible 2-words 00, 01, 10.
    let f = LocallyConstantPotential::from_values(&sft, 2, vec![0.5, -1.0, 1.0])?;
    let r = seminorm_convergence_trace(&f, 16)?;
    println!("seminorm {:.6}", r.value);
    println!("invariant averages in [{:.6}, {:.6}]", r.min_mean, r.max_mean);
    println!("max on {}, min on {}", r.max_witness, r.min_witness);
    for (n, v) in r.trace.iter().step_by(5) {
        println!("n = {n:2}: (1/n)|S_n f| = {v:.6}");
    }
    Ok(())
}
