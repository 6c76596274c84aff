//! Entropy spectrum and rate function of the spin potential.

use nadd::potential::LocallyConstantPotential;
use nadd::shift::Sft;
use nadd::spectrum::{entropy_spectrum, rate_function};

fn main() -> nadd::Result<()> {
    let sft = Sft::full(2)?;
    let f = LocallyConstantPotential::from_symbol_values(&sft, &[1.0, -1.0])?;
    let uniform = LocallyConstantPotential::constant(&sft, -(2f64.ln()))?;
    let grid: Vec<f64> = (0..=8).map(|i| -1.0 + 0.25 * i as f64).collect();
    let e = entropy_spectrum(&f, &grid)?;
    let i = rate_function(&f, &uniform, &grid)?;
    println!("alpha      E(alpha)   I(alpha)");
    for ((a, ev), iv) in grid.iter().zip(&e.values).zip(&i.values) {
        println!("{a:6.2} {ev:10.6} {iv:10.6}");
    }
    Ok(())
}
