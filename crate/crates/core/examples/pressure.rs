//! Pressure of a potential and of a cocycle sequence, with its enclosure.

use nadd::potential::LocallyConstantPotential;
use nadd::sequence::{almost_additivity_constant, MatrixCocycle, NormKind, PotentialSequence};
use nadd::shift::Sft;
use nadd::thermo::{pressure_additive, pressure_sequence, variational_check};

fn main() -> nadd::Result<()> {
    let sft = Sft::full(2)?;
    let f = LocallyConstantPotential::from_symbol_values(&sft, &[0.5, -0.25])?;
    println!("P(f) = {:.12}", pressure_additive(&f));
    println!("variational residual {:.2e}", variational_check(&f)?.residual);

    let blocks = vec![
        vec![vec![2.0, 1.0], vec![1.0, 1.0]],
        vec![vec![1.0, 1.0], vec![1.0, 2.0]],
    ];
    let seq = PotentialSequence::cocycle(&sft, MatrixCocycle::from_rows(&blocks, NormKind::EntrySum)?)?;
    let c = almost_additivity_constant(&seq, 12, 1e-9)?.c_estimate;
    let est = pressure_sequence(&seq, 12, Some(c))?;
    println!("cocycle pressure at n = 12: {:.6}", est.point);
    if let Some((lo, hi)) = est.enclosure {
        println!("enclosure [{lo:.6}, {hi:.6}] around log 5 = {:.6}", 5f64.ln());
    }
    Ok(())
}
