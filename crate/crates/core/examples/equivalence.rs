//! Locally constant representative of a matrix-cocycle sequence.

use nadd::equivalence::construct_equivalent;
use nadd::sequence::{MatrixCocycle, NormKind, PotentialSequence};
use nadd::shift::Sft;

fn main() -> nadd::Result<()> {
    let blocks = vec![
        vec![vec![2.0, 1.0], vec![1.0, 1.0]],
        vec![vec![1.0, 1.0], vec![1.0, 2.0]],
    ];
    let seq = PotentialSequence::cocycle(
        &Sft::full(2)?,
        MatrixCocycle::from_rows(&blocks, NormKind::EntrySum)?,
    )?;
    let cert = construct_equivalent(&seq, &[2, 4, 8], 16, 0.1)?;
    println!("representative {:?} at k = {}", cert.representative_kind, cert.k_star);
    for row in &cert.cauchy_table {
        println!("  {row:.4?}");
    }
    println!("tail bound {:.4} (met: {})", cert.tail_bound, cert.tolerance_met);
    Ok(())
}
