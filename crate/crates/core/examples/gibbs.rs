//! Gibbs constants of a hidden-Markov measure against its own log-probabilities.

use nadd::linalg::Matrix;
use nadd::sequence::{CylinderMeasure, PotentialSequence};
use nadd::shift::Sft;
use nadd::thermo::{gibbs_constants, quasi_bernoulli_constants, Thresholds};

fn main() -> nadd::Result<()> {
    let sft = Sft::full(2)?;
    let rows = |r: [[f64; 2]; 2]| Matrix::from_rows(&r.map(|x| x.to_vec())).expect("square");
    let mu = CylinderMeasure::hidden_markov_stationary(
        &sft,
        vec![rows([[0.5, 0.2], [0.1, 0.3]]), rows([[0.2, 0.1], [0.3, 0.3]])],
    )?;
    let g = gibbs_constants(&mu, &PotentialSequence::measure_log(mu.clone()), 0.0, 10, Thresholds::GIBBS)?;
    println!("Gibbs verdict {:?}", g.verdict);
    let qb = quasi_bernoulli_constants(&mu, 10, Thresholds::QUASI_BERNOULLI)?;
    println!("coupling verdict {:?}", qb.verdict);
    Ok(())
}
