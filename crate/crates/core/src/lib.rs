pub mod cli;
pub mod equivalence;
pub mod error;
pub mod linalg;
pub mod mmc;
pub mod potential;
pub mod sequence;
pub mod shift;
pub mod spectrum;
pub mod thermo;

pub use error::{Error, Result};
