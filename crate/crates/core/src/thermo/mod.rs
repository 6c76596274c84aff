//! Pressure, equilibrium states, Lyapunov exponents and Gibbs-type
//! constants on subshifts of finite type.

pub mod gibbs;
pub mod markov;
pub mod pressure;

pub use gibbs::{
    gibbs_constants, quasi_bernoulli_constants, GibbsReport, GibbsRow, GibbsVerdict,
    QuasiBernoulliReport, QuasiBernoulliRow, QuasiBernoulliVerdict, Thresholds,
};
pub use markov::MarkovMeasure;
pub use pressure::{
    entropy, equilibrium_state, lyapunov_exponent, pressure_additive, pressure_sequence,
    variational_check, LyapunovEstimate, PressureEstimate, PressureRow, TransferMatrix,
    VariationalReport, FINITE_HORIZON_WARNING,
};
