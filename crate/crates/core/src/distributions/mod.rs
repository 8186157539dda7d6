//! Probability laws used by the simulation.
//!
//! Samplers take the uniform draw as an argument, so every object here is
//! immutable after construction and can be shared across threads freely.

mod empirical;
mod loglogistic;
mod zeta;

pub use empirical::EmpiricalDiscrete;
pub use loglogistic::{LogLogisticParams, LogisticForm, ParetoRatioParams};
pub use zeta::{riemann_zeta, zeta_theoretical_mean, TruncatedZeta, DEFAULT_TRUNCATION};

/// Index of the first cumulative entry strictly greater than `u`.
///
/// `cum` must be nondecreasing and end at 1; `u` in `[0, 1)`.
pub(crate) fn inverse_cdf_index(cum: &[f64], u: f64) -> usize {
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}
