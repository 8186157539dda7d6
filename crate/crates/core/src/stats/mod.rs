//! Nonparametric statistics over replication outputs.

mod bootstrap;
mod descriptive;
mod ks;

pub use bootstrap::{bootstrap_mean_diff_ci, BootstrapConfig, IntervalEstimate};
pub use descriptive::{ecdf, histogram, quantile, summary, Ecdf, HistogramBin, Summary};
pub use ks::{kolmogorov_q, ks_exact_p_value, ks_two_sample, KsResult, EXACT_P_MAX_CELLS};
