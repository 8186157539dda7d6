//! Monte Carlo comparison of averages of ratios (AoR) and ratios of averages
//! (RoA) for citations-per-publication data.
//!
//! Publication counts per researcher follow a truncated zeta law, citation
//! counts per publication follow an empirical frequency table. Each
//! replication simulates a cohort and records its AoR, RoA and the
//! correlation between ratios and publication counts. The [`stats`] and
//! [`fitting`] modules compare the resulting samples: percentile bootstrap
//! intervals, two-sample Kolmogorov–Smirnov tests and log-logistic
//! maximum-likelihood fits.

pub mod distributions;
pub mod engine;
mod error;
pub mod experiment;
pub mod fitting;
pub mod ingest;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
