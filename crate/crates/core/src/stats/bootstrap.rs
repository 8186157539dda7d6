use rand::Rng;

use super::descriptive::quantile;
use crate::rng::stream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub confidence: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            resamples: 500,
            confidence: 0.95,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Full-sample mean(AoR) − mean(RoA).
    pub point: f64,
    pub confidence: f64,
}

impl IntervalEstimate {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

fn mean_diff<'a>(pairs: impl Iterator<Item = &'a (f64, f64)>) -> f64 {
    let (mut sa, mut sr, mut n) = (0.0, 0.0, 0usize);
    for (a, r) in pairs {
        sa += a;
        sr += r;
        n += 1;
    }
    (sa - sr) / n as f64
}

/// Percentile bootstrap interval for mean(AoR) − mean(RoA).
///
/// Pairs are resampled jointly so each resample keeps the AoR/RoA coupling of
/// its replications. The interval bounds are the `(1 ∓ confidence)/2`
/// quantiles of the resampled differences.
pub fn bootstrap_mean_diff_ci(pairs: &[(f64, f64)], cfg: &BootstrapConfig) -> Result<IntervalEstimate> {
    if pairs.len() < 2 {
        return Err(Error::Invalid(format!(
            "bootstrap needs at least 2 pairs, got {}",
            pairs.len()
        )));
    }
    if cfg.resamples < 1 {
        return Err(Error::Invalid("bootstrap needs at least one resample".into()));
    }
    if !(cfg.confidence > 0.0 && cfg.confidence < 1.0) {
        return Err(Error::Invalid(format!(
            "confidence must lie in (0, 1), got {}",
            cfg.confidence
        )));
    }

    let n = pairs.len();
    let mut rng = stream(cfg.seed);
    let mut stats: Vec<f64> = (0..cfg.resamples)
        .map(|_| mean_diff((0..n).map(|_| &pairs[rng.gen_range(0..n)])))
        .collect();
    stats.sort_by(f64::total_cmp);

    let tail = 0.5 * (1.0 - cfg.confidence);
    Ok(IntervalEstimate {
        lower: quantile(&stats, tail),
        upper: quantile(&stats, 1.0 - tail),
        point: mean_diff(pairs.iter()),
        confidence: cfg.confidence,
    })
}
