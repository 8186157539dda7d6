use crate::{Error, Result};

use super::inverse_cdf_index;

/// Discrete law estimated from a frequency table of nonnegative integer values.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDiscrete {
    values: Vec<u64>,
    counts: Vec<u64>,
    probs: Vec<f64>,
    cum: Vec<f64>,
    mean: f64,
}

impl EmpiricalDiscrete {
    /// Builds the law from `(value, count)` rows in any order.
    ///
    /// Probabilities are `count / total`. Rows must have distinct values and
    /// positive counts.
    pub fn from_counts(rows: &[(u64, u64)]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("frequency table has no rows"));
        }
        let mut rows = rows.to_vec();
        rows.sort_unstable_by_key(|r| r.0);
        for w in rows.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!("duplicate value {}", w[0].0)));
            }
        }
        if let Some(r) = rows.iter().find(|r| r.1 == 0) {
            return Err(Error::Invalid(format!("value {} has zero count", r.0)));
        }

        let total: u64 = rows
            .iter()
            .try_fold(0u64, |acc, r| acc.checked_add(r.1))
            .ok_or_else(|| Error::Invalid("total count overflows".into()))?;
        let total_f = total as f64;
        let (values, counts): (Vec<u64>, Vec<u64>) = rows.into_iter().unzip();
        let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total_f).collect();

        let mut cum = Vec::with_capacity(probs.len());
        let mut running = 0u64;
        for &c in &counts {
            running += c;
            cum.push(running as f64 / total_f);
        }
        let weighted: f64 = values.iter().zip(&counts).map(|(&v, &c)| v as f64 * c as f64).sum();

        Ok(Self {
            values,
            counts,
            probs,
            cum,
            mean: weighted / total_f,
        })
    }

    /// Point mass at `value`.
    pub fn point_mass(value: u64) -> Self {
        Self::from_counts(&[(value, 1)]).expect("single row is valid")
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cum(&self) -> &[f64] {
        &self.cum
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Probability of `value` (zero when absent).
    pub fn prob(&self, value: u64) -> f64 {
        self.values
            .binary_search(&value)
            .map(|i| self.probs[i])
            .unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.probs)
            .map(|(&v, p)| p * (v as f64 - self.mean).powi(2))
            .sum()
    }

    /// Inverse-CDF sample for a uniform draw in `[0, 1)`.
    pub fn sample(&self, uniform_draw: f64) -> u64 {
        self.values[inverse_cdf_index(&self.cum, uniform_draw)]
    }

    /// Same law with every value multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        let rows: Vec<(u64, u64)> = self
            .values
            .iter()
            .zip(&self.counts)
            .map(|(&v, &c)| (v * factor, c))
            .collect();
        Self::from_counts(&rows).expect("scaling by a positive factor keeps values distinct")
    }
}
