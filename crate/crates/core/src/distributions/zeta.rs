use crate::{Error, Result};

use super::inverse_cdf_index;

/// Default publication-count cutoff.
pub const DEFAULT_TRUNCATION: usize = 5000;

const ZETA_TOL: f64 = 1e-10;

/// Riemann zeta function ζ(s) = Σ_{k≥1} k^(−s) for real `s > 1`.
///
/// The first `K` terms are summed directly. For the remaining terms of a
/// convex decreasing summand, the midpoint and trapezoid rules give
///
/// ∫_{K+1}^∞ f + f(K+1)/2  ≤  Σ_{k>K} f(k)  ≤  ∫_{K+½}^∞ f
///
/// and `K` is doubled until this bracket is narrower than 1e−10. The
/// bracket midpoint is returned.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0 + 1e-9) || !s.is_finite() {
        return Err(Error::domain(format!("zeta series diverges for s = {s}")));
    }
    let tail_integral = |from: f64| from.powf(1.0 - s) / (s - 1.0);
    let mut terms = 16usize;
    let (lo, hi) = loop {
        let k = terms as f64;
        let lo = tail_integral(k + 1.0) + 0.5 * (k + 1.0).powf(-s);
        let hi = tail_integral(k + 0.5);
        if hi - lo < ZETA_TOL || terms >= 1 << 24 {
            break (lo, hi);
        }
        terms *= 2;
    };
    // Smallest terms first.
    let head: f64 = (1..=terms).rev().map(|k| (k as f64).powf(-s)).sum();
    Ok(head + 0.5 * (lo + hi))
}

/// Mean ζ(γ−1)/ζ(γ) of the untruncated zeta law; finite only for γ > 2.
pub fn zeta_theoretical_mean(gamma: f64) -> Result<f64> {
    if !(gamma > 2.0) {
        return Err(Error::domain(format!(
            "zeta law has no finite mean for gamma = {gamma} (needs gamma > 2)"
        )));
    }
    Ok(riemann_zeta(gamma - 1.0)? / riemann_zeta(gamma)?)
}

/// Zeta law p(k) ∝ k^(−γ) restricted to `1..=k_max` and renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedZeta {
    gamma: f64,
    k_max: usize,
    pmf: Vec<f64>,
    cum: Vec<f64>,
}

impl TruncatedZeta {
    /// Builds p(k) = C·k^(−γ)/ζ(γ) with C = 1 / Σ_{j≤k_max} j^(−γ)/ζ(γ).
    pub fn new(gamma: f64, k_max: usize) -> Result<Self> {
        if k_max < 1 {
            return Err(Error::domain("truncation point must be at least 1"));
        }
        let zeta = riemann_zeta(gamma)?;
        let untruncated: Vec<f64> = (1..=k_max).map(|k| (k as f64).powf(-gamma) / zeta).collect();
        let mass: f64 = untruncated.iter().rev().sum();
        let c = 1.0 / mass;
        let pmf: Vec<f64> = untruncated.iter().map(|p| c * p).collect();

        let mut cum = Vec::with_capacity(k_max);
        let mut acc = 0.0;
        for p in &pmf {
            acc += p;
            cum.push(acc);
        }
        // Guard against rounding: the table must end at exactly 1.
        *cum.last_mut().unwrap() = 1.0;

        Ok(Self { gamma, k_max, pmf, cum })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// P(K = k); zero outside `1..=k_max`.
    pub fn pmf(&self, k: usize) -> f64 {
        if k == 0 || k > self.k_max {
            0.0
        } else {
            self.pmf[k - 1]
        }
    }

    /// P(K ≤ k).
    pub fn cdf(&self, k: usize) -> f64 {
        match k {
            0 => 0.0,
            k if k >= self.k_max => 1.0,
            k => self.cum[k - 1],
        }
    }

    /// Probabilities for `k = 1..=k_max`.
    pub fn pmf_table(&self) -> &[f64] {
        &self.pmf
    }

    pub fn cum_table(&self) -> &[f64] {
        &self.cum
    }

    pub fn mean(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .rev()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }

    /// Inverse-CDF sample for a uniform draw in `[0, 1)`.
    pub fn sample(&self, uniform_draw: f64) -> usize {
        inverse_cdf_index(&self.cum, uniform_draw) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    /// Independent oracle: 10^6 terms plus the plain integral bracket.
    fn zeta_oracle(s: f64) -> f64 {
        let n = 1_000_000u64;
        let head: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum();
        let lo = ((n + 1) as f64).powf(1.0 - s) / (s - 1.0);
        let hi = (n as f64).powf(1.0 - s) / (s - 1.0);
        head + 0.5 * (lo + hi)
    }

    #[test]
    fn zeta_closed_forms() {
        assert_abs_diff_eq!(riemann_zeta(2.0).unwrap(), PI * PI / 6.0, epsilon = 1e-10);
        assert_abs_diff_eq!(riemann_zeta(2.0).unwrap(), 1.6449340668, epsilon = 1e-9);
        assert_abs_diff_eq!(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0, epsilon = 1e-10);
    }

    #[test]
    fn zeta_three_matches_partial_sum_oracle() {
        let oracle = zeta_oracle(3.0);
        assert_abs_diff_eq!(oracle, 1.2020569032, epsilon = 1e-9);
        assert_abs_diff_eq!(riemann_zeta(3.0).unwrap(), oracle, epsilon = 1e-10);
        for s in [1.5, 2.5, 3.5, 4.5] {
            assert_abs_diff_eq!(riemann_zeta(s).unwrap(), zeta_oracle(s), epsilon = 1e-9);
        }
    }

    #[test]
    fn zeta_rejects_divergent_exponents() {
        for s in [1.0, 0.5, -2.0, f64::NAN, 1.0 + 1e-10] {
            assert!(matches!(riemann_zeta(s), Err(Error::Domain(_))), "s = {s}");
        }
    }

    #[test]
    fn truncated_pmf_at_one() {
        let direct: f64 = 1.0 / (1..=5000).rev().map(|j| (j as f64).powi(-3)).sum::<f64>();
        let z = TruncatedZeta::new(3.0, 5000).unwrap();
        assert_abs_diff_eq!(z.pmf(1), direct, epsilon = 1e-12);
        assert_abs_diff_eq!(z.pmf(1), 0.83190, epsilon = 1e-4);
        assert_eq!(TruncatedZeta::new(3.0, 1).unwrap().pmf(1), 1.0);
    }

    #[test]
    fn truncated_mean_close_to_theoretical() {
        let z = TruncatedZeta::new(3.0, 5000).unwrap();
        assert_abs_diff_eq!(z.mean(), 1.3683, epsilon = 5e-4);
        let theory = zeta_theoretical_mean(3.0).unwrap();
        assert_abs_diff_eq!(theory, 1.3684, epsilon = 5e-4);
        assert_abs_diff_eq!(z.mean(), theory, epsilon = 1e-3);
    }

    #[test]
    fn theoretical_mean_domain() {
        assert!(zeta_theoretical_mean(2.0).is_err());
        let expected = zeta_oracle(2.5) / zeta_oracle(3.5);
        assert_abs_diff_eq!(zeta_theoretical_mean(3.5).unwrap(), expected, epsilon = 1e-9);
    }

    #[test]
    fn construction_errors() {
        assert!(TruncatedZeta::new(1.0, 10).is_err());
        assert!(TruncatedZeta::new(3.0, 0).is_err());
    }

    #[test]
    fn table_invariants() {
        for gamma in [1.5, 2.0, 3.0, 3.5] {
            let z = TruncatedZeta::new(gamma, 5000).unwrap();
            let total: f64 = z.pmf_table().iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            assert!(z.pmf_table().windows(2).all(|w| w[1] < w[0]));
            assert!(z.cum_table().windows(2).all(|w| w[1] >= w[0]));
            assert_eq!(*z.cum_table().last().unwrap(), 1.0);
        }
    }

    #[test]
    fn sampler_thresholds() {
        let z = TruncatedZeta::new(3.0, 5000).unwrap();
        let c1 = z.cum_table()[0];
        assert_eq!(z.sample(0.0), 1);
        assert_eq!(z.sample(c1 - 1e-12), 1);
        assert_eq!(z.sample(c1 + 1e-12), 2);
        assert_eq!(z.sample(1.0 - f64::EPSILON), 5000);
    }
}
