use std::f64::consts::PI;

use crate::{Error, Result};

/// Largest `n1 * n2` for which the exact lattice-path p-value is computed.
pub const EXACT_P_MAX_CELLS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// sup |F₁ − F₂| over the pooled sample.
    pub statistic: f64,
    /// Asymptotic p-value with the small-sample correction of the argument.
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Kolmogorov survival function Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²λ²}.
///
/// For λ < 1.18 the equivalent theta-function form
/// 1 − (√(2π)/λ) Σ_{j≥1} e^{−(2j−1)²π²/(8λ²)} is summed instead, since the
/// alternating series converges slowly there. Terms are added until they
/// drop below 1e−12.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        let k = PI * PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for j in 1.. {
            let odd = (2 * j - 1) as f64;
            let term = (-odd * odd * k).exp();
            sum += term;
            if term < 1e-12 {
                break;
            }
        }
        1.0 - (2.0 * PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1.. {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += sign * term;
            sign = -sign;
            if term < 1e-12 {
                break;
            }
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

/// max_t |i(t)·n2 − j(t)·n1| over the pooled sorted values, where i(t), j(t)
/// count the observations `<= t` in each sample. Ties are passed as a block.
fn statistic_numerator(x: &[f64], y: &[f64]) -> u64 {
    let (n1, n2) = (x.len() as i64, y.len() as i64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0i64;
    while i < x.len() || j < y.len() {
        let t = match (x.get(i), y.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        best = best.max((i as i64 * n2 - j as i64 * n1).abs());
    }
    best as u64
}

fn sorted_copy(s: &[f64]) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Err(Error::Empty("KS sample"));
    }
    if s.iter().any(|v| v.is_nan()) {
        return Err(Error::Invalid("KS sample contains NaN".into()));
    }
    let mut v = s.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<KsResult> {
    let xs = sorted_copy(x)?;
    let ys = sorted_copy(y)?;
    let (n1, n2) = (xs.len(), ys.len());
    let d = statistic_numerator(&xs, &ys) as f64 / (n1 as f64 * n2 as f64);
    let ne = (n1 as f64 * n2 as f64) / (n1 + n2) as f64;
    let sq = ne.sqrt();
    let lambda = (sq + 0.12 + 0.11 / sq) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_q(lambda),
        n1,
        n2,
    })
}

/// Exact P(D ≥ d_observed) under the permutation null for continuous data,
/// by counting monotone lattice paths that stay strictly inside the band.
///
/// Only computed when `n1 * n2 <= EXACT_P_MAX_CELLS`. With ties in the pooled
/// sample the result is the continuous-data reference value.
pub fn ks_exact_p_value(x: &[f64], y: &[f64]) -> Result<f64> {
    let xs = sorted_copy(x)?;
    let ys = sorted_copy(y)?;
    let (n1, n2) = (xs.len(), ys.len());
    if n1 * n2 > EXACT_P_MAX_CELLS {
        return Err(Error::Invalid(format!(
            "exact KS p-value limited to n1*n2 <= {EXACT_P_MAX_CELLS}, got {}",
            n1 * n2
        )));
    }
    let d = statistic_numerator(&xs, &ys) as i64;
    if d == 0 {
        return Ok(1.0);
    }
    let inside = |i: usize, j: usize| (i as i64 * n2 as i64 - j as i64 * n1 as i64).abs() < d;

    // paths[j] holds the number of admissible paths reaching (i, j).
    let mut paths = vec![0.0f64; n2 + 1];
    paths[0] = 1.0;
    for j in 1..=n2 {
        paths[j] = if inside(0, j) { paths[j - 1] } else { 0.0 };
    }
    for i in 1..=n1 {
        paths[0] = if inside(i, 0) { paths[0] } else { 0.0 };
        for j in 1..=n2 {
            paths[j] = if inside(i, j) { paths[j] + paths[j - 1] } else { 0.0 };
        }
    }
    let total = binomial(n1 + n2, n1);
    Ok((1.0 - paths[n2] / total).clamp(0.0, 1.0))
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
