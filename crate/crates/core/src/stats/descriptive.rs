use crate::{Error, Result};

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    /// Distinct sample values, ascending.
    pub points: Vec<f64>,
    /// Fraction of the sample `<=` each point.
    pub heights: Vec<f64>,
}

impl Ecdf {
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.points.partition_point(|&p| p <= x);
        if i == 0 {
            0.0
        } else {
            self.heights[i - 1]
        }
    }
}

fn sorted(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(Error::Invalid("sample contains NaN".into()));
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

pub fn ecdf(sample: &[f64]) -> Result<Ecdf> {
    let v = sorted(sample)?;
    let n = v.len() as f64;
    let mut points = Vec::new();
    let mut heights = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        if i + 1 == v.len() || v[i + 1] != x {
            points.push(x);
            heights.push((i + 1) as f64 / n);
        }
    }
    Ok(Ecdf { points, heights })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
}

impl HistogramBin {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Equal-width bins spanning `[min, max]`; the last bin is closed on the right.
pub fn histogram(sample: &[f64], bin_count: usize) -> Result<Vec<HistogramBin>> {
    if bin_count == 0 {
        return Err(Error::Invalid("bin count must be at least 1".into()));
    }
    let v = sorted(sample)?;
    let (lo, hi) = (v[0], v[v.len() - 1]);
    let width = (hi - lo) / bin_count as f64;
    let mut bins: Vec<HistogramBin> = (0..bin_count)
        .map(|i| HistogramBin {
            left: lo + i as f64 * width,
            right: if i + 1 == bin_count { hi } else { lo + (i + 1) as f64 * width },
            count: 0,
        })
        .collect();
    for &x in &v {
        let idx = if width > 0.0 {
            (((x - lo) / width) as usize).min(bin_count - 1)
        } else {
            0
        };
        bins[idx].count += 1;
    }
    Ok(bins)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Unbiased (n − 1) variance; `None` for a single observation.
    pub variance: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

pub fn summary(sample: &[f64]) -> Result<Summary> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    let n = sample.len();
    let mean = sample.iter().sum::<f64>() / n as f64;
    let variance = (n > 1).then(|| {
        sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    });
    let min = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Summary { mean, variance, min, max, n })
}

/// Sample quantile with plotting position h = (n + 1)p, clamped to the data range.
///
/// With this convention the three points of an exact quartile triple are
/// returned unchanged for p = 0.25, 0.5, 0.75.
pub fn quantile(sorted_sample: &[f64], p: f64) -> f64 {
    let n = sorted_sample.len();
    let h = (n as f64 + 1.0) * p;
    if h <= 1.0 {
        return sorted_sample[0];
    }
    if h >= n as f64 {
        return sorted_sample[n - 1];
    }
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    sorted_sample[lo - 1] + frac * (sorted_sample[lo] - sorted_sample[lo - 1])
}
