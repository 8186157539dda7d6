//! Browser bindings: three interactive views over the ratiosim core.
//!
//! * [`simulate_cell`] runs one (γ, n) cell against the bundled synthetic
//!   citation law and returns histograms, ECDFs and log-logistic fits.
//! * [`zeta_profile`] shows the truncated zeta law behind publication counts.
//! * [`loglogistic_curves`] evaluates density and cdf for chosen α, β.
//!
//! The `*_view` functions hold the logic and are plain Rust so they can be
//! tested natively; the exported wrappers only translate errors.

use std::sync::Arc;

use ratiosim::distributions::{zeta_theoretical_mean, EmpiricalDiscrete, LogLogisticParams, TruncatedZeta};
use ratiosim::experiment::{run_cell, CellOutcome, SweepSettings, Which};
use ratiosim::stats::{ecdf, histogram};
use wasm_bindgen::prelude::*;

const CITATIONS: &str = include_str!("../../../fixtures/citations_synthetic.csv");
const HISTOGRAM_BINS: usize = 30;

fn citation_law() -> ratiosim::Result<EmpiricalDiscrete> {
    ratiosim::ingest::parse_citation_counts(CITATIONS.as_bytes())
}

/// Histogram plus fitted curve for one of the two replication samples.
#[wasm_bindgen]
#[derive(Debug, Clone, Default)]
pub struct SampleView {
    edges: Vec<f64>,
    counts: Vec<f64>,
    fitted_counts: Vec<f64>,
    ecdf_x: Vec<f64>,
    ecdf_y: Vec<f64>,
    fitted_cdf: Vec<f64>,
    alpha: f64,
    beta: f64,
    mean: f64,
}

#[wasm_bindgen]
impl SampleView {
    /// Bin edges, one more than the number of bins.
    #[wasm_bindgen(getter)]
    pub fn edges(&self) -> Vec<f64> {
        self.edges.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn counts(&self) -> Vec<f64> {
        self.counts.clone()
    }
    /// Fitted density at each bin center scaled to expected counts.
    #[wasm_bindgen(getter = fittedCounts)]
    pub fn fitted_counts(&self) -> Vec<f64> {
        self.fitted_counts.clone()
    }
    #[wasm_bindgen(getter = ecdfX)]
    pub fn ecdf_x(&self) -> Vec<f64> {
        self.ecdf_x.clone()
    }
    #[wasm_bindgen(getter = ecdfY)]
    pub fn ecdf_y(&self) -> Vec<f64> {
        self.ecdf_y.clone()
    }
    #[wasm_bindgen(getter = fittedCdf)]
    pub fn fitted_cdf(&self) -> Vec<f64> {
        self.fitted_cdf.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    #[wasm_bindgen(getter)]
    pub fn beta(&self) -> f64 {
        self.beta
    }
    #[wasm_bindgen(getter)]
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct CellView {
    aor: SampleView,
    roa: SampleView,
    ci_lower: f64,
    ci_upper: f64,
    ks_statistic: f64,
    ks_p_value: f64,
    mean_correlation: f64,
    aor_above_fraction: f64,
}

#[wasm_bindgen]
impl CellView {
    #[wasm_bindgen(getter)]
    pub fn aor(&self) -> SampleView {
        self.aor.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn roa(&self) -> SampleView {
        self.roa.clone()
    }
    #[wasm_bindgen(getter = ciLower)]
    pub fn ci_lower(&self) -> f64 {
        self.ci_lower
    }
    #[wasm_bindgen(getter = ciUpper)]
    pub fn ci_upper(&self) -> f64 {
        self.ci_upper
    }
    #[wasm_bindgen(getter = ksStatistic)]
    pub fn ks_statistic(&self) -> f64 {
        self.ks_statistic
    }
    #[wasm_bindgen(getter = ksPValue)]
    pub fn ks_p_value(&self) -> f64 {
        self.ks_p_value
    }
    /// NaN when every replication had an undefined correlation.
    #[wasm_bindgen(getter = meanCorrelation)]
    pub fn mean_correlation(&self) -> f64 {
        self.mean_correlation
    }
    #[wasm_bindgen(getter = aorAboveFraction)]
    pub fn aor_above_fraction(&self) -> f64 {
        self.aor_above_fraction
    }
}

fn sample_view(cell: &CellOutcome, which: Which) -> ratiosim::Result<SampleView> {
    let sample = cell.sample(which);
    let fit = cell.fit(which).expect("cells are run with fitting enabled");
    let bins = histogram(&sample, HISTOGRAM_BINS)?;
    let mut edges: Vec<f64> = bins.iter().map(|b| b.left).collect();
    edges.push(bins.last().map_or(0.0, |b| b.right));
    let fitted_counts = bins
        .iter()
        .map(|b| Ok(sample.len() as f64 * b.width() * fit.params.pdf(b.center().max(0.0))?))
        .collect::<ratiosim::Result<Vec<f64>>>()?;
    let e = ecdf(&sample)?;
    let fitted_cdf = e
        .points
        .iter()
        .map(|&x| fit.params.cdf(x.max(0.0)))
        .collect::<ratiosim::Result<Vec<f64>>>()?;
    Ok(SampleView {
        edges,
        counts: bins.iter().map(|b| b.count as f64).collect(),
        fitted_counts,
        ecdf_x: e.points,
        ecdf_y: e.heights,
        fitted_cdf,
        alpha: fit.params.alpha(),
        beta: fit.params.beta(),
        mean: sample.iter().sum::<f64>() / sample.len() as f64,
    })
}

pub fn cell_view(gamma: f64, n: usize, reps: usize, seed: u64) -> ratiosim::Result<CellView> {
    let mut settings = SweepSettings::new(Arc::new(citation_law()?), seed);
    settings.replications = reps;
    settings.fit = true;
    let cell = run_cell(&settings, gamma, n)?;
    Ok(CellView {
        aor: sample_view(&cell, Which::Aor)?,
        roa: sample_view(&cell, Which::Roa)?,
        ci_lower: cell.summary.ci.lower,
        ci_upper: cell.summary.ci.upper,
        ks_statistic: cell.summary.ks.statistic,
        ks_p_value: cell.summary.ks.p_value,
        mean_correlation: cell.correlation.map_or(f64::NAN, |c| c.mean),
        aor_above_fraction: cell.replications.fraction_aor_above(),
    })
}

/// Runs `reps` replications of a cohort of `n` researchers with zeta exponent `gamma`.
#[wasm_bindgen(js_name = simulateCell)]
pub fn simulate_cell(gamma: f64, n: usize, reps: usize, seed: u64) -> Result<CellView, JsError> {
    cell_view(gamma, n, reps, seed).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct ZetaView {
    pmf: Vec<f64>,
    truncated_mean: f64,
    theoretical_mean: f64,
}

#[wasm_bindgen]
impl ZetaView {
    /// P(k) for k = 1..=shown.
    #[wasm_bindgen(getter)]
    pub fn pmf(&self) -> Vec<f64> {
        self.pmf.clone()
    }
    #[wasm_bindgen(getter = truncatedMean)]
    pub fn truncated_mean(&self) -> f64 {
        self.truncated_mean
    }
    /// Infinity when gamma <= 2.
    #[wasm_bindgen(getter = theoreticalMean)]
    pub fn theoretical_mean(&self) -> f64 {
        self.theoretical_mean
    }
}

pub fn zeta_view(gamma: f64, k_max: usize, shown: usize) -> ratiosim::Result<ZetaView> {
    let z = TruncatedZeta::new(gamma, k_max)?;
    Ok(ZetaView {
        pmf: z.pmf_table().iter().take(shown).copied().collect(),
        truncated_mean: z.mean(),
        theoretical_mean: zeta_theoretical_mean(gamma).unwrap_or(f64::INFINITY),
    })
}

#[wasm_bindgen(js_name = zetaProfile)]
pub fn zeta_profile(gamma: f64, k_max: usize, shown: usize) -> Result<ZetaView, JsError> {
    zeta_view(gamma, k_max, shown).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct CurveView {
    x: Vec<f64>,
    pdf: Vec<f64>,
    cdf: Vec<f64>,
    mean: f64,
}

#[wasm_bindgen]
impl CurveView {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn pdf(&self) -> Vec<f64> {
        self.pdf.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn cdf(&self) -> Vec<f64> {
        self.cdf.clone()
    }
    /// Infinity when alpha <= 1.
    #[wasm_bindgen(getter)]
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

pub fn curve_view(alpha: f64, beta: f64, x_max: f64, points: usize) -> ratiosim::Result<CurveView> {
    let p = LogLogisticParams::new(alpha, beta)?;
    if !(x_max > 0.0) || points < 2 {
        return Err(ratiosim::Error::Invalid("need x_max > 0 and at least 2 points".into()));
    }
    let x: Vec<f64> = (0..points).map(|i| x_max * i as f64 / (points - 1) as f64).collect();
    Ok(CurveView {
        pdf: x.iter().map(|&v| p.pdf(v)).collect::<ratiosim::Result<_>>()?,
        cdf: x.iter().map(|&v| p.cdf(v)).collect::<ratiosim::Result<_>>()?,
        x,
        mean: p.mean().unwrap_or(f64::INFINITY),
    })
}

#[wasm_bindgen(js_name = loglogisticCurves)]
pub fn loglogistic_curves(alpha: f64, beta: f64, x_max: f64, points: usize) -> Result<CurveView, JsError> {
    curve_view(alpha, beta, x_max, points).map_err(|e| JsError::new(&e.to_string()))
}
