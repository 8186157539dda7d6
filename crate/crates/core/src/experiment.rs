//! One experiment cell end to end: replications, bootstrap interval, KS test,
//! correlation summary, log-logistic fits, and their text renderings.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::distributions::{EmpiricalDiscrete, DEFAULT_TRUNCATION};
use crate::engine::{run_replications, ExperimentConfig, ReplicationSet};
use crate::fitting::{fit_loglogistic, FitOptions, FitResult};
use crate::ingest::RankedCountry;
use crate::rng::derive_seed;
use crate::stats::{
    bootstrap_mean_diff_ci, ecdf, histogram, ks_two_sample, summary, BootstrapConfig,
    IntervalEstimate, KsResult,
};
use crate::{Error, Result};

const REPLICATION_STREAM: u64 = 1;
const BOOTSTRAP_STREAM: u64 = 2;

/// Settings shared by every cell of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub replications: usize,
    pub bootstrap_resamples: usize,
    pub confidence: f64,
    pub truncation: usize,
    pub seed: u64,
    pub citation_law: Arc<EmpiricalDiscrete>,
    pub fit: bool,
    pub fit_options: FitOptions,
}

impl SweepSettings {
    pub fn new(citation_law: Arc<EmpiricalDiscrete>, seed: u64) -> Self {
        Self {
            replications: 1000,
            bootstrap_resamples: 500,
            confidence: 0.95,
            truncation: DEFAULT_TRUNCATION,
            seed,
            citation_law,
            fit: false,
            fit_options: FitOptions::default(),
        }
    }
}

/// Seeds of the replication and bootstrap streams of cell (γ, n).
///
/// They depend on the cell coordinates rather than its position in a sweep,
/// so a cell reproduces identically whatever else is requested with it.
pub fn cell_seeds(master: u64, gamma: f64, n: usize) -> (u64, u64) {
    let coords = [gamma.to_bits(), n as u64];
    (
        derive_seed(master, &[coords[0], coords[1], REPLICATION_STREAM]),
        derive_seed(master, &[coords[0], coords[1], BOOTSTRAP_STREAM]),
    )
}

/// One row of the AoR/RoA comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentSummary {
    pub gamma: f64,
    pub n: usize,
    pub mean_aor: f64,
    pub mean_roa: f64,
    pub ci: IntervalEstimate,
    pub ks: KsResult,
}

/// Distribution of the per-replication ratio/publications correlations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSummary {
    pub gamma: f64,
    pub n: usize,
    pub mean: f64,
    pub variance: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub defined: usize,
    /// Replications skipped because ratios or publication counts were constant.
    pub undefined: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Aor,
    Roa,
}

impl Which {
    pub fn label(self) -> &'static str {
        match self {
            Which::Aor => "aor",
            Which::Roa => "roa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReport {
    pub which: Which,
    pub result: FitResult,
    /// Zero values removed before fitting (outside the log-logistic support).
    pub dropped_zeros: usize,
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub summary: ExperimentSummary,
    pub replications: ReplicationSet,
    pub correlation: Option<CorrelationSummary>,
    pub fits: Vec<FitReport>,
}

impl CellOutcome {
    pub fn fit(&self, which: Which) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.which == which).map(|f| &f.result)
    }

    pub fn sample(&self, which: Which) -> Vec<f64> {
        match which {
            Which::Aor => self.replications.aor(),
            Which::Roa => self.replications.roa(),
        }
    }
}

pub fn summarize_correlations(set: &ReplicationSet) -> Option<CorrelationSummary> {
    let (values, undefined) = set.correlations();
    let s = summary(&values).ok()?;
    Some(CorrelationSummary {
        gamma: set.config.gamma,
        n: set.config.n_researchers,
        mean: s.mean,
        variance: s.variance,
        min: s.min,
        max: s.max,
        defined: values.len(),
        undefined,
    })
}

fn fit_positive(which: Which, sample: &[f64], opts: &FitOptions) -> Result<FitReport> {
    let positive: Vec<f64> = sample.iter().copied().filter(|&x| x > 0.0).collect();
    let result = fit_loglogistic(&positive, opts).map_err(|e| {
        Error::Numerical(format!("log-logistic fit of {} failed: {e}", which.label()))
    })?;
    Ok(FitReport {
        which,
        result,
        dropped_zeros: sample.len() - positive.len(),
    })
}

/// Runs the replications of cell (γ, n) and everything derived from them.
pub fn run_cell(settings: &SweepSettings, gamma: f64, n: usize) -> Result<CellOutcome> {
    let (rep_seed, boot_seed) = cell_seeds(settings.seed, gamma, n);
    let config = ExperimentConfig {
        n_researchers: n,
        gamma,
        k_max: settings.truncation,
        m_replications: settings.replications,
        master_seed: rep_seed,
        citation_law: Arc::clone(&settings.citation_law),
    };
    let replications = run_replications(&config)?;
    let aor = replications.aor();
    let roa = replications.roa();

    let boot = BootstrapConfig {
        resamples: settings.bootstrap_resamples,
        confidence: settings.confidence,
        seed: boot_seed,
    };
    let summary = ExperimentSummary {
        gamma,
        n,
        mean_aor: aor.iter().sum::<f64>() / aor.len() as f64,
        mean_roa: roa.iter().sum::<f64>() / roa.len() as f64,
        ci: bootstrap_mean_diff_ci(&replications.pairs(), &boot)?,
        ks: ks_two_sample(&aor, &roa)?,
    };

    let fits = if settings.fit {
        vec![
            fit_positive(Which::Aor, &aor, &settings.fit_options)?,
            fit_positive(Which::Roa, &roa, &settings.fit_options)?,
        ]
    } else {
        Vec::new()
    };

    Ok(CellOutcome {
        summary,
        correlation: summarize_correlations(&replications),
        replications,
        fits,
    })
}

/// `3.0`, `3.5`: shortest round-trip form that always shows a decimal point.
fn gamma_label(gamma: f64) -> String {
    format!("{gamma:?}")
}

/// File stem used for figure data of one cell, e.g. `roa_g3.5_n50`, `aor_g3.0_n25`.
pub fn figure_stem(which: Which, gamma: f64, n: usize) -> String {
    format!("{}_g{}_n{}", which.label(), gamma_label(gamma), n)
}

pub fn summary_table_tsv(rows: &[ExperimentSummary]) -> String {
    let mut out = String::from("gamma\tn\tmean_aor\tmean_roa\tci_lower\tci_upper\tks_p_value\n");
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
            gamma_label(r.gamma),
            r.n,
            r.mean_aor,
            r.mean_roa,
            r.ci.lower,
            r.ci.upper,
            r.ks.p_value
        )
        .unwrap();
    }
    out
}

pub fn correlation_table_tsv(rows: &[CorrelationSummary]) -> String {
    let mut out = String::from("gamma\tn\tmean\tvariance\tmin\tmax\tdefined\tundefined\n");
    for r in rows {
        let var = r.variance.map_or_else(|| "NA".to_string(), |v| format!("{v:.4}"));
        writeln!(
            out,
            "{}\t{}\t{:.4}\t{}\t{:.4}\t{:.4}\t{}\t{}",
            gamma_label(r.gamma),
            r.n,
            r.mean,
            var,
            r.min,
            r.max,
            r.defined,
            r.undefined
        )
        .unwrap();
    }
    out
}

pub fn fit_table_tsv(rows: &[(f64, usize, FitReport)]) -> String {
    let mut out = String::from(
        "gamma\tn\twhich\talpha\tbeta\tlog_beta\tinv_alpha\tlog_likelihood\titerations\tconverged\tks_statistic\tdropped_zeros\n",
    );
    for (gamma, n, f) in rows {
        let p = f.result.params;
        let logistic = p.to_logistic();
        writeln!(
            out,
            "{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}\t{}\t{:.4}\t{}",
            gamma_label(*gamma),
            n,
            f.which.label(),
            p.alpha(),
            p.beta(),
            logistic.location,
            logistic.scale,
            f.result.log_likelihood,
            f.result.iterations,
            f.result.converged,
            f.result.ks_statistic,
            f.dropped_zeros
        )
        .unwrap();
    }
    out
}

/// `bin_left,bin_right,count,fitted_density_scaled`; the last column is the
/// fitted density at the bin center times (sample size × bin width), empty
/// without a fit.
pub fn histogram_csv(sample: &[f64], bins: usize, fit: Option<&FitResult>) -> Result<String> {
    let mut out = String::from("bin_left,bin_right,count,fitted_density_scaled\n");
    for bin in histogram(sample, bins)? {
        let fitted = match fit {
            Some(f) => {
                let scale = sample.len() as f64 * bin.width();
                format!("{}", scale * f.params.pdf(bin.center().max(0.0))?)
            }
            None => String::new(),
        };
        writeln!(out, "{},{},{},{}", bin.left, bin.right, bin.count, fitted).unwrap();
    }
    Ok(out)
}

/// `x,ecdf,fitted_cdf` at each distinct sample value.
pub fn ecdf_csv(sample: &[f64], fit: Option<&FitResult>) -> Result<String> {
    let mut out = String::from("x,ecdf,fitted_cdf\n");
    let e = ecdf(sample)?;
    for (x, h) in e.points.iter().zip(&e.heights) {
        let fitted = match fit {
            Some(f) => format!("{}", f.params.cdf(x.max(0.0))?),
            None => String::new(),
        };
        writeln!(out, "{x},{h},{fitted}").unwrap();
    }
    Ok(out)
}

pub fn ranking_tsv(ranked: &[RankedCountry]) -> String {
    let mut out = String::from("rank\tcountry\tcitations_per_document\n");
    for r in ranked {
        writeln!(out, "{}\t{}\t{:.2}", r.rank, r.record.name, r.record.ratio()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{rank_countries, CountryRecord};

    fn settings() -> SweepSettings {
        let law = EmpiricalDiscrete::from_counts(&[(0, 40), (1, 10), (3, 20), (8, 20), (40, 10)]).unwrap();
        let mut s = SweepSettings::new(Arc::new(law), 17);
        s.replications = 200;
        s.bootstrap_resamples = 100;
        s.fit = true;
        s
    }

    #[test]
    fn cell_is_reproducible() {
        let s = settings();
        let a = run_cell(&s, 3.0, 20).unwrap();
        let b = run_cell(&s, 3.0, 20).unwrap();
        assert_eq!(a.summary, b.summary);
        assert_eq!(a.replications.stats, b.replications.stats);
        assert_eq!(a.fits, b.fits);
        assert_eq!(a.fits.len(), 2);
    }

    #[test]
    fn cell_seeds_depend_on_coordinates() {
        assert_ne!(cell_seeds(1, 3.0, 50), cell_seeds(1, 3.5, 50));
        assert_ne!(cell_seeds(1, 3.0, 50), cell_seeds(1, 3.0, 25));
        let (r, b) = cell_seeds(1, 3.0, 50);
        assert_ne!(r, b);
    }

    #[test]
    fn figure_files() {
        let s = settings();
        let cell = run_cell(&s, 3.0, 20).unwrap();
        let roa = cell.sample(Which::Roa);
        let hist = histogram_csv(&roa, 15, cell.fit(Which::Roa)).unwrap();
        let total: usize = hist
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse::<usize>().unwrap())
            .sum();
        assert_eq!(total, s.replications);

        let ecdf_text = ecdf_csv(&roa, cell.fit(Which::Roa)).unwrap();
        let rows: Vec<Vec<f64>> = ecdf_text
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.last().unwrap()[1], 1.0);
        assert!(rows.windows(2).all(|w| w[1][2] >= w[0][2]));

        let bare = histogram_csv(&roa, 5, None).unwrap();
        assert!(bare.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn table_rendering() {
        let s = settings();
        let cell = run_cell(&s, 3.5, 10).unwrap();
        let t = summary_table_tsv(&[cell.summary, cell.summary]);
        assert_eq!(t.lines().count(), 3);
        assert!(t.lines().nth(1).unwrap().starts_with("3.5\t10\t"));
        let c = correlation_table_tsv(&[cell.correlation.unwrap()]);
        assert_eq!(c.lines().nth(1).unwrap().split('\t').count(), 8);
        let f = fit_table_tsv(&[(3.5, 10, cell.fits[1])]);
        assert!(f.contains("\troa\t"));
    }

    #[test]
    fn ranking_rendering() {
        let recs = [
            CountryRecord::new("B", 10, 100).unwrap(),
            CountryRecord::new("A", 100, 2246).unwrap(),
        ];
        let t = ranking_tsv(&rank_countries(&recs).unwrap());
        assert_eq!(t, "rank\tcountry\tcitations_per_document\n1\tA\t22.46\n2\tB\t10.00\n");
    }
}
