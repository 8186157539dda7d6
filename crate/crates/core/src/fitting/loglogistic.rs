use super::simplex::{minimize, SimplexOptions};
use crate::distributions::LogLogisticParams;
use crate::stats::quantile;
use crate::{Error, Result};

/// Smallest sample accepted by [`fit_loglogistic`].
pub const MIN_FIT_SIZE: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Spread of the simplex NLL values at convergence.
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iters: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub params: LogLogisticParams,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// sup |ECDF − fitted cdf|. Descriptive only: the parameters were
    /// estimated from the same sample, so the usual KS null law does not apply.
    pub ks_statistic: f64,
}

fn check_positive(sample: &[f64]) -> Result<()> {
    match sample.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        Some(x) => Err(Error::domain(format!(
            "log-logistic fitting needs positive finite values, got {x}"
        ))),
        None => Ok(()),
    }
}

fn nll_unchecked(sample: &[f64], p: &LogLogisticParams) -> f64 {
    -sample.iter().map(|&x| p.ln_pdf(x)).sum::<f64>()
}

/// −Σ ln f(xᵢ; α, β), evaluated in the log domain.
pub fn negative_log_likelihood(sample: &[f64], p: &LogLogisticParams) -> Result<f64> {
    check_positive(sample)?;
    Ok(nll_unchecked(sample, p))
}

/// Moment-free starting point: β₀ is the sample median and α₀ solves
/// q₇₅/q₂₅ = 9^(1/α) for the sample quartiles.
pub fn initial_params(sample: &[f64]) -> Result<LogLogisticParams> {
    if sample.len() < 2 {
        return Err(Error::Invalid("need at least 2 values for starting parameters".into()));
    }
    check_positive(sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q25 = quantile(&sorted, 0.25);
    let q75 = quantile(&sorted, 0.75);
    if q75 <= q25 {
        return Err(Error::Invalid("sample has zero interquartile range".into()));
    }
    let alpha = 9f64.ln() / (q75 / q25).ln();
    LogLogisticParams::new(alpha, quantile(&sorted, 0.5))
}

fn ks_against(sorted: &[f64], p: &LogLogisticParams) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = p.cdf(x).expect("positive sample");
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Maximum-likelihood log-logistic fit.
///
/// The simplex runs over (ln α, ln β) so positivity holds without
/// constraints. A fit that hits `max_iters` is returned with
/// `converged = false`.
pub fn fit_loglogistic(sample: &[f64], opts: &FitOptions) -> Result<FitResult> {
    if sample.len() < MIN_FIT_SIZE {
        return Err(Error::Invalid(format!(
            "log-logistic fit needs at least {MIN_FIT_SIZE} values, got {}",
            sample.len()
        )));
    }
    let start = initial_params(sample)?;

    let objective = |theta: &[f64]| match LogLogisticParams::new(theta[0].exp(), theta[1].exp()) {
        Ok(p) => nll_unchecked(sample, &p),
        Err(_) => f64::INFINITY,
    };
    let simplex_opts = SimplexOptions {
        f_tolerance: opts.tolerance,
        max_iters: opts.max_iters,
        ..SimplexOptions::default()
    };
    let found = minimize(objective, &[start.alpha().ln(), start.beta().ln()], &simplex_opts);
    let params = LogLogisticParams::new(found.x[0].exp(), found.x[1].exp())?;

    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(FitResult {
        params,
        log_likelihood: -found.f,
        iterations: found.iterations,
        converged: found.converged,
        ks_statistic: ks_against(&sorted, &params),
    })
}

/// Density on `grid`, multiplied by `scale` when given (sample size × bin
/// width turns it into expected histogram counts).
pub fn fitted_density_curve(
    p: &LogLogisticParams,
    grid: &[f64],
    scale: Option<f64>,
) -> Result<Vec<(f64, f64)>> {
    let s = scale.unwrap_or(1.0);
    grid.iter().map(|&x| Ok((x, s * p.pdf(x)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, uniform};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn ll(a: f64, b: f64) -> LogLogisticParams {
        LogLogisticParams::new(a, b).unwrap()
    }

    fn draws(p: &LogLogisticParams, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = stream(seed);
        (0..n).map(|_| p.quantile(uniform(&mut rng)).unwrap()).filter(|&x| x > 0.0).collect()
    }

    #[test]
    fn nll_single_point_at_median() {
        let beta = 2.5;
        let v = negative_log_likelihood(&[beta], &ll(1.0, beta)).unwrap();
        assert_relative_eq!(v, -(1.0 / (4.0 * beta)).ln(), max_relative = 1e-14);
    }

    #[test]
    fn nll_matches_direct_pdf_oracle() {
        let p = ll(3.3, 6.0);
        let sample = draws(&p, 500, 4);
        let direct: f64 = -sample
            .iter()
            .map(|&x| {
                let z = (x / 6.0f64).powf(3.3);
                ((3.3 / 6.0) * (x / 6.0f64).powf(2.3) / (1.0 + z).powi(2)).ln()
            })
            .sum::<f64>();
        assert_relative_eq!(negative_log_likelihood(&sample, &p).unwrap(), direct, max_relative = 1e-12);
        assert_abs_diff_eq!(negative_log_likelihood(&sample, &p).unwrap(), direct, epsilon = 1e-9);
    }

    #[test]
    fn nll_stays_finite_for_extreme_ratios() {
        let v = negative_log_likelihood(&[1e-300, 1e300], &ll(50.0, 1.0)).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn nll_rejects_nonpositive() {
        assert!(negative_log_likelihood(&[1.0, 0.0], &ll(1.0, 1.0)).is_err());
        assert!(negative_log_likelihood(&[-1.0], &ll(1.0, 1.0)).is_err());
    }

    #[test]
    fn nll_improves_toward_truth() {
        let truth = ll(4.7, 7.89);
        let sample = draws(&truth, 100_000, 8);
        let far = negative_log_likelihood(&sample, &ll(6.0, 9.5)).unwrap();
        let near = negative_log_likelihood(&sample, &ll(5.0, 8.2)).unwrap();
        let at = negative_log_likelihood(&sample, &truth).unwrap();
        assert!(far > near && near > at);
    }

    #[test]
    fn initial_params_from_exact_quartiles() {
        let p = ll(4.7054, 7.8930);
        let pseudo: Vec<f64> = [0.25, 0.5, 0.75].iter().map(|&q| p.quantile(q).unwrap()).collect();
        let start = initial_params(&pseudo).unwrap();
        assert_abs_diff_eq!(start.alpha(), 4.7054, epsilon = 1e-6);
        assert_abs_diff_eq!(start.beta(), 7.8930, epsilon = 1e-9);
    }

    #[test]
    fn initial_params_median_and_errors() {
        let s = [7.0, 7.5, 7.89, 8.3, 9.0];
        assert_eq!(initial_params(&s).unwrap().beta(), 7.89);
        assert!(initial_params(&[3.0; 10]).is_err());
        assert!(initial_params(&[3.0]).is_err());
    }

    #[test]
    fn fit_rejects_small_or_degenerate() {
        assert!(fit_loglogistic(&[1.0, 2.0, 3.0], &FitOptions::default()).is_err());
        assert!(fit_loglogistic(&[2.0; 50], &FitOptions::default()).is_err());
        let mut s: Vec<f64> = (1..=20).map(f64::from).collect();
        s[3] = 0.0;
        assert!(fit_loglogistic(&s, &FitOptions::default()).is_err());
    }

    #[test]
    fn fit_on_quantile_grid() {
        let truth = ll(4.7054, 7.8930);
        let grid: Vec<f64> = (1..1000).map(|i| truth.quantile(i as f64 / 1000.0).unwrap()).collect();
        let fit = fit_loglogistic(&grid, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        // The grid omits the outer 0.1% of each tail, which pulls the exact MLE
        // of alpha to 4.73102 (computed independently with a reference optimizer).
        assert_abs_diff_eq!(fit.params.alpha(), 4.73102, epsilon = 1e-4);
        assert_relative_eq!(fit.params.alpha(), 4.7054, max_relative = 0.006);
        assert_relative_eq!(fit.params.beta(), 7.8930, max_relative = 0.005);
        assert!(fit.ks_statistic < 0.01);
    }

    #[test]
    fn fit_is_stationary_and_improves_on_start() {
        let sample = draws(&ll(2.5, 3.0), 5000, 12);
        let fit = fit_loglogistic(&sample, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        let start = initial_params(&sample).unwrap();
        let nll_fit = negative_log_likelihood(&sample, &fit.params).unwrap();
        assert!(nll_fit <= negative_log_likelihood(&sample, &start).unwrap());
        assert_abs_diff_eq!(-fit.log_likelihood, nll_fit, epsilon = 1e-9);

        // Central finite differences in (α, β).
        let (a, b) = (fit.params.alpha(), fit.params.beta());
        let h = 1e-5;
        let f = |a: f64, b: f64| negative_log_likelihood(&sample, &ll(a, b)).unwrap();
        let ga = (f(a + h, b) - f(a - h, b)) / (2.0 * h);
        let gb = (f(a, b + h) - f(a, b - h)) / (2.0 * h);
        assert!((ga * ga + gb * gb).sqrt() < 1e-3 * nll_fit.abs());

        let mut sorted = sample.clone();
        sorted.sort_by(f64::total_cmp);
        let med = quantile(&sorted, 0.5);
        assert_abs_diff_eq!(fit.params.cdf(med).unwrap(), 0.5, epsilon = 0.05);
    }

    #[test]
    fn fit_scale_equivariance() {
        let sample = draws(&ll(4.0, 2.0), 2000, 21);
        let scaled: Vec<f64> = sample.iter().map(|x| 3.0 * x).collect();
        let a = fit_loglogistic(&sample, &FitOptions::default()).unwrap();
        let b = fit_loglogistic(&scaled, &FitOptions::default()).unwrap();
        assert_relative_eq!(a.params.alpha(), b.params.alpha(), max_relative = 1e-4);
        assert_relative_eq!(3.0 * a.params.beta(), b.params.beta(), max_relative = 1e-4);
    }

    #[test]
    fn non_convergence_is_reported() {
        let sample = draws(&ll(4.0, 2.0), 200, 3);
        let fit = fit_loglogistic(&sample, &FitOptions { tolerance: 1e-8, max_iters: 2 }).unwrap();
        assert!(!fit.converged);
    }

    #[test]
    fn density_curve() {
        let p = ll(4.7054, 7.8930);
        let c = fitted_density_curve(&p, &[7.8930], None).unwrap();
        assert_relative_eq!(c[0].1, 4.7054 / (4.0 * 7.8930), max_relative = 1e-14);
        let c = fitted_density_curve(&p, &[7.8930], Some(1000.0 * 0.5)).unwrap();
        assert_relative_eq!(c[0].1, 500.0 * 4.7054 / (4.0 * 7.8930), max_relative = 1e-14);
        assert!(fitted_density_curve(&p, &[-1.0], None).is_err());

        let upper = 100.0 * p.beta();
        let n = 200_000;
        let grid: Vec<f64> = (0..=n).map(|i| upper * i as f64 / n as f64).collect();
        let curve = fitted_density_curve(&p, &grid, None).unwrap();
        let area: f64 = curve.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
        assert_abs_diff_eq!(area, 1.0, epsilon = 1e-3);
    }
}
