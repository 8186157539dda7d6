//! Maximum-likelihood fitting of the log-logistic law.

mod loglogistic;
mod simplex;

pub use loglogistic::{
    fit_loglogistic, fitted_density_curve, initial_params, negative_log_likelihood, FitOptions,
    FitResult,
};
pub use simplex::{minimize, SimplexOptions, SimplexResult};
