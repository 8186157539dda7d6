use std::f64::consts::PI;

use crate::{Error, Result};

/// Log-logistic law with shape `alpha` and scale `beta`:
///
/// f(x) = (α/β)(x/β)^(α−1) / (1 + (x/β)^α)²,  F(x) = (x/β)^α / (1 + (x/β)^α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogisticParams {
    alpha: f64,
    beta: f64,
}

/// The logistic law of `ln X`: location `ln β`, scale `1/α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticForm {
    pub location: f64,
    pub scale: f64,
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("support is x >= 0, got {x}")))
    }
}

/// Numerically stable ln(1 + e^z).
pub(crate) fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl LogLogisticParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!(
                "log-logistic needs alpha > 0 and beta > 0, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x == 0.0 {
            // Limit of the density at the origin.
            return Ok(match self.alpha {
                a if a < 1.0 => f64::INFINITY,
                a if a == 1.0 => 1.0 / self.beta,
                _ => 0.0,
            });
        }
        Ok(self.ln_pdf(x).exp())
    }

    /// ln f(x) for x > 0, evaluated without forming (x/β)^α.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let t = (x / self.beta).ln();
        (self.alpha / self.beta).ln() + (self.alpha - 1.0) * t - 2.0 * softplus(self.alpha * t)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x == 0.0 {
            return Ok(0.0);
        }
        let z = self.alpha * (x / self.beta).ln();
        // Logistic sigmoid of z.
        Ok(if z >= 0.0 {
            1.0 / (1.0 + (-z).exp())
        } else {
            let e = z.exp();
            e / (1.0 + e)
        })
    }

    /// Inverse cdf β (q / (1 − q))^(1/α) for q in `[0, 1)`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::domain(format!("quantile level must lie in [0, 1), got {q}")));
        }
        Ok(self.beta * (q / (1.0 - q)).powf(1.0 / self.alpha))
    }

    pub fn median(&self) -> f64 {
        self.beta
    }

    /// E[X] = (π/α) β / sin(π/α), finite only for α > 1.
    pub fn mean(&self) -> Result<f64> {
        if self.alpha <= 1.0 {
            return Err(Error::domain(format!(
                "log-logistic mean is infinite for alpha = {} <= 1",
                self.alpha
            )));
        }
        let b = PI / self.alpha;
        Ok(b * self.beta / b.sin())
    }

    pub fn to_logistic(&self) -> LogisticForm {
        LogisticForm {
            location: self.beta.ln(),
            scale: 1.0 / self.alpha,
        }
    }

    pub fn from_logistic(form: LogisticForm) -> Result<Self> {
        Self::new(1.0 / form.scale, form.location.exp())
    }
}

/// Scales of a bivariate Pareto pair whose ratio R = X/Y has cdf
/// F(x) = 1 − k₁/(x k₂ + k₁).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoRatioParams {
    k1: f64,
    k2: f64,
}

impl ParetoRatioParams {
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 > 0.0 && k2 > 0.0 && k1.is_finite() && k2.is_finite()) {
            return Err(Error::domain(format!("Pareto scales must be positive, got ({k1}, {k2})")));
        }
        Ok(Self { k1, k2 })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(1.0 - self.k1 / (x * self.k2 + self.k1))
    }

    /// The same law written as a log-logistic with α = 1, β = k₁/k₂.
    pub fn as_loglogistic(&self) -> LogLogisticParams {
        LogLogisticParams::new(1.0, self.k1 / self.k2).expect("positive scales")
    }
}
