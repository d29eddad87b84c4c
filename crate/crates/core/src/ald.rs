//! The asymmetric Laplace distribution AL(μ, β, κ).
//!
//! Density `(1/β) κ/(1+κ²) exp(-δ)` where `δ = (κ/β)(x-μ)` above the mode and
//! `(μ-x)/(κβ)` below it.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::maximize_q1;

/// Location, scale and asymmetry of an AL law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ALParams {
    pub mu: f64,
    pub beta: f64,
    pub kappa: f64,
}

impl ALParams {
    pub fn new(mu: f64, beta: f64, kappa: f64) -> Result<Self> {
        let p = Self { mu, beta, kappa };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() || !self.beta.is_finite() || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter(
                "AL parameters must be finite".into(),
            ));
        }
        if !(self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        Ok(())
    }

    /// ln(κ/(1+κ²)) - ln β, the log density at the mode of the AL law.
    pub(crate) fn ln_norm(&self) -> f64 {
        self.kappa.ln() - self.kappa.mul_add(self.kappa, 1.0).ln() - self.beta.ln()
    }
}

/// Mean, variance, skewness and raw kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

/// Standardized distance δ(x) of `x` from the mode; zero exactly at x = μ.
pub fn delta(x: f64, p: &ALParams) -> f64 {
    if x >= p.mu {
        p.kappa * (x - p.mu) / p.beta
    } else {
        (p.mu - x) / (p.kappa * p.beta)
    }
}

pub fn al_logpdf(x: f64, p: &ALParams) -> f64 {
    p.ln_norm() - delta(x, p)
}

pub fn al_pdf(x: f64, p: &ALParams) -> f64 {
    al_logpdf(x, p).exp()
}

/// Closed-form moments; kurtosis is raw and lies in [6, 9).
pub fn al_moments(p: &ALParams) -> Moments {
    let k = p.kappa;
    let s = 1.0 / (k * k) + k * k;
    Moments {
        mean: p.mu + p.beta * (1.0 / k - k),
        variance: p.beta * p.beta * s,
        skewness: 2.0 * (1.0 / k.powi(3) - k.powi(3)) / s.powf(1.5),
        kurtosis: 9.0 - 12.0 / (s * s),
    }
}

/// One AL(0, 1, κ) draw as E₁/κ − κE₂.
pub(crate) fn standard_al_draw<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> f64 {
    let e1: f64 = rng.sample(Exp1);
    let e2: f64 = rng.sample(Exp1);
    e1 / kappa - kappa * e2
}

pub fn al_sample<R: Rng + ?Sized>(p: &ALParams, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| p.mu + p.beta * standard_al_draw(p.kappa, rng))
        .collect()
}

pub fn al_loglik(data: &[f64], p: &ALParams) -> f64 {
    data.iter().map(|&x| al_logpdf(x, p)).sum()
}

/// Maximum-likelihood AL fit by the order-statistic scan with unit weights.
pub fn al_fit(data: &[f64]) -> Result<(ALParams, f64)> {
    if data.len() < 3 {
        return Err(Error::InvalidData(format!(
            "need at least 3 observations, got {}",
            data.len()
        )));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidData("data contain non-finite values".into()));
    }
    let ones = vec![1.0; data.len()];
    let p = maximize_q1(data, &ones)?;
    Ok((p, al_loglik(data, &p)))
}
