//! Moments of the family, assembled from p_r(κ) and E(1/W^r).

use serde::Serialize;

use super::{ALSMParams, MixingLaw};
use crate::error::{Error, Result};
use crate::specfun::{bessel_k_scaled, exp_integral_scaled_unchecked, ln_gamma};

/// p_r(κ) = [1 + (-1)^r κ^{2(r+1)}] / (1 + κ²), the alternating sum Σ_{j≤r} (-κ²)^j.
pub fn p_r(r: u32, kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    (1.0 + sign * k2.powi(r as i32 + 1)) / (1.0 + k2)
}

fn missing(m: &MixingLaw, order: f64) -> Error {
    Error::MomentDoesNotExist {
        law: m.tag().as_str(),
        r: order,
        theta: m.theta().first().copied().unwrap_or(f64::NAN),
    }
}

/// E(1/W^r) for integer r ≥ 1.
pub fn inv_w_moment(m: &MixingLaw, r: u32) -> Result<f64> {
    if r == 0 {
        return Ok(1.0);
    }
    let rf = r as f64;
    match *m {
        MixingLaw::UnimodalGamma { theta } => {
            if r >= 2 && theta >= 1.0 / (rf - 1.0) {
                return Err(missing(m, rf));
            }
            let prod: f64 = (1..=r).map(|j| 1.0 + theta - j as f64 * theta).product();
            Ok(1.0 / prod)
        }
        MixingLaw::GammaApp { theta } => {
            if theta <= 2.0 * rf {
                return Err(missing(m, rf));
            }
            let prod: f64 = (1..=r).map(|j| 1.0 - 2.0 * j as f64 / theta).product();
            Ok(1.0 / prod)
        }
        _ => inv_w_moment_real(m, rf),
    }
}

/// E(W^{-a}) for real a; errors when the moment is infinite.
pub(crate) fn inv_w_moment_real(m: &MixingLaw, a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(1.0);
    }
    match *m {
        MixingLaw::Degenerate => Ok(1.0),
        MixingLaw::TwoPoint { theta1, theta2 } => Ok(theta1 + (1.0 - theta1) * theta2.powf(a)),
        MixingLaw::ShiftedExp { theta } => Ok(theta * exp_integral_scaled_unchecked(a, theta)),
        MixingLaw::UnimodalGamma { theta } => {
            let shape = 1.0 / theta + 1.0;
            if shape <= a {
                return Err(missing(m, a));
            }
            Ok((-a * theta.ln() + ln_gamma(shape - a) - ln_gamma(shape)).exp())
        }
        MixingLaw::InverseGaussian { theta } => {
            let c2 = 3.0 * theta + 1.0;
            let z = c2.sqrt() / theta;
            let k = bessel_k_scaled(a + 0.5, z)?;
            Ok((2.0 / (theta * std::f64::consts::PI)).sqrt() * c2.powf((1.0 - 2.0 * a) / 4.0) * k)
        }
        MixingLaw::PowerFunction { theta } => {
            if theta <= a {
                return Err(missing(m, a));
            }
            Ok(theta / (theta - a))
        }
        MixingLaw::Pareto { theta } => {
            if theta + a <= 0.0 {
                return Err(missing(m, a));
            }
            Ok(theta / (theta + a))
        }
        MixingLaw::UniformTail { theta } => {
            let l = (-theta).ln_1p();
            if a == 1.0 {
                Ok(-l / theta)
            } else {
                Ok(((1.0 - a) * l).exp_m1() / (theta * (a - 1.0)))
            }
        }
        MixingLaw::GammaApp { theta } => {
            let shape = 0.5 * theta;
            if shape <= a {
                return Err(missing(m, a));
            }
            Ok((a * shape.ln() + ln_gamma(shape - a) - ln_gamma(shape)).exp())
        }
    }
}

/// Mean, variance, skewness and raw kurtosis; each is `None` when the
/// required inverse moment of W does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureMoments {
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

pub fn alsm_moments(p: &ALSMParams) -> MixtureMoments {
    let (beta, kappa) = (p.al.beta, p.al.kappa);
    // Raw moments of (X - μ)/β: r! κ^{-r} p_r(κ) E(1/W^r).
    let raw: Vec<Option<f64>> = (1..=4u32)
        .map(|r| {
            let fact = [1.0, 1.0, 2.0, 6.0, 24.0][r as usize];
            inv_w_moment(&p.mixing, r)
                .ok()
                .map(|e| fact * kappa.powi(-(r as i32)) * p_r(r, kappa) * e)
        })
        .collect();
    let (m1, m2, m3, m4) = (raw[0], raw[1], raw[2], raw[3]);
    let var = m1.zip(m2).map(|(a, b)| b - a * a);
    let mu3 = var.zip(m3).map(|(_, c)| {
        let (a, b) = (m1.unwrap(), m2.unwrap());
        c - 3.0 * b * a + 2.0 * a.powi(3)
    });
    let mu4 = mu3.zip(m4).map(|(_, d)| {
        let (a, b, c) = (m1.unwrap(), m2.unwrap(), m3.unwrap());
        d - 4.0 * c * a + 6.0 * b * a * a - 3.0 * a.powi(4)
    });
    MixtureMoments {
        mean: m1.map(|a| p.al.mu + beta * a),
        variance: var.map(|v| beta * beta * v),
        skewness: mu3.zip(var).map(|(c, v)| c / v.powf(1.5)),
        kurtosis: mu4.zip(var).map(|(d, v)| d / (v * v)),
    }
}

/// E|X - μ|^a for a > -1: (β/κ)^a Γ(a+1) [1 + κ^{2(a+1)}]/(1+κ²) E(1/W^a).
pub fn alsm_abs_moment(p: &ALSMParams, a: f64) -> Option<f64> {
    if !(a > -1.0) {
        return None;
    }
    let (beta, kappa) = (p.al.beta, p.al.kappa);
    let e = inv_w_moment_real(&p.mixing, a).ok()?;
    let shape = (1.0 + kappa.powf(2.0 * (a + 1.0))) / (1.0 + kappa * kappa);
    Some((beta / kappa).powf(a) * ln_gamma(a + 1.0).exp() * shape * e)
}
