//! Closed-form densities. Every variant is written as
//! `f(x) = (1/β) κ/(1+κ²) M(δ)` with `M(δ) = E[W exp(-W δ)]`, evaluated in
//! the log domain.

use super::{ALSMParams, MixingLaw};
use crate::ald::{al_pdf, delta};
use crate::error::{Error, Result};
use crate::specfun::{
    adaptive_quadrature_with_breaks, ln_exp_integral, ln_gamma, ln_scaled_lower_gamma,
    QuadratureConfig,
};

fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Log weights of the reference and contaminated components of the two-point mixture.
pub(crate) fn ln_tp_components(d: f64, theta1: f64, theta2: f64) -> (f64, f64) {
    (
        theta1.ln() - d,
        (-theta1).ln_1p() - theta2.ln() - d / theta2,
    )
}

/// ln ∫_l^u w^m e^{-δw} dw for 0 ≤ l < u < ∞, δ ≥ 0, as a sum of positive terms.
pub(crate) fn ln_power_integral(m: u32, l: f64, u: f64, d: f64) -> f64 {
    let width = u - l;
    let x = d * width;
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=m {
        if j > 0 {
            binom *= (m - j + 1) as f64 / j as f64;
        }
        let lpow = if m == j { 1.0 } else { l.powi((m - j) as i32) };
        sum += binom
            * lpow
            * width.powi(j as i32 + 1)
            * ln_scaled_lower_gamma(j as f64 + 1.0, x).exp();
    }
    -d * l + sum.ln()
}

/// ln M(δ) = ln E[W e^{-Wδ}] under the mixing law.
pub(crate) fn ln_kernel(d: f64, m: &MixingLaw) -> f64 {
    match *m {
        MixingLaw::Degenerate => -d,
        MixingLaw::TwoPoint { theta1, theta2 } => {
            let (a, b) = ln_tp_components(d, theta1, theta2);
            log_add_exp(a, b)
        }
        MixingLaw::ShiftedExp { theta } => {
            theta.ln() + (1.0 + theta + d).ln() - d - 2.0 * (theta + d).ln()
        }
        MixingLaw::UnimodalGamma { theta } => {
            theta.ln_1p() - (1.0 / theta + 2.0) * (theta * d).ln_1p()
        }
        MixingLaw::InverseGaussian { theta } => {
            let c = (3.0 * theta + 1.0).sqrt();
            let u = 2.0 * theta * d;
            // (c/θ)(1 - sqrt(1+u)) written without cancellation
            c.ln() - 2.0 * c * d / (1.0 + (1.0 + u).sqrt()) - 0.5 * u.ln_1p()
        }
        MixingLaw::PowerFunction { theta } => theta.ln() + ln_scaled_lower_gamma(theta + 1.0, d),
        MixingLaw::Pareto { theta } => theta.ln() + ln_exp_integral(theta, d),
        MixingLaw::UniformTail { theta } => -theta.ln() + ln_power_integral(1, 1.0 - theta, 1.0, d),
        MixingLaw::GammaApp { theta } => -(0.5 * theta + 1.0) * (2.0 * d / theta).ln_1p(),
    }
}

pub fn alsm_logpdf(x: f64, p: &ALSMParams) -> f64 {
    p.al.ln_norm() + ln_kernel(delta(x, &p.al), &p.mixing)
}

pub fn alsm_pdf(x: f64, p: &ALSMParams) -> f64 {
    alsm_logpdf(x, p).exp()
}

/// Σ ln f(xᵢ).
pub fn alsm_loglik(data: &[f64], p: &ALSMParams) -> f64 {
    data.iter().map(|&x| alsm_logpdf(x, p)).sum()
}

/// Every member of the family is unimodal at μ.
pub fn alsm_mode(p: &ALSMParams) -> f64 {
    p.al.mu
}

/// ln h(w; θ), the mixing density; -∞ off the support. For the two-point law
/// this is the log probability of the atom at `w`.
pub fn mixing_logpdf(w: f64, m: &MixingLaw) -> f64 {
    let (lo, hi) = m.support();
    let inside = w > lo && w < hi;
    match *m {
        MixingLaw::Degenerate => {
            if w == 1.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        }
        MixingLaw::TwoPoint { theta1, theta2 } => {
            if w == 1.0 {
                theta1.ln()
            } else if w == 1.0 / theta2 {
                (-theta1).ln_1p()
            } else {
                f64::NEG_INFINITY
            }
        }
        _ if !inside => f64::NEG_INFINITY,
        MixingLaw::ShiftedExp { theta } => theta.ln() - theta * (w - 1.0),
        MixingLaw::UnimodalGamma { theta } => {
            let a = 1.0 / theta + 1.0;
            (a - 1.0) * w.ln() - w / theta - a * theta.ln() - ln_gamma(a)
        }
        MixingLaw::InverseGaussian { theta } => {
            let c2 = 3.0 * theta + 1.0;
            let c = c2.sqrt();
            0.5 * (c2 / (2.0 * std::f64::consts::PI * theta)).ln()
                - 1.5 * w.ln()
                - (w - c).powi(2) / (2.0 * theta * w)
        }
        MixingLaw::PowerFunction { theta } => theta.ln() + (theta - 1.0) * w.ln(),
        MixingLaw::Pareto { theta } => theta.ln() - (theta + 1.0) * w.ln(),
        MixingLaw::UniformTail { theta } => -theta.ln(),
        MixingLaw::GammaApp { theta } => {
            let a = 0.5 * theta;
            a * a.ln() - ln_gamma(a) + (a - 1.0) * w.ln() - a * w
        }
    }
}

/// The density as the defining mixture integral ∫ f_AL(x; μ, β/w, κ) h(w) dw.
pub fn alsm_pdf_numeric(x: f64, p: &ALSMParams, cfg: &QuadratureConfig) -> Result<f64> {
    let al = p.al;
    match p.mixing {
        MixingLaw::Degenerate => Ok(al_pdf(x, &al)),
        MixingLaw::TwoPoint { theta1, theta2 } => {
            let wide = crate::ald::ALParams {
                beta: al.beta * theta2,
                ..al
            };
            Ok(theta1 * al_pdf(x, &al) + (1.0 - theta1) * al_pdf(x, &wide))
        }
        m => {
            let d = delta(x, &al);
            let ln_c = al.ln_norm();
            let f = |w: f64| {
                let lh = mixing_logpdf(w, &m);
                if lh == f64::NEG_INFINITY {
                    return 0.0;
                }
                (ln_c + w.ln() - w * d + lh).exp()
            };
            let (lo, hi) = m.support();
            let mut breaks = vec![0.1, 0.5, 1.0, 2.0, 5.0, 20.0];
            if d > 0.0 {
                breaks.push(1.0 / d);
            }
            adaptive_quadrature_with_breaks(f, lo, hi, &breaks, cfg)
        }
    }
}

/// Posterior probability that `x` comes from the reference (uncontaminated)
/// component of a two-point mixture.
pub fn tp_posterior_good(x: f64, p: &ALSMParams) -> Result<f64> {
    match p.mixing {
        MixingLaw::TwoPoint { theta1, theta2 } => {
            let (a, b) = ln_tp_components(delta(x, &p.al), theta1, theta2);
            Ok((a - log_add_exp(a, b)).exp())
        }
        _ => Err(Error::WrongVariant {
            expected: "two-point",
        }),
    }
}
