//! Moments of a gamma(shape, rate) law restricted to an interval.

use super::gamma::digamma_pos;
use super::incgamma::ln_pq;
use super::quad::{adaptive_quadrature_with_breaks, QuadratureConfig};
use crate::error::{domain, Error, Result};

/// E(W), E(log W) and E(1/W) under a truncated gamma law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncGammaMoments {
    pub mean_w: f64,
    pub mean_log_w: f64,
    /// Infinite when the interval reaches zero and shape ≤ 1.
    pub mean_inv_w: f64,
}

fn ln_diff_exp(a: f64, b: f64) -> f64 {
    // ln(e^a - e^b) for a ≥ b
    if b == f64::NEG_INFINITY {
        a
    } else {
        a + (-(b - a).exp()).ln_1p()
    }
}

/// ln of the gamma(shape, 1) probability of (lo, hi), with lo, hi already scaled by the rate.
pub(crate) fn ln_gamma_mass(shape: f64, lo: f64, hi: f64) -> f64 {
    let (lp_lo, lq_lo) = ln_pq(shape, lo);
    let (lp_hi, lq_hi) = if hi.is_infinite() {
        (0.0, f64::NEG_INFINITY)
    } else {
        ln_pq(shape, hi)
    };
    let half = -std::f64::consts::LN_2;
    if lp_hi <= half {
        ln_diff_exp(lp_hi, lp_lo)
    } else if lq_lo <= half {
        ln_diff_exp(lq_lo, lq_hi)
    } else {
        (-(lp_lo.exp() + lq_hi.exp())).ln_1p()
    }
}

/// Posterior-style expectations under gamma(shape, rate) restricted to (lo, hi).
///
/// `mean_w` comes from a ratio of incomplete gamma functions; the log and
/// reciprocal moments are integrated numerically in `y = ln w`.
pub fn trunc_gamma_expectations(
    shape: f64,
    rate: f64,
    lo: f64,
    hi: f64,
) -> Result<TruncGammaMoments> {
    if !(shape > 0.0 && rate > 0.0 && lo >= 0.0 && hi > lo)
        || !shape.is_finite()
        || !rate.is_finite()
    {
        return Err(domain(
            "trunc_gamma_expectations",
            format!("invalid arguments shape={shape}, rate={rate}, lo={lo}, hi={hi}"),
        ));
    }
    let ln_z0 = ln_gamma_mass(shape, rate * lo, rate * hi);
    if !(ln_z0 >= (1e-300f64).ln()) {
        return Err(Error::DegenerateTruncation { lo, hi });
    }
    if lo == 0.0 && hi.is_infinite() {
        return Ok(TruncGammaMoments {
            mean_w: shape / rate,
            mean_log_w: digamma_pos(shape) - rate.ln(),
            mean_inv_w: if shape > 1.0 {
                rate / (shape - 1.0)
            } else {
                f64::INFINITY
            },
        });
    }
    let ln_z1 = ln_gamma_mass(shape + 1.0, rate * lo, rate * hi);
    let mean_w = shape / rate * (ln_z1 - ln_z0).exp();

    let ylo = if lo == 0.0 {
        f64::NEG_INFINITY
    } else {
        lo.ln()
    };
    let yhi = hi.ln();
    let ystar = (shape / rate).ln().clamp(ylo, yhi);
    let c0 = shape * ystar - rate * ystar.exp();
    // w^p times the gamma kernel in y = ln w, relative to its peak
    let kernel = |p: f64, y: f64| {
        let v = ((shape + p) * y - rate * y.exp() - c0).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let breaks = [ystar];
    let cfg = QuadratureConfig {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: 1e-12,
        max_subdivisions: 1000,
    };
    let i0 = adaptive_quadrature_with_breaks(|y| kernel(0.0, y), ylo, yhi, &breaks, &cfg)?;
    let cfg = QuadratureConfig {
        abs_tol: 1e-13 * i0,
        ..cfg
    };
    let i1 = adaptive_quadrature_with_breaks(|y| y * kernel(0.0, y), ylo, yhi, &breaks, &cfg)?;
    let mean_inv_w = if lo == 0.0 && shape <= 1.0 {
        f64::INFINITY
    } else {
        adaptive_quadrature_with_breaks(|y| kernel(-1.0, y), ylo, yhi, &breaks, &cfg)? / i0
    };
    Ok(TruncGammaMoments {
        mean_w,
        mean_log_w: i1 / i0,
        mean_inv_w,
    })
}
