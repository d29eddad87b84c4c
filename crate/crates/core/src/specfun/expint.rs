//! Generalized exponential integral E_ν(z) for real order and the Misra
//! function φ_m(z) = E_{-m}(z).

use super::gamma::{digamma_pos, gamma, ln_gamma, ln_gamma_1p_small};
use crate::error::{domain, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

/// e^z E_ν(z) by the continued fraction for Γ(1-ν, z).
fn scaled_cf(nu: f64, z: f64) -> f64 {
    let mut b = z + nu;
    let mut c = 1.0 / TINY;
    let mut d = if b.abs() < TINY { 1.0 / TINY } else { 1.0 / b };
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        let a = -fi * (nu - 1.0 + fi);
        b += 2.0;
        d = a * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = b + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// E_ν(z) for 0 < z < 1 by the power series
/// E_ν(z) = Γ(1-ν) z^{ν-1} - Σ_k (-z)^k / (k! (k+1-ν)).
///
/// Near a positive integer order n the singular k = n-1 term and the gamma term
/// are combined analytically so that neither pole is formed.
fn series(nu: f64, z: f64) -> f64 {
    let n = nu.round();
    let near_int = n >= 1.0 && (nu - n).abs() < 0.1;
    let skip = if near_int { Some(n as usize - 1) } else { None };

    let mut sum = 0.0;
    let mut pow = 1.0; // (-z)^k / k!
    for k in 0..200usize {
        if Some(k) != skip {
            sum += pow / (k as f64 + 1.0 - nu);
        }
        pow *= -z / (k as f64 + 1.0);
        if pow.abs() < EPS * sum.abs().max(TINY) && k > skip.unwrap_or(0) {
            break;
        }
    }

    let head = match skip {
        None => gamma(1.0 - nu) * z.powf(nu - 1.0),
        Some(m) => {
            let eps = n - nu;
            let lead =
                if m % 2 == 0 { 1.0 } else { -1.0 } * z.powi(m as i32) / gamma(m as f64 + 1.0);
            if eps == 0.0 {
                lead * (digamma_pos(n) - z.ln())
            } else {
                let mut d = ln_gamma_1p_small(eps) - eps * z.ln();
                for j in 1..=m {
                    d -= (-eps / j as f64).ln_1p();
                }
                lead * d.exp_m1() / eps
            }
        }
    };
    head - sum
}

/// e^z E_ν(z) for z > 0 (no argument checks).
pub(crate) fn exp_integral_scaled_unchecked(nu: f64, z: f64) -> f64 {
    if z >= 1.0 || nu >= 10.0 {
        scaled_cf(nu, z)
    } else {
        z.exp() * series(nu, z)
    }
}

/// E_ν(z) = ∫_1^∞ t^{-ν} e^{-zt} dt for real ν and z > 0.
pub fn gen_exp_integral(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !nu.is_finite() {
        return Err(domain(
            "gen_exp_integral",
            format!("need z > 0, got z={z}, nu={nu}"),
        ));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    Ok(ln_exp_integral(nu, z).exp())
}

/// e^z E_ν(z), finite for large z where E_ν itself underflows.
pub fn exp_integral_scaled(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !nu.is_finite() || z.is_infinite() {
        return Err(domain(
            "exp_integral_scaled",
            format!("need finite z > 0, got z={z}"),
        ));
    }
    Ok(exp_integral_scaled_unchecked(nu, z))
}

/// ln E_ν(z) for z > 0; at z = 0 the limit 1/(ν-1) is used when ν > 1.
pub(crate) fn ln_exp_integral(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu > 1.0 {
            -(nu - 1.0).ln()
        } else {
            f64::INFINITY
        };
    }
    exp_integral_scaled_unchecked(nu, z).ln() - z
}

/// Misra function φ_m(z) = ∫_1^∞ t^m e^{-zt} dt = z^{-(m+1)} Γ(m+1, z).
pub fn misra_phi(m: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain("misra_phi", format!("need z > 0, got {z}")));
    }
    Ok(ln_misra_phi(m, z).exp())
}

/// ln φ_m(z) via the finite sum m! e^{-z} z^{-(m+1)} Σ_{k≤m} z^k / k!.
pub(crate) fn ln_misra_phi(m: u32, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=m {
        term *= z / k as f64;
        sum += term;
    }
    ln_gamma(m as f64 + 1.0) - z - (m as f64 + 1.0) * z.ln() + sum.ln()
}
