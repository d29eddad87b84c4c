//! Posterior expectations of the mixing variable given one observation.
//!
//! With δ the AL discrepancy at x, the posterior of W is proportional to
//! w e^{-δw} h(w; θ). For the gamma-type laws this is again a (possibly
//! truncated) gamma law; the inverse Gaussian gives a GIG(1/2) law.

use crate::ald::delta;
use crate::alsm::{ln_power_integral, ln_tp_components, ALSMParams, MixingLaw};
use crate::error::{Error, Result};
use crate::specfun::{
    adaptive_quadrature_with_breaks, digamma_pos, ln_exp_integral, ln_pq, trunc_gamma_expectations,
    QuadratureConfig,
};

/// Per-observation posterior expectations. Only the fields the model's
/// θ-update needs are populated.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EStepWeights {
    /// E(W | x).
    pub w: Vec<f64>,
    /// E(log W | x): UG, G, PF and P.
    pub log_w: Option<Vec<f64>>,
    /// E(1/W | x): IG only.
    pub inv_w: Option<Vec<f64>>,
    /// Posterior probability of the reference component: TP only.
    pub v: Option<Vec<f64>>,
}

/// Posterior expectations at a single discrepancy δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub w: f64,
    pub log_w: Option<f64>,
    pub inv_w: Option<f64>,
    pub v: Option<f64>,
}

impl Posterior {
    fn w_only(w: f64) -> Self {
        Self {
            w,
            log_w: None,
            inv_w: None,
            v: None,
        }
    }

    fn with_log(w: f64, log_w: f64) -> Self {
        Self {
            log_w: Some(log_w),
            ..Self::w_only(w)
        }
    }

    fn is_finite(&self) -> bool {
        self.w.is_finite()
            && self.log_w.is_none_or(f64::is_finite)
            && self.inv_w.is_none_or(f64::is_finite)
            && self.v.is_none_or(f64::is_finite)
    }
}

/// Power-function posterior: density ∝ u^{s-1} e^{-δu} on (0, 1).
/// Returns (E U, E ln U).
fn pf_posterior(s: f64, d: f64) -> Result<(f64, f64)> {
    if d == 0.0 {
        return Ok((s / (s + 1.0), -1.0 / s));
    }
    // Truncation at 1 is immaterial when the gamma(s, δ) law has no mass above 1.
    if ln_pq(s, d).1 < -40.0 {
        return Ok((s / d, digamma_pos(s) - d.ln()));
    }
    // Kummer series: L(s, δ) ∝ Σ δ^k / (s)_{k+1}; its s-derivative gives
    // the log moment, and the same terms rescaled give L(s+1, δ).
    let mut t = 1.0 / s;
    let mut h = 1.0 / s;
    let (mut s0, mut s1, mut sw) = (t, t * h, t * s / (s + 1.0));
    let mut k = 0.0;
    while k < 1e6 {
        k += 1.0;
        t *= d / (s + k);
        h += 1.0 / (s + k);
        s0 += t;
        s1 += t * h;
        sw += t * s / (s + k + 1.0);
        if k > d - s && t < 1e-17 * s0 {
            return Ok((sw / s0, -s1 / s0));
        }
        if s0 > 1e280 {
            t *= 1e-280;
            s0 *= 1e-280;
            s1 *= 1e-280;
            sw *= 1e-280;
        }
    }
    let m = trunc_gamma_expectations(s, d, 0.0, 1.0)?;
    Ok((m.mean_w, m.mean_log_w))
}

/// Pareto posterior: density ∝ w^{-θ} e^{-δw} on (1, ∞). Returns (E W, E ln W);
/// E W is infinite at δ = 0 when θ ≤ 2.
fn pareto_posterior(theta: f64, d: f64) -> Result<(f64, f64)> {
    if d == 0.0 {
        let w = if theta > 2.0 {
            (theta - 1.0) / (theta - 2.0)
        } else {
            f64::INFINITY
        };
        return Ok((w, 1.0 / (theta - 1.0)));
    }
    let ln_norm = ln_exp_integral(theta, d);
    let w = (ln_exp_integral(theta - 1.0, d) - ln_norm).exp();
    // E ln W = ∫₀^∞ y e^{(1-θ)y - δ(e^y - 1)} dy / (e^δ E_θ(δ)), with the
    // integrand below e^{-45} of its peak beyond `yhi`.
    let yhi = (45.0 / d).ln_1p().min(45.0 / (theta - 1.0));
    let ybreak = (1.0 / d).ln_1p().min(yhi);
    let f = |y: f64| y * ((1.0 - theta) * y - d * y.exp_m1()).exp();
    let cfg = QuadratureConfig {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: 1e-12,
        max_subdivisions: 500,
    };
    let num = adaptive_quadrature_with_breaks(f, 0.0, yhi, &[ybreak], &cfg)?;
    Ok((w, num / (d + ln_norm).exp()))
}

/// Posterior expectations for one observation at discrepancy `d`.
pub fn posterior(d: f64, m: &MixingLaw) -> Result<Posterior> {
    let post = match *m {
        MixingLaw::Degenerate => Posterior::w_only(1.0),
        MixingLaw::TwoPoint { theta1, theta2 } => {
            let (a, b) = ln_tp_components(d, theta1, theta2);
            let v = 1.0 / (1.0 + (b - a).exp());
            Posterior {
                v: Some(v),
                ..Posterior::w_only(1.0 - (1.0 - v) * (1.0 - 1.0 / theta2))
            }
        }
        MixingLaw::ShiftedExp { theta } => {
            // φ₂(z)/φ₁(z) with z = δ + θ, in closed form
            let z = d + theta;
            let w = (z * z + 2.0 * z + 2.0) / (z * (z + 1.0));
            Posterior::w_only(w)
        }
        MixingLaw::UnimodalGamma { theta } => {
            let shape = 1.0 / theta + 2.0;
            let rate = d + 1.0 / theta;
            Posterior::with_log(shape / rate, digamma_pos(shape) - rate.ln())
        }
        MixingLaw::GammaApp { theta } => {
            let shape = 0.5 * theta + 1.0;
            let rate = d + 0.5 * theta;
            Posterior::with_log(shape / rate, digamma_pos(shape) - rate.ln())
        }
        MixingLaw::InverseGaussian { theta } => {
            let c = (3.0 * theta + 1.0).sqrt();
            let q = 2.0 * theta * d;
            let r = (1.0 + q).sqrt();
            Posterior {
                inv_w: Some(r / c),
                ..Posterior::w_only(c / r + theta / (1.0 + q))
            }
        }
        MixingLaw::PowerFunction { theta } => {
            let (w, lw) = pf_posterior(theta + 1.0, d)?;
            Posterior::with_log(w, lw)
        }
        MixingLaw::Pareto { theta } => {
            let (w, lw) = pareto_posterior(theta, d)?;
            Posterior::with_log(w, lw)
        }
        MixingLaw::UniformTail { theta } => {
            let lo = 1.0 - theta;
            Posterior::w_only(
                (ln_power_integral(2, lo, 1.0, d) - ln_power_integral(1, lo, 1.0, d)).exp(),
            )
        }
    };
    Ok(post)
}

/// E-step over a sample.
///
/// An infinite E(W | x) is only possible for the Pareto law at an
/// observation equal to μ; it is passed through so the Q1 step keeps μ there.
pub fn estep(p: &ALSMParams, data: &[f64]) -> Result<EStepWeights> {
    let n = data.len();
    let mut out = EStepWeights {
        w: Vec::with_capacity(n),
        ..Default::default()
    };
    for (i, &x) in data.iter().enumerate() {
        let d = delta(x, &p.al);
        let post = posterior(d, &p.mixing).map_err(|_| Error::PosteriorUnderflow { index: i })?;
        let pinned = post.w == f64::INFINITY && d == 0.0;
        if !(post.is_finite() || pinned) {
            return Err(Error::PosteriorUnderflow { index: i });
        }
        out.w.push(post.w);
        if let Some(v) = post.log_w {
            out.log_w
                .get_or_insert_with(|| Vec::with_capacity(n))
                .push(v);
        }
        if let Some(v) = post.inv_w {
            out.inv_w
                .get_or_insert_with(|| Vec::with_capacity(n))
                .push(v);
        }
        if let Some(v) = post.v {
            out.v.get_or_insert_with(|| Vec::with_capacity(n)).push(v);
        }
    }
    Ok(out)
}
