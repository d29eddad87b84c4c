//! θ-updates. SE, PF, P and TP have closed forms; UG, G and IG solve the
//! stationarity condition of Q2 numerically; U-AL maximizes the observed
//! log-likelihood directly (ECME).

use super::estep::EStepWeights;
use super::optim::{bisect, grid_then_brent};
use crate::ald::delta;
use crate::alsm::{alsm_loglik, ALSMParams, MixingLaw, ModelTag};
use crate::error::{Error, Result};
use crate::specfun::{digamma_pos, ln_gamma};

const GRID_POINTS: usize = 61;

/// Default search interval for the (second, for TP-AL) θ component.
pub fn default_theta_bounds(tag: ModelTag) -> (f64, f64) {
    match tag {
        ModelTag::PAl => (1.0 + 1e-4, 1e6),
        ModelTag::UAl => (1e-9, 1.0 - 1e-9),
        ModelTag::TpAl => (1.0 + 1e-9, 1e6),
        _ => (1e-6, 1e6),
    }
}

fn field<'a>(f: &'a Option<Vec<f64>>, name: &str) -> Result<&'a [f64]> {
    f.as_deref()
        .ok_or_else(|| Error::InvalidParameter(format!("E-step weights lack {name}")))
}

/// Σᵢ E[ln h(Wᵢ; θ) | xᵢ], up to terms free of θ, for the laws whose
/// θ-update maximizes Q2 (SE, UG, G, IG, PF, P).
pub fn q2(m: &MixingLaw, wts: &EStepWeights) -> Result<f64> {
    let n = wts.w.len() as f64;
    let sw: f64 = wts.w.iter().sum();
    let slw = || field(&wts.log_w, "log_w").map(|v| v.iter().sum::<f64>());
    Ok(match *m {
        MixingLaw::ShiftedExp { theta } => n * theta.ln() - theta * (sw - n),
        MixingLaw::UnimodalGamma { theta } => {
            let a = 1.0 / theta + 1.0;
            (slw()? - sw) / theta - n * (a * theta.ln() + ln_gamma(a))
        }
        MixingLaw::GammaApp { theta } => {
            let a = 0.5 * theta;
            n * (a * a.ln() - ln_gamma(a)) + (a - 1.0) * slw()? - a * sw
        }
        MixingLaw::InverseGaussian { theta } => {
            let si: f64 = field(&wts.inv_w, "inv_w")?.iter().sum();
            let c2 = 3.0 * theta + 1.0;
            0.5 * n * (c2 / theta).ln() - (sw - 2.0 * n * c2.sqrt() + c2 * si) / (2.0 * theta)
        }
        MixingLaw::PowerFunction { theta } => n * theta.ln() + (theta - 1.0) * slw()?,
        MixingLaw::Pareto { theta } => n * theta.ln() - (theta + 1.0) * slw()?,
        _ => {
            return Err(Error::WrongVariant {
                expected: "a law updated through Q2",
            })
        }
    })
}

/// dQ2/dθ for the numerically updated laws.
fn q2_slope(m: &MixingLaw, wts: &EStepWeights) -> Result<f64> {
    let n = wts.w.len() as f64;
    let sw: f64 = wts.w.iter().sum();
    Ok(match *m {
        MixingLaw::UnimodalGamma { theta } => {
            let slw: f64 = field(&wts.log_w, "log_w")?.iter().sum();
            (sw - slw + n * (theta.ln() - 1.0 - theta + digamma_pos(1.0 + 1.0 / theta)))
                / (theta * theta)
        }
        MixingLaw::GammaApp { theta } => {
            let slw: f64 = field(&wts.log_w, "log_w")?.iter().sum();
            let a = 0.5 * theta;
            0.5 * (n * (a.ln() + 1.0 - digamma_pos(a)) + slw - sw)
        }
        MixingLaw::InverseGaussian { theta } => {
            let si: f64 = field(&wts.inv_w, "inv_w")?.iter().sum();
            let c2 = 3.0 * theta + 1.0;
            let c = c2.sqrt();
            let num = sw - 2.0 * n * c + c2 * si;
            let dnum = -3.0 * n / c + 3.0 * si;
            0.5 * n * (3.0 / c2 - 1.0 / theta) - (dnum * theta - num) / (2.0 * theta * theta)
        }
        _ => {
            return Err(Error::WrongVariant {
                expected: "ug-al, g-al or ig-al",
            })
        }
    })
}

fn with_theta(m: &MixingLaw, theta: f64) -> MixingLaw {
    match *m {
        MixingLaw::ShiftedExp { .. } => MixingLaw::ShiftedExp { theta },
        MixingLaw::UnimodalGamma { .. } => MixingLaw::UnimodalGamma { theta },
        MixingLaw::InverseGaussian { .. } => MixingLaw::InverseGaussian { theta },
        MixingLaw::PowerFunction { .. } => MixingLaw::PowerFunction { theta },
        MixingLaw::Pareto { .. } => MixingLaw::Pareto { theta },
        MixingLaw::UniformTail { .. } => MixingLaw::UniformTail { theta },
        MixingLaw::GammaApp { .. } => MixingLaw::GammaApp { theta },
        other => other,
    }
}

/// Maximize Q2 over log θ: grid search, then bisection on the slope between
/// the neighbours of the best grid point. A maximum on the edge of the
/// interval is returned as that edge. The current θ is kept if the search
/// does not improve on it.
fn numeric_q2_update(m: &MixingLaw, wts: &EStepWeights, (lo, hi): (f64, f64)) -> Result<f64> {
    let current = m.theta()[0];
    let q = |t: f64| q2(&with_theta(m, t), wts).unwrap_or(f64::NEG_INFINITY);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| (llo + (lhi - llo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&t| q(t)).collect();
    let (k, _) = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::BracketFailure { lo, hi })?;
    let candidate = if k == 0 || k == GRID_POINTS - 1 {
        grid[k]
    } else {
        let slope = |t: f64| q2_slope(&with_theta(m, t), wts).unwrap_or(f64::NAN);
        let (a, b) = (grid[k - 1], grid[k + 1]);
        match bisect(slope, a, b, 1e-13) {
            Ok(t) => t,
            Err(_) => grid_then_brent(|lt| q(lt.exp()), a.ln(), b.ln(), 21, 1e-12)?
                .0
                .exp(),
        }
    };
    Ok(if q(candidate) >= q(current) {
        candidate
    } else {
        current
    })
}

/// θ-update from E-step weights. `p` carries the current θ and the already
/// updated (μ, β, κ); TP-AL and U-AL use the latter.
pub fn mstep_theta(
    tag: ModelTag,
    wts: &EStepWeights,
    data: &[f64],
    p: &ALSMParams,
    bounds: Option<(f64, f64)>,
) -> Result<Vec<f64>> {
    if p.tag() != tag {
        return Err(Error::WrongVariant {
            expected: tag.as_str(),
        });
    }
    let (lo, hi) = bounds.unwrap_or_else(|| default_theta_bounds(tag));
    let n = wts.w.len() as f64;
    let theta = match p.mixing {
        MixingLaw::Degenerate => return Ok(vec![]),
        MixingLaw::ShiftedExp { .. } => n / wts.w.iter().map(|w| w - 1.0).sum::<f64>(),
        MixingLaw::PowerFunction { .. } => -n / field(&wts.log_w, "log_w")?.iter().sum::<f64>(),
        MixingLaw::Pareto { .. } => n / field(&wts.log_w, "log_w")?.iter().sum::<f64>(),
        MixingLaw::UnimodalGamma { .. }
        | MixingLaw::GammaApp { .. }
        | MixingLaw::InverseGaussian { .. } => numeric_q2_update(&p.mixing, wts, (lo, hi))?,
        MixingLaw::TwoPoint { .. } => {
            let v = field(&wts.v, "v")?;
            let theta1 = (v.iter().sum::<f64>() / n).clamp(0.5 + 1e-9, 1.0 - 1e-9);
            let (mut num, mut den) = (0.0, 0.0);
            for (&vi, &x) in v.iter().zip(data) {
                num += (1.0 - vi) * delta(x, &p.al);
                den += 1.0 - vi;
            }
            let theta2 = if den > 0.0 { num / den } else { hi };
            return Ok(vec![theta1, theta2.clamp(lo, hi)]);
        }
        MixingLaw::UniformTail { theta: current } => {
            let ll = |t: f64| {
                let q = ALSMParams {
                    mixing: MixingLaw::UniformTail { theta: t },
                    ..*p
                };
                alsm_loglik(data, &q)
            };
            let logit = |t: f64| (t / (1.0 - t)).ln();
            let expit = |z: f64| 1.0 / (1.0 + (-z).exp());
            let (z, best) = grid_then_brent(|z| ll(expit(z)), logit(lo), logit(hi), 41, 1e-12)?;
            let t = expit(z).clamp(lo, hi);
            return Ok(vec![if best >= ll(current) { t } else { current }]);
        }
    };
    if theta.is_nan() {
        return Err(Error::BracketFailure { lo, hi });
    }
    Ok(vec![theta.clamp(lo, hi)])
}
