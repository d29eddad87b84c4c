//! Starting values: the method of moments and a fixed AL-proximal default.

use crate::ald::ALParams;
use crate::alsm::{alsm_moments, ALSMParams, ModelTag};
use crate::error::{Error, Result};

use super::optim::levenberg_marquardt2;

/// Mean, variance (n − 1 denominator), skewness and raw kurtosis, the last two
/// standardized by the n − 1 standard deviation.
pub fn sample_shape(data: &[f64]) -> (f64, f64, f64, f64) {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in data {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let var = m2 / (n - 1.0);
    let sd = var.sqrt();
    (mean, var, m3 / (n * sd.powi(3)), m4 / (n * var * var))
}

fn median(data: &[f64]) -> f64 {
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// θ₀ used by [`default_init`].
pub fn default_theta(tag: ModelTag) -> Vec<f64> {
    match tag {
        ModelTag::Al => vec![],
        ModelTag::TpAl => vec![0.9, 3.0],
        ModelTag::SeAl => vec![5.0],
        ModelTag::UgAl => vec![0.2],
        ModelTag::IgAl => vec![0.5],
        ModelTag::PfAl => vec![10.0],
        ModelTag::PAl => vec![10.0],
        ModelTag::UAl => vec![0.5],
        ModelTag::GAl => vec![20.0],
    }
}

/// Median for μ, κ = 1, mean absolute deviation for β, and a mildly mixed θ.
pub fn default_init(tag: ModelTag, data: &[f64]) -> Result<ALSMParams> {
    if data.is_empty() {
        return Err(Error::InvalidData("empty sample".into()));
    }
    let mu = median(data);
    let beta = data.iter().map(|x| (x - mu).abs()).sum::<f64>() / data.len() as f64;
    if !(beta > 0.0) {
        return Err(Error::DegenerateSupport);
    }
    ALSMParams::from_tag(tag, mu, beta, 1.0, &default_theta(tag))
}

/// Result of [`method_of_moments_init`]; `solved` is false when the moment
/// equations had no solution and the default start was returned instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentsInit {
    pub params: ALSMParams,
    pub solved: bool,
}

/// Unconstrained coordinate z ↦ θ vector, restricted to where the
/// fourth moment exists. TP-AL holds θ₁ at its default and solves for θ₂.
fn theta_of(tag: ModelTag, z: f64) -> Vec<f64> {
    let e = z.exp();
    match tag {
        ModelTag::Al => vec![],
        ModelTag::TpAl => vec![0.9, 1.0 + e],
        ModelTag::SeAl | ModelTag::IgAl => vec![e],
        ModelTag::UgAl => vec![1.0 / (3.0 * (1.0 + 1.0 / e))],
        ModelTag::PfAl => vec![4.0 + e],
        ModelTag::PAl => vec![1.0 + e],
        ModelTag::UAl => vec![1.0 / (1.0 + 1.0 / e)],
        ModelTag::GAl => vec![8.0 + e],
    }
}

/// Solve sample skewness = model skewness and sample kurtosis = model
/// kurtosis for (κ, θ) from a small grid of starts, then match the variance
/// for β and the mean for μ.
pub fn method_of_moments_init(tag: ModelTag, data: &[f64]) -> Result<MomentsInit> {
    if data.len() < 5 {
        return Err(Error::InvalidData(format!(
            "need at least 5 observations, got {}",
            data.len()
        )));
    }
    let fallback = || {
        default_init(tag, data).map(|params| MomentsInit {
            params,
            solved: false,
        })
    };
    if tag == ModelTag::Al {
        return fallback();
    }
    let (mean, var, skew, kurt) = sample_shape(data);
    if !(var > 0.0 && kurt.is_finite()) {
        return fallback();
    }
    let shape_at = |u: f64, z: f64| -> Option<(ALSMParams, f64, f64, f64, f64)> {
        let p = ALSMParams::from_tag(tag, 0.0, 1.0, u.exp(), &theta_of(tag, z)).ok()?;
        let m = alsm_moments(&p);
        Some((p, m.mean?, m.variance?, m.skewness?, m.kurtosis?))
    };
    let resid = |x: [f64; 2]| {
        let (_, _, _, s, k) = shape_at(x[0], x[1])?;
        let r = [s - skew, (k - kurt) / kurt];
        (r[0].is_finite() && r[1].is_finite()).then_some(r)
    };
    let mut best: Option<([f64; 2], f64)> = None;
    for &u0 in &[0.0, -0.4, 0.4] {
        for &z0 in &[-2.0, 0.0, 2.0] {
            if let Some((x, r)) = levenberg_marquardt2(resid, [u0, z0], 100) {
                if best.is_none_or(|(_, rb)| r < rb) {
                    best = Some((x, r));
                }
            }
        }
        if best.is_some_and(|(_, r)| r < 1e-8) {
            break;
        }
    }
    let Some((x, r)) = best else {
        return fallback();
    };
    if r > 1e-6 {
        return fallback();
    }
    let Some((p, m1, v1, _, _)) = shape_at(x[0], x[1]) else {
        return fallback();
    };
    let beta = (var / v1).sqrt();
    let al = ALParams::new(mean - beta * m1, beta, p.al.kappa);
    match al.and_then(|al| ALSMParams::new(al, p.mixing)) {
        Ok(params) => Ok(MomentsInit {
            params,
            solved: true,
        }),
        Err(_) => fallback(),
    }
}
