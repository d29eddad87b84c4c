//! Maximum-likelihood fitting.
//!
//! Every model alternates an E-step (posterior expectations of the mixing
//! variable), the weighted (μ, β, κ) maximization of [`maximize_q1`], and a
//! θ-update. TP-AL runs as ECM (θ₁ updated with the location/scale block,
//! θ₂ after it) and U-AL as ECME (θ maximizes the observed likelihood).

mod estep;
mod init;
mod mstep;
mod optim;
mod q1;

pub use estep::{estep, posterior, EStepWeights, Posterior};
pub use init::{default_init, default_theta, method_of_moments_init, sample_shape, MomentsInit};
pub use mstep::{default_theta_bounds, mstep_theta, q2};
pub use q1::{maximize_q1, Q1Scan};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::ald::al_fit;
use crate::alsm::{alsm_loglik, ALSMParams, MixingLaw, ModelTag};
use crate::error::{Error, Result};

/// Where EM starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init {
    /// Method of moments, falling back to [`Init::Default`] when unsolvable.
    Moments,
    Fixed(ALSMParams),
    /// See [`default_init`].
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub max_iter: usize,
    pub loglik_rel_tol: f64,
    pub init: Init,
    /// Overrides [`default_theta_bounds`] for the fitted model.
    pub theta_bounds: Option<(f64, f64)>,
    /// After each EM step, try moving further along the step direction in
    /// (β, κ, θ); a longer step is kept only if it raises the likelihood.
    pub accelerate: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            loglik_rel_tol: 1e-8,
            init: Init::Default,
            theta_bounds: None,
            accelerate: true,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if !(self.loglik_rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "loglik_rel_tol must be positive".into(),
            ));
        }
        if let Some((lo, hi)) = self.theta_bounds {
            if !(lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "empty theta bounds [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: ALSMParams,
    pub loglik: f64,
    pub n_iter: usize,
    pub converged: bool,
    /// Observed log-likelihood at the start and after every iteration.
    pub loglik_trace: Vec<f64>,
}

impl FitResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit results always serialize")
    }
}

impl Serialize for FitResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FitResult", 6)?;
        st.serialize_field("model", &self.params.tag())?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("loglik", &self.loglik)?;
        st.serialize_field("n_iter", &self.n_iter)?;
        st.serialize_field("converged", &self.converged)?;
        st.serialize_field("trace", &self.loglik_trace)?;
        st.end()
    }
}

fn check_data(data: &[f64], min_n: usize) -> Result<()> {
    if data.len() < min_n {
        return Err(Error::InvalidData(format!(
            "need at least {min_n} observations, got {}",
            data.len()
        )));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidData("data contain non-finite values".into()));
    }
    Ok(())
}

/// Both ends of user-supplied θ bounds must be admissible for `tag`.
fn check_bounds(tag: ModelTag, bounds: Option<(f64, f64)>) -> Result<()> {
    let Some((lo, hi)) = bounds else {
        return Ok(());
    };
    for t in [lo, hi] {
        let theta = if tag == ModelTag::TpAl {
            vec![0.75, t]
        } else {
            vec![t]
        };
        MixingLaw::from_tag(tag, &theta).map_err(|_| {
            Error::InvalidParameter(format!(
                "theta bounds [{lo}, {hi}] are outside the {tag} domain"
            ))
        })?;
    }
    Ok(())
}

/// The AL null model in the shape of a [`FitResult`].
pub fn fit_al(data: &[f64], _cfg: &FitConfig) -> Result<FitResult> {
    let (al, loglik) = al_fit(data)?;
    Ok(FitResult {
        params: ALSMParams::al_only(al),
        loglik,
        n_iter: 1,
        converged: true,
        loglik_trace: vec![loglik],
    })
}

/// TP-AL weights for the (μ, β, κ) step, v + (1 − v)/θ₂, written so that
/// θ₂ = 1 gives exactly 1.
pub fn tp_q1_weights(v: &[f64], theta2: f64) -> Vec<f64> {
    let shrink = 1.0 - 1.0 / theta2;
    v.iter().map(|&vi| 1.0 - (1.0 - vi) * shrink).collect()
}

/// One EM / ECM / ECME iteration from `p`.
fn iterate(
    scan: &Q1Scan,
    data: &[f64],
    p: &ALSMParams,
    bounds: Option<(f64, f64)>,
) -> Result<ALSMParams> {
    let wts = estep(p, data)?;
    let tag = p.tag();
    let mut next = *p;
    next.al = match p.mixing {
        MixingLaw::TwoPoint { theta2, .. } => {
            let v = wts.v.as_deref().expect("two-point E-step fills v");
            scan.maximize(&tp_q1_weights(v, theta2))?
        }
        _ => scan.maximize(&wts.w)?,
    };
    let theta = mstep_theta(tag, &wts, data, &next, bounds)?;
    next.mixing = MixingLaw::from_tag(tag, &theta)?;
    Ok(next)
}

/// Unconstrained coordinates of (β, κ, θ) and back.
fn to_free(p: &ALSMParams) -> Vec<f64> {
    let mut v = vec![p.al.beta.ln(), p.al.kappa.ln()];
    v.extend(match p.mixing {
        MixingLaw::TwoPoint { theta1, theta2 } => {
            vec![((theta1 - 0.5) / (1.0 - theta1)).ln(), (theta2 - 1.0).ln()]
        }
        MixingLaw::Pareto { theta } => vec![(theta - 1.0).ln()],
        MixingLaw::UniformTail { theta } => vec![(theta / (1.0 - theta)).ln()],
        m => m.theta().iter().map(|t| t.ln()).collect(),
    });
    v
}

fn from_free(template: &ALSMParams, v: &[f64], bounds: (f64, f64)) -> Result<ALSMParams> {
    let tag = template.tag();
    let (lo, hi) = bounds;
    let theta: Vec<f64> = match tag {
        ModelTag::TpAl => {
            let t1 = 0.5 + 0.5 / (1.0 + (-v[2]).exp());
            vec![
                t1.clamp(0.5 + 1e-9, 1.0 - 1e-9),
                (1.0 + v[3].exp()).clamp(lo, hi),
            ]
        }
        ModelTag::PAl => vec![(1.0 + v[2].exp()).clamp(lo, hi)],
        ModelTag::UAl => vec![(1.0 / (1.0 + (-v[2]).exp())).clamp(lo, hi)],
        _ => v[2..].iter().map(|z| z.exp().clamp(lo, hi)).collect(),
    };
    ALSMParams::from_tag(tag, template.al.mu, v[0].exp(), v[1].exp(), &theta)
}

/// Doubling line search along `next - prev`, starting from the EM point.
fn extrapolate(
    data: &[f64],
    prev: &ALSMParams,
    next: ALSMParams,
    ll_next: f64,
    bounds: (f64, f64),
) -> (ALSMParams, f64) {
    let (a, b) = (to_free(prev), to_free(&next));
    let mut best = (next, ll_next);
    let mut step = 2.0;
    while step <= 64.0 {
        let v: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + step * (y - x)).collect();
        let Ok(cand) = from_free(&next, &v, bounds) else {
            break;
        };
        let ll = alsm_loglik(data, &cand);
        if !(ll > best.1) {
            break;
        }
        best = (cand, ll);
        step *= 2.0;
    }
    best
}

/// Fit `tag` to `data` by maximum likelihood.
pub fn fit(tag: ModelTag, data: &[f64], cfg: &FitConfig) -> Result<FitResult> {
    cfg.validate()?;
    check_data(data, 5)?;
    if tag == ModelTag::Al {
        return fit_al(data, cfg);
    }
    check_bounds(tag, cfg.theta_bounds)?;
    let mut p = match cfg.init {
        Init::Fixed(p) if p.tag() == tag => p,
        Init::Fixed(p) => {
            return Err(Error::InvalidParameter(format!(
                "initial parameters are {}, fitting {tag}",
                p.tag()
            )))
        }
        Init::Moments => method_of_moments_init(tag, data)?.params,
        Init::Default => default_init(tag, data)?,
    };
    let scan = Q1Scan::new(data)?;
    let mut ll = alsm_loglik(data, &p);
    if !ll.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "log-likelihood {ll} at the initial parameters"
        )));
    }
    let mut trace = vec![ll];
    let mut converged = false;
    let mut n_iter = 0;
    while n_iter < cfg.max_iter {
        n_iter += 1;
        let em = iterate(&scan, data, &p, cfg.theta_bounds)?;
        let mut next = alsm_loglik(data, &em);
        // Convergence is judged on the plain EM step, so an extrapolated
        // jump never hides a still-moving iteration.
        let change = (next - ll).abs() / (1.0 + next.abs());
        if cfg.accelerate && change >= cfg.loglik_rel_tol {
            let bounds = cfg
                .theta_bounds
                .unwrap_or_else(|| default_theta_bounds(tag));
            (p, next) = extrapolate(data, &p, em, next, bounds);
        } else {
            p = em;
        }
        trace.push(next);
        ll = next;
        if change < cfg.loglik_rel_tol {
            converged = true;
            break;
        }
    }
    Ok(FitResult {
        params: p,
        loglik: ll,
        n_iter,
        converged,
        loglik_trace: trace,
    })
}
