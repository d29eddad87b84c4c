//! Model comparison by AIC, BIC and likelihood-ratio tests against the AL.
//!
//! Information criteria use the minimized forms 2k − 2ℓ and k ln n − 2ℓ.
//! LR p-values use the plain χ² reference even where θ sits on the boundary
//! of its space under the null.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::alsm::{ALSMParams, MixingLaw, ModelTag};
use crate::error::{Error, Result};
use crate::fit::{fit, fit_al, FitConfig, FitResult, Init};
use crate::specfun::regularized_gamma_q;

/// Slack allowed when an alternative's log-likelihood falls below the null's.
pub const NESTING_SLACK: f64 = 1e-8;

/// Likelihood-ratio statistic and χ²(df) p-value.
pub fn lr_test(null_loglik: f64, alt_loglik: f64, df: u32) -> Result<(f64, f64)> {
    if df == 0 {
        return Err(Error::InvalidParameter("LR test needs df ≥ 1".into()));
    }
    if !(null_loglik.is_finite() && alt_loglik.is_finite()) {
        return Err(Error::InvalidParameter(
            "LR test needs finite log-likelihoods".into(),
        ));
    }
    if alt_loglik < null_loglik - NESTING_SLACK {
        return Err(Error::NestingViolation {
            null: null_loglik,
            alt: alt_loglik,
        });
    }
    let stat = (2.0 * (alt_loglik - null_loglik)).max(0.0);
    let p = regularized_gamma_q(0.5 * df as f64, 0.5 * stat)?;
    Ok((stat, p.clamp(0.0, 1.0)))
}

/// Non-AL reference models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    Normal,
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineFit {
    pub model: Baseline,
    /// Mean (normal) or median (Laplace).
    pub location: f64,
    /// ML variance (normal) or mean absolute deviation (Laplace).
    pub scale: f64,
    pub loglik: f64,
    pub k: usize,
}

/// Closed-form ML fits of the baselines.
pub fn baseline_fit(model: Baseline, data: &[f64]) -> Result<BaselineFit> {
    if data.len() < 2 || data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidData(
            "baseline fit needs at least 2 finite observations".into(),
        ));
    }
    let n = data.len() as f64;
    let (location, scale, loglik) = match model {
        Baseline::Normal => {
            let mean = data.iter().sum::<f64>() / n;
            let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
            if !(var > 0.0) {
                return Err(Error::DegenerateSupport);
            }
            (
                mean,
                var,
                -0.5 * n * ((2.0 * std::f64::consts::PI * var).ln() + 1.0),
            )
        }
        Baseline::Laplace => {
            let mut v = data.to_vec();
            v.sort_by(f64::total_cmp);
            let m = v.len();
            let med = if m % 2 == 1 {
                v[m / 2]
            } else {
                0.5 * (v[m / 2 - 1] + v[m / 2])
            };
            let b = data.iter().map(|x| (x - med).abs()).sum::<f64>() / n;
            if !(b > 0.0) {
                return Err(Error::DegenerateSupport);
            }
            (med, b, -n * ((2.0 * b).ln() + 1.0))
        }
    };
    Ok(BaselineFit {
        model,
        location,
        scale,
        loglik,
        k: 2,
    })
}

/// A model that can appear in a comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Candidate {
    Alsm(ModelTag),
    Baseline(Baseline),
}

impl Candidate {
    /// The eight mixtures, the AL, and both baselines.
    pub fn all() -> Vec<Candidate> {
        let mut v: Vec<Candidate> = ModelTag::ALL.iter().map(|&t| Candidate::Alsm(t)).collect();
        v.push(Candidate::Baseline(Baseline::Normal));
        v.push(Candidate::Baseline(Baseline::Laplace));
        v
    }

    /// Position in [`Candidate::all`], used to break ranking ties.
    fn canonical_index(self) -> usize {
        Candidate::all()
            .iter()
            .position(|&c| c == self)
            .expect("listed")
    }

    pub fn k(self) -> usize {
        match self {
            Candidate::Alsm(t) => t.n_params(),
            Candidate::Baseline(_) => 2,
        }
    }

    /// LR degrees of freedom against the AL, for models nesting it.
    pub fn lr_df(self) -> Option<u32> {
        match self {
            Candidate::Alsm(ModelTag::Al) | Candidate::Baseline(_) => None,
            Candidate::Alsm(t) => Some(t.n_theta() as u32),
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Candidate::Alsm(t) => write!(f, "{t}"),
            Candidate::Baseline(Baseline::Normal) => f.write_str("normal"),
            Candidate::Baseline(Baseline::Laplace) => f.write_str("laplace"),
        }
    }
}

impl FromStr for Candidate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "normal" => Ok(Candidate::Baseline(Baseline::Normal)),
            "laplace" => Ok(Candidate::Baseline(Baseline::Laplace)),
            other => other.parse::<ModelTag>().map(Candidate::Alsm),
        }
    }
}

impl Serialize for Candidate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One row of a comparison table. Failed fits keep `note` and leave the
/// numeric fields empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelScore {
    pub model: Candidate,
    pub k: usize,
    pub loglik: Option<f64>,
    pub aic: Option<f64>,
    pub rank_aic: Option<usize>,
    pub bic: Option<f64>,
    pub rank_bic: Option<usize>,
    pub lr_stat: Option<f64>,
    pub lr_df: Option<u32>,
    pub lr_pvalue: Option<f64>,
    #[serde(skip)]
    pub converged: bool,
    #[serde(skip)]
    pub params: Option<ALSMParams>,
    pub note: Option<String>,
}

/// θ close to the AL end of each family, for restarts.
fn al_proximal_theta(tag: ModelTag) -> Vec<f64> {
    match tag {
        ModelTag::Al => vec![],
        ModelTag::TpAl => vec![0.99, 1.5],
        ModelTag::SeAl | ModelTag::PfAl | ModelTag::PAl => vec![100.0],
        ModelTag::UgAl | ModelTag::IgAl | ModelTag::UAl => vec![0.01],
        ModelTag::GAl => vec![200.0],
    }
}

/// Fit a mixture and, if it ends below the AL fit, restart from the default
/// start and from the AL estimate with a nearly degenerate mixing law.
fn fit_nested(
    tag: ModelTag,
    data: &[f64],
    cfg: &FitConfig,
    al: Option<&FitResult>,
) -> Result<FitResult> {
    let first = fit(tag, data, cfg);
    let Some(al) = al else { return first };
    if first
        .as_ref()
        .is_ok_and(|r| r.loglik >= al.loglik - NESTING_SLACK)
    {
        return first;
    }
    let mut starts = Vec::new();
    if cfg.init != Init::Default {
        starts.push(Init::Default);
    }
    if let Ok(mixing) = MixingLaw::from_tag(tag, &al_proximal_theta(tag)) {
        starts.push(Init::Fixed(ALSMParams {
            al: al.params.al,
            mixing,
        }));
    }
    let mut best = first;
    for init in starts {
        let r = fit(tag, data, &FitConfig { init, ..*cfg });
        best = match (best, r) {
            (Ok(a), Ok(b)) => Ok(if b.loglik > a.loglik { b } else { a }),
            (Err(_), Ok(b)) => Ok(b),
            (a, Err(_)) => a,
        };
        if best
            .as_ref()
            .is_ok_and(|r| r.loglik >= al.loglik - NESTING_SLACK)
        {
            break;
        }
    }
    best
}

enum Outcome {
    Fit(FitResult),
    Baseline(BaselineFit),
}

fn rank(
    scores: &mut [ModelScore],
    key: impl Fn(&ModelScore) -> Option<f64>,
    set: impl Fn(&mut ModelScore, usize),
) {
    let mut idx: Vec<usize> = (0..scores.len())
        .filter(|&i| key(&scores[i]).is_some())
        .collect();
    idx.sort_by(|&i, &j| {
        key(&scores[i])
            .unwrap()
            .total_cmp(&key(&scores[j]).unwrap())
            .then(
                scores[i]
                    .model
                    .canonical_index()
                    .cmp(&scores[j].model.canonical_index()),
            )
    });
    for (r, i) in idx.into_iter().enumerate() {
        set(&mut scores[i], r + 1);
    }
}

/// Fit every candidate and assemble the ranked table in input order.
/// Per-model failures are recorded in the row's note.
pub fn compare(data: &[f64], models: &[Candidate], cfg: &FitConfig) -> Result<Vec<ModelScore>> {
    if models.is_empty() {
        return Err(Error::InvalidParameter("no models to compare".into()));
    }
    if data.len() < 5 || data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidData(
            "comparison needs at least 5 finite observations".into(),
        ));
    }
    let n = data.len() as f64;
    let al = fit_al(data, cfg);
    let al_ok = al.as_ref().ok();

    let outcomes: Vec<Result<Outcome>> = models
        .par_iter()
        .map(|&c| match c {
            Candidate::Alsm(ModelTag::Al) => al.clone().map(Outcome::Fit),
            Candidate::Alsm(t) => fit_nested(t, data, cfg, al_ok).map(Outcome::Fit),
            Candidate::Baseline(b) => baseline_fit(b, data).map(Outcome::Baseline),
        })
        .collect();

    let mut rows: Vec<ModelScore> = models
        .iter()
        .zip(outcomes)
        .map(|(&model, out)| {
            let k = model.k();
            let mut row = ModelScore {
                model,
                k,
                loglik: None,
                aic: None,
                rank_aic: None,
                bic: None,
                rank_bic: None,
                lr_stat: None,
                lr_df: None,
                lr_pvalue: None,
                converged: true,
                params: None,
                note: None,
            };
            let ll = match out {
                Err(e) => {
                    row.note = Some(format!("fit failed: {e}"));
                    return row;
                }
                Ok(Outcome::Baseline(b)) => b.loglik,
                Ok(Outcome::Fit(f)) => {
                    row.converged = f.converged;
                    row.params = Some(f.params);
                    if !f.converged {
                        row.note = Some(format!("not converged after {} iterations", f.n_iter));
                    }
                    f.loglik
                }
            };
            let kf = k as f64;
            row.loglik = Some(ll);
            row.aic = Some(2.0 * kf - 2.0 * ll);
            row.bic = Some(kf * n.ln() - 2.0 * ll);
            if let (Some(df), Some(null)) = (model.lr_df(), al_ok) {
                match lr_test(null.loglik, ll, df) {
                    Ok((stat, p)) => {
                        row.lr_stat = Some(stat);
                        row.lr_df = Some(df);
                        row.lr_pvalue = Some(p);
                    }
                    Err(e) => {
                        let msg = format!("LR test skipped: {e}");
                        row.note = Some(match row.note.take() {
                            Some(prev) => format!("{prev}; {msg}"),
                            None => msg,
                        });
                    }
                }
            }
            row
        })
        .collect();
    rank(&mut rows, |r| r.aic, |r, k| r.rank_aic = Some(k));
    rank(&mut rows, |r| r.bic, |r, k| r.rank_bic = Some(k));
    Ok(rows)
}

fn cell<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with a fixed column order and a trailing `note` column.
pub fn scores_to_csv(rows: &[ModelScore]) -> String {
    let mut out =
        String::from("model,k,loglik,aic,rank_aic,bic,rank_bic,lr_stat,lr_df,lr_pvalue,note\n");
    for r in rows {
        let note = r.note.as_deref().unwrap_or("");
        let note = if note.contains([',', '"', '\n']) {
            format!("\"{}\"", note.replace('"', "\"\""))
        } else {
            note.to_string()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.model,
            r.k,
            cell(&r.loglik),
            cell(&r.aic),
            cell(&r.rank_aic),
            cell(&r.bic),
            cell(&r.rank_bic),
            cell(&r.lr_stat),
            cell(&r.lr_df),
            cell(&r.lr_pvalue),
            note
        ));
    }
    out
}

pub fn scores_to_json(rows: &[ModelScore]) -> String {
    serde_json::to_string_pretty(rows).expect("scores always serialize")
}
