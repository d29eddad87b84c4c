//! The ALSM family: `X = μ + β Y / W` with `Y ~ AL(0, 1, κ)` and `W` from a
//! mixing law. All variants share one dispatch surface so fitting and model
//! selection iterate over the family uniformly.

mod density;
mod moments;
mod sample;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ald::ALParams;
use crate::error::{Error, Result};

pub use density::{
    alsm_loglik, alsm_logpdf, alsm_mode, alsm_pdf, alsm_pdf_numeric, mixing_logpdf,
    tp_posterior_good,
};
pub use moments::{alsm_abs_moment, alsm_moments, inv_w_moment, p_r, MixtureMoments};
pub use sample::{alsm_sample, mixing_sample};

pub(crate) use density::{ln_power_integral, ln_tp_components};

/// Distribution of the mixing variable W and its tailedness parameter(s).
///
/// `Degenerate` (W ≡ 1) is the plain AL law, kept in the same enum so the
/// nested null model flows through the same code paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixingLaw {
    Degenerate,
    TwoPoint { theta1: f64, theta2: f64 },
    ShiftedExp { theta: f64 },
    UnimodalGamma { theta: f64 },
    InverseGaussian { theta: f64 },
    PowerFunction { theta: f64 },
    Pareto { theta: f64 },
    UniformTail { theta: f64 },
    GammaApp { theta: f64 },
}

/// Short model names used on the command line and in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelTag {
    #[serde(rename = "al")]
    Al,
    #[serde(rename = "tp-al")]
    TpAl,
    #[serde(rename = "se-al")]
    SeAl,
    #[serde(rename = "ug-al")]
    UgAl,
    #[serde(rename = "ig-al")]
    IgAl,
    #[serde(rename = "pf-al")]
    PfAl,
    #[serde(rename = "p-al")]
    PAl,
    #[serde(rename = "u-al")]
    UAl,
    #[serde(rename = "g-al")]
    GAl,
}

impl ModelTag {
    pub const ALL: [ModelTag; 9] = [
        ModelTag::Al,
        ModelTag::TpAl,
        ModelTag::SeAl,
        ModelTag::UgAl,
        ModelTag::IgAl,
        ModelTag::PfAl,
        ModelTag::PAl,
        ModelTag::UAl,
        ModelTag::GAl,
    ];

    /// The eight mixture models, excluding the nested AL.
    pub const MIXTURES: [ModelTag; 8] = [
        ModelTag::TpAl,
        ModelTag::SeAl,
        ModelTag::UgAl,
        ModelTag::IgAl,
        ModelTag::PfAl,
        ModelTag::PAl,
        ModelTag::UAl,
        ModelTag::GAl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Al => "al",
            ModelTag::TpAl => "tp-al",
            ModelTag::SeAl => "se-al",
            ModelTag::UgAl => "ug-al",
            ModelTag::IgAl => "ig-al",
            ModelTag::PfAl => "pf-al",
            ModelTag::PAl => "p-al",
            ModelTag::UAl => "u-al",
            ModelTag::GAl => "g-al",
        }
    }

    /// Number of tailedness parameters.
    pub fn n_theta(self) -> usize {
        match self {
            ModelTag::Al => 0,
            ModelTag::TpAl => 2,
            _ => 1,
        }
    }

    /// Total free parameters (μ, β, κ plus θ).
    pub fn n_params(self) -> usize {
        3 + self.n_theta()
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

fn check_theta(name: &str, theta: f64, ok: bool) -> Result<()> {
    if !theta.is_finite() || !ok {
        return Err(Error::InvalidParameter(format!(
            "{name}: theta = {theta} outside its admissible region"
        )));
    }
    Ok(())
}

impl MixingLaw {
    /// Build the mixing law for `tag` from its θ vector, validating the ranges.
    pub fn from_tag(tag: ModelTag, theta: &[f64]) -> Result<Self> {
        if theta.len() != tag.n_theta() {
            return Err(Error::InvalidParameter(format!(
                "{tag} takes {} theta value(s), got {}",
                tag.n_theta(),
                theta.len()
            )));
        }
        let law = match tag {
            ModelTag::Al => MixingLaw::Degenerate,
            ModelTag::TpAl => MixingLaw::TwoPoint {
                theta1: theta[0],
                theta2: theta[1],
            },
            ModelTag::SeAl => MixingLaw::ShiftedExp { theta: theta[0] },
            ModelTag::UgAl => MixingLaw::UnimodalGamma { theta: theta[0] },
            ModelTag::IgAl => MixingLaw::InverseGaussian { theta: theta[0] },
            ModelTag::PfAl => MixingLaw::PowerFunction { theta: theta[0] },
            ModelTag::PAl => MixingLaw::Pareto { theta: theta[0] },
            ModelTag::UAl => MixingLaw::UniformTail { theta: theta[0] },
            ModelTag::GAl => MixingLaw::GammaApp { theta: theta[0] },
        };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MixingLaw::Degenerate => Ok(()),
            MixingLaw::TwoPoint { theta1, theta2 } => {
                check_theta("tp-al theta1", theta1, theta1 > 0.5 && theta1 < 1.0)?;
                check_theta("tp-al theta2", theta2, theta2 > 1.0)
            }
            MixingLaw::UniformTail { theta } => {
                check_theta("u-al", theta, theta > 0.0 && theta < 1.0)
            }
            _ => {
                let theta = self.theta()[0];
                check_theta(self.tag().as_str(), theta, theta > 0.0)
            }
        }
    }

    pub fn tag(&self) -> ModelTag {
        match self {
            MixingLaw::Degenerate => ModelTag::Al,
            MixingLaw::TwoPoint { .. } => ModelTag::TpAl,
            MixingLaw::ShiftedExp { .. } => ModelTag::SeAl,
            MixingLaw::UnimodalGamma { .. } => ModelTag::UgAl,
            MixingLaw::InverseGaussian { .. } => ModelTag::IgAl,
            MixingLaw::PowerFunction { .. } => ModelTag::PfAl,
            MixingLaw::Pareto { .. } => ModelTag::PAl,
            MixingLaw::UniformTail { .. } => ModelTag::UAl,
            MixingLaw::GammaApp { .. } => ModelTag::GAl,
        }
    }

    pub fn theta(&self) -> Vec<f64> {
        match *self {
            MixingLaw::Degenerate => vec![],
            MixingLaw::TwoPoint { theta1, theta2 } => vec![theta1, theta2],
            MixingLaw::ShiftedExp { theta }
            | MixingLaw::UnimodalGamma { theta }
            | MixingLaw::InverseGaussian { theta }
            | MixingLaw::PowerFunction { theta }
            | MixingLaw::Pareto { theta }
            | MixingLaw::UniformTail { theta }
            | MixingLaw::GammaApp { theta } => vec![theta],
        }
    }

    /// Support (lo, hi) of W; the two-point law reports its two atoms.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            MixingLaw::Degenerate => (1.0, 1.0),
            MixingLaw::TwoPoint { theta2, .. } => (1.0 / theta2, 1.0),
            MixingLaw::ShiftedExp { .. } | MixingLaw::Pareto { .. } => (1.0, f64::INFINITY),
            MixingLaw::PowerFunction { .. } => (0.0, 1.0),
            MixingLaw::UniformTail { theta } => (1.0 - theta, 1.0),
            MixingLaw::UnimodalGamma { .. }
            | MixingLaw::InverseGaussian { .. }
            | MixingLaw::GammaApp { .. } => (0.0, f64::INFINITY),
        }
    }
}

/// Full ALSM parameter vector (μ, β, κ, θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsJson", into = "ParamsJson")]
pub struct ALSMParams {
    pub al: ALParams,
    pub mixing: MixingLaw,
}

impl ALSMParams {
    pub fn new(al: ALParams, mixing: MixingLaw) -> Result<Self> {
        al.validate()?;
        mixing.validate()?;
        Ok(Self { al, mixing })
    }

    pub fn from_tag(tag: ModelTag, mu: f64, beta: f64, kappa: f64, theta: &[f64]) -> Result<Self> {
        Self::new(
            ALParams::new(mu, beta, kappa)?,
            MixingLaw::from_tag(tag, theta)?,
        )
    }

    pub fn al_only(al: ALParams) -> Self {
        Self {
            al,
            mixing: MixingLaw::Degenerate,
        }
    }

    pub fn tag(&self) -> ModelTag {
        self.mixing.tag()
    }

    pub fn validate(&self) -> Result<()> {
        self.al.validate()?;
        self.mixing.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("parameters always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    model: ModelTag,
    mu: f64,
    beta: f64,
    kappa: f64,
    theta: Vec<f64>,
}

impl From<ALSMParams> for ParamsJson {
    fn from(p: ALSMParams) -> Self {
        ParamsJson {
            model: p.tag(),
            mu: p.al.mu,
            beta: p.al.beta,
            kappa: p.al.kappa,
            theta: p.mixing.theta(),
        }
    }
}

impl TryFrom<ParamsJson> for ALSMParams {
    type Error = Error;

    fn try_from(j: ParamsJson) -> Result<Self> {
        ALSMParams::from_tag(j.model, j.mu, j.beta, j.kappa, &j.theta)
    }
}
