//! Parameter grids shared by the integration tests.

#![allow(dead_code)]

pub mod estep_oracle;

use alsm::{ALSMParams, ModelTag};

/// Three θ values per family, spanning light to heavy mixing.
pub fn theta_grid(tag: ModelTag) -> Vec<Vec<f64>> {
    let one = |v: [f64; 3]| v.iter().map(|&t| vec![t]).collect();
    match tag {
        ModelTag::Al => vec![vec![]],
        ModelTag::TpAl => vec![vec![0.6, 2.0], vec![0.8, 5.0], vec![0.95, 20.0]],
        ModelTag::SeAl => one([0.2, 1.0, 5.0]),
        ModelTag::UgAl => one([0.1, 0.5, 2.0]),
        ModelTag::IgAl => one([0.1, 1.0, 5.0]),
        ModelTag::PfAl => one([0.5, 2.0, 10.0]),
        ModelTag::PAl => one([1.5, 3.0, 10.0]),
        ModelTag::UAl => one([0.2, 0.6, 0.95]),
        ModelTag::GAl => one([1.0, 5.0, 20.0]),
    }
}

/// Every mixture × κ ∈ {0.5, 1, 2} × its θ grid, at μ = 0, β = 1.
pub fn family_grid() -> Vec<ALSMParams> {
    let mut out = Vec::new();
    for tag in ModelTag::MIXTURES {
        for &kappa in &[0.5, 1.0, 2.0] {
            for theta in theta_grid(tag) {
                out.push(ALSMParams::from_tag(tag, 0.0, 1.0, kappa, &theta).unwrap());
            }
        }
    }
    out
}

/// A θ per family at which moments up to the eighth inverse order exist,
/// so that simulated skewness and kurtosis settle quickly.
pub fn moment_theta(tag: ModelTag) -> Vec<f64> {
    match tag {
        ModelTag::Al => vec![],
        ModelTag::TpAl => vec![0.85, 3.0],
        ModelTag::SeAl => vec![2.0],
        ModelTag::UgAl => vec![0.1],
        ModelTag::IgAl => vec![0.5],
        ModelTag::PfAl => vec![12.0],
        ModelTag::PAl => vec![3.0],
        ModelTag::UAl => vec![0.6],
        ModelTag::GAl => vec![30.0],
    }
}
