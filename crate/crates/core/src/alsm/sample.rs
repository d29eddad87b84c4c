//! Samplers for the mixing laws and for X = μ + βY/W.

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, InverseGaussian};

use super::{ALSMParams, MixingLaw};
use crate::ald::standard_al_draw;

fn draw_w<R: Rng + ?Sized>(m: &MixingLaw, rng: &mut R) -> f64 {
    match *m {
        MixingLaw::Degenerate => 1.0,
        MixingLaw::TwoPoint { theta1, theta2 } => {
            if rng.random::<f64>() < theta1 {
                1.0
            } else {
                1.0 / theta2
            }
        }
        MixingLaw::ShiftedExp { theta } => {
            1.0 + Exp::new(theta).expect("validated rate").sample(rng)
        }
        MixingLaw::UnimodalGamma { theta } => Gamma::new(1.0 / theta + 1.0, theta)
            .expect("validated shape")
            .sample(rng),
        MixingLaw::InverseGaussian { theta } => {
            let c = (3.0 * theta + 1.0).sqrt();
            InverseGaussian::new(c, c * c / theta)
                .expect("validated")
                .sample(rng)
        }
        MixingLaw::PowerFunction { theta } => {
            let u: f64 = 1.0 - rng.random::<f64>();
            u.powf(1.0 / theta)
        }
        MixingLaw::Pareto { theta } => {
            let u: f64 = 1.0 - rng.random::<f64>();
            u.powf(-1.0 / theta)
        }
        MixingLaw::UniformTail { theta } => 1.0 - theta * rng.random::<f64>(),
        MixingLaw::GammaApp { theta } => Gamma::new(0.5 * theta, 2.0 / theta)
            .expect("validated shape")
            .sample(rng),
    }
}

/// `n` independent draws of W.
pub fn mixing_sample<R: Rng + ?Sized>(m: &MixingLaw, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| draw_w(m, rng)).collect()
}

/// `n` independent draws of X = μ + βY/W.
pub fn alsm_sample<R: Rng + ?Sized>(p: &ALSMParams, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let y = standard_al_draw(p.al.kappa, rng);
            let w = draw_w(&p.mixing, rng);
            p.al.mu + p.al.beta * y / w
        })
        .collect()
}
