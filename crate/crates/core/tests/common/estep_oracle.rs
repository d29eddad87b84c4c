//! E-step expectations recomputed by quadrature against the posterior
//! w e^{-δw} h(w) of the mixing variable.

use alsm::ald::{al_pdf, delta, ALParams};
use alsm::alsm::mixing_logpdf;
use alsm::fit::posterior;
use alsm::specfun::{adaptive_quadrature_with_breaks, QuadratureConfig};
use alsm::{seeded_rng, ALSMParams, MixingLaw, ModelTag};
use rand::Rng;

pub fn oracle_cfg() -> QuadratureConfig {
    QuadratureConfig::new(1e-14, 1e-12, 5000).unwrap()
}

/// Random θ for a probe, log-uniform over a range covering light and heavy mixing.
pub fn random_theta<R: Rng>(tag: ModelTag, rng: &mut R) -> Vec<f64> {
    let mut lu = |lo: f64, hi: f64| (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp();
    match tag {
        ModelTag::Al => vec![],
        ModelTag::TpAl => vec![0.55 + 0.44 * lu(0.01, 1.0), lu(1.2, 30.0)],
        ModelTag::SeAl => vec![lu(0.1, 10.0)],
        ModelTag::UgAl => vec![lu(0.05, 3.0)],
        ModelTag::IgAl => vec![lu(0.05, 5.0)],
        ModelTag::PfAl => vec![lu(0.3, 20.0)],
        ModelTag::PAl => vec![lu(1.2, 15.0)],
        ModelTag::UAl => vec![lu(0.05, 0.98)],
        ModelTag::GAl => vec![lu(0.5, 40.0)],
    }
}

/// E[g(W) | δ] from the posterior w e^{-δw} h(w) by quadrature in y = ln w.
pub fn posterior_mean(m: &MixingLaw, d: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (lo, hi) = m.support();
    let lk = |w: f64| w.ln() - d * w + mixing_logpdf(w, m);
    let (ylo, yhi) = (lo.ln(), hi.ln());
    // Locate the posterior peak on a coarse grid to set breaks and an offset.
    let (a, b) = (ylo.max(-60.0), yhi.min(60.0));
    let mut peak = (a, f64::NEG_INFINITY);
    for i in 0..=2000 {
        let y = a + (b - a) * i as f64 / 2000.0;
        let v = lk(y.exp()) + y;
        if v > peak.1 {
            peak = (y, v);
        }
    }
    let dens = |y: f64| {
        let w = y.exp();
        let v = (lk(w) + y - peak.1).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let breaks: Vec<f64> = [-3.0, -1.0, 0.0, 1.0, 3.0]
        .iter()
        .map(|o| peak.0 + o)
        .filter(|&y| y > ylo && y < yhi)
        .collect();
    let cfg = oracle_cfg();
    let z = adaptive_quadrature_with_breaks(dens, ylo, yhi, &breaks, &cfg).unwrap();
    let moment = |y: f64| {
        let v = dens(y);
        if v == 0.0 {
            0.0
        } else {
            g(y.exp()) * v
        }
    };
    adaptive_quadrature_with_breaks(moment, ylo, yhi, &breaks, &cfg).unwrap() / z
}

/// Relative error with a floor of 1e-3 on the reference magnitude.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-3)
}

/// Compare every populated posterior field against quadrature on `probes`
/// random (x, params) draws per mixture. Returns the worst relative error
/// and where it occurred.
pub fn estep_worst_error(seed: u64, probes: usize) -> (f64, String) {
    let mut rng = seeded_rng(seed);
    let mut worst = (0.0, String::new());
    let mut check = |got: f64, want: f64, what: String| {
        let e = rel_err(got, want);
        if e.is_nan() || e > worst.0 {
            worst = (e, format!("{what}: got {got}, want {want}"));
        }
    };
    for tag in ModelTag::MIXTURES {
        for probe in 0..probes {
            let theta = random_theta(tag, &mut rng);
            let kappa = (rng.random::<f64>() * 2.0 - 1.0).exp();
            let beta = 0.5 + 1.5 * rng.random::<f64>();
            let mu = rng.random::<f64>() * 2.0 - 1.0;
            let p = ALSMParams::from_tag(tag, mu, beta, kappa, &theta).unwrap();
            let x = mu + beta * (16.0 * rng.random::<f64>() - 8.0);
            let d = delta(x, &p.al);
            let post = posterior(d, &p.mixing).unwrap();
            let what = format!("{tag} probe {probe} θ={theta:?} δ={d}");
            if let MixingLaw::TwoPoint { theta1, theta2 } = p.mixing {
                // direct Bayes rule on the two AL components
                let good = theta1 * al_pdf(x, &p.al);
                let wide = ALParams {
                    beta: beta * theta2,
                    ..p.al
                };
                let bad = (1.0 - theta1) * al_pdf(x, &wide);
                let v = good / (good + bad);
                check(post.v.unwrap(), v, format!("{what} v"));
                check(post.w, v + (1.0 - v) / theta2, format!("{what} w"));
                continue;
            }
            check(
                post.w,
                posterior_mean(&p.mixing, d, |w| w),
                format!("{what} w"),
            );
            if let Some(lw) = post.log_w {
                check(
                    lw,
                    posterior_mean(&p.mixing, d, f64::ln),
                    format!("{what} log w"),
                );
            }
            if let Some(iw) = post.inv_w {
                check(
                    iw,
                    posterior_mean(&p.mixing, d, |w| 1.0 / w),
                    format!("{what} 1/w"),
                );
            }
        }
    }
    worst
}
