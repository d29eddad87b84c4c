//! The scale-mixture family against its defining integrals.

mod common;

use alsm::ald::{al_moments, al_pdf, ALParams};
use alsm::alsm::{
    alsm_moments, alsm_pdf, alsm_pdf_numeric, alsm_sample, inv_w_moment, mixing_sample,
};
use alsm::specfun::{adaptive_quadrature_with_breaks, QuadratureConfig};
use alsm::{seeded_rng, ALSMParams, MixingLaw, ModelTag};
use common::{family_grid, moment_theta};

#[test]
fn densities_integrate_to_one() {
    let cfg = QuadratureConfig::new(1e-12, 1e-10, 2000).unwrap();
    for p in family_grid() {
        let f = |x: f64| alsm_pdf(x, &p);
        let v = adaptive_quadrature_with_breaks(
            f,
            f64::NEG_INFINITY,
            f64::INFINITY,
            &[0.0, -1.0, 1.0],
            &cfg,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-7, "{}: mass {v}", p.to_json());
    }
}

#[test]
fn closed_forms_match_the_mixture_integral() {
    let cfg = QuadratureConfig::new(1e-14, 1e-12, 2000).unwrap();
    for p in family_grid() {
        for i in 0..25 {
            let x = -6.0 + 12.0 * (i as f64 + 0.5) / 25.0;
            let closed = alsm_pdf(x, &p);
            let numeric = alsm_pdf_numeric(x, &p, &cfg).unwrap();
            assert!(
                (closed - numeric).abs() <= 1e-9,
                "{} at {x}: {closed} vs {numeric}",
                p.to_json()
            );
        }
    }
}

#[test]
fn degenerate_limits_reduce_to_al() {
    let limits: [(ModelTag, Vec<f64>); 8] = [
        (ModelTag::TpAl, vec![1.0 - 1e-9, 2.0]),
        (ModelTag::SeAl, vec![1e7]),
        (ModelTag::UgAl, vec![1e-7]),
        (ModelTag::IgAl, vec![1e-7]),
        (ModelTag::PfAl, vec![1e7]),
        (ModelTag::PAl, vec![1e7]),
        (ModelTag::UAl, vec![1e-7]),
        (ModelTag::GAl, vec![1e8]),
    ];
    for (tag, theta) in limits {
        for &kappa in &[0.5, 1.0, 2.0] {
            let p = ALSMParams::from_tag(tag, 0.2, 1.3, kappa, &theta).unwrap();
            for i in 0..=40 {
                let x = -8.0 + 0.4 * i as f64;
                let (a, b) = (alsm_pdf(x, &p), al_pdf(x, &p.al));
                assert!((a - b).abs() < 1e-5, "{tag} κ={kappa} x={x}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn kurtosis_is_bounded_below_by_al() {
    for p in family_grid() {
        if let Some(k) = alsm_moments(&p).kurtosis {
            let al = al_moments(&p.al).kurtosis;
            assert!(k >= al - 1e-9, "{}: {k} < {al}", p.to_json());
        }
    }
}

#[test]
fn al_only_params_reproduce_al_density() {
    let al = ALParams::new(0.1, 0.8, 1.7).unwrap();
    let p = ALSMParams::al_only(al);
    for i in 0..20 {
        let x = -3.0 + 0.3 * i as f64;
        assert_eq!(alsm_pdf(x, &p), al_pdf(x, &al));
    }
}

#[test]
fn inverse_moments_of_mixing_draws() {
    let n = 400_000;
    for tag in ModelTag::MIXTURES {
        let m = MixingLaw::from_tag(tag, &moment_theta(tag)).unwrap();
        let w = mixing_sample(&m, n, &mut seeded_rng(21));
        for r in 1..=2u32 {
            let want = inv_w_moment(&m, r).unwrap();
            let vals: Vec<f64> = w.iter().map(|x| x.powi(-(r as i32))).collect();
            let mean = vals.iter().sum::<f64>() / n as f64;
            let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
            let se = sd / (n as f64).sqrt();
            assert!(
                (mean - want).abs() < 4.0 * se + 1e-12,
                "{tag} r={r}: {mean} vs {want} (se {se})"
            );
        }
    }
}

#[test]
fn moments_match_simulation() {
    let n = 1_000_000;
    for tag in ModelTag::MIXTURES {
        let p = ALSMParams::from_tag(tag, 0.3, 1.2, 0.8, &moment_theta(tag)).unwrap();
        let x = alsm_sample(&p, n, &mut seeded_rng(8));
        let nf = n as f64;
        let mean = x.iter().sum::<f64>() / nf;
        let c = |k: i32| x.iter().map(|v| (v - mean).powi(k)).sum::<f64>() / nf;
        let (var, m3, m4) = (c(2), c(3), c(4));
        let m = alsm_moments(&p);
        let (mm, mv) = (m.mean.unwrap(), m.variance.unwrap());
        assert!(
            (mean - mm).abs() < 0.01 * mv.sqrt(),
            "{tag} mean {mean} vs {mm}"
        );
        assert!(
            (var / mv - 1.0).abs() < 0.02,
            "{tag} variance {var} vs {mv}"
        );
        let (sk, ku) = (m3 / var.powf(1.5), m4 / (var * var));
        let (msk, mku) = (m.skewness.unwrap(), m.kurtosis.unwrap());
        assert!(
            (sk - msk).abs() < 0.1 * msk.abs().max(0.5),
            "{tag} skewness {sk} vs {msk}"
        );
        assert!((ku / mku - 1.0).abs() < 0.1, "{tag} kurtosis {ku} vs {mku}");
    }
}

#[test]
fn json_round_trip() {
    for p in family_grid() {
        assert_eq!(ALSMParams::from_json(&p.to_json()).unwrap(), p);
    }
    assert!(
        ALSMParams::from_json(r#"{"model":"se-al","mu":0,"beta":1,"kappa":1,"theta":[1,2]}"#)
            .is_err()
    );
    assert!(
        ALSMParams::from_json(r#"{"model":"u-al","mu":0,"beta":1,"kappa":1,"theta":[1.5]}"#)
            .is_err()
    );
}
