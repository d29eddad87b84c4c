//! Gamma, log-gamma and digamma.

use crate::error::{domain, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Γ(x). Backed by libm.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

// ζ(2) ... ζ(20).
const ZETA: [f64; 19] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265_0,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
];

/// ln Γ(1 + ε) for small |ε| (≤ 0.2), without forming 1 + ε.
pub(crate) fn ln_gamma_1p_small(eps: f64) -> f64 {
    debug_assert!(eps.abs() <= 0.2);
    let mut sum = -EULER_GAMMA * eps;
    let mut pow = -eps;
    for (i, z) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -eps;
        sum += z * pow / k;
    }
    sum
}

/// ψ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "digamma",
            format!("argument must be positive, got {x}"),
        ));
    }
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    // Asymptotic series with Bernoulli-number coefficients.
    let tail = x2
        * (1.0 / 12.0
            - x2 * (1.0 / 120.0
                - x2 * (1.0 / 252.0
                    - x2 * (1.0 / 240.0
                        - x2 * (1.0 / 132.0 - x2 * (691.0 / 32760.0 - x2 / 12.0))))));
    acc + x.ln() - 0.5 / x - tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digamma_known_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-14);
        let half = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - half).abs() < 1e-14);
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.0).is_err());
    }

    #[test]
    fn digamma_recurrence() {
        for &x in &[0.01, 0.3, 1.7, 4.2, 9.9, 10.1, 55.0, 1e4] {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn ln_gamma_1p_matches_libm() {
        for &e in &[-0.15, -0.05, -1e-3, 1e-6, 0.02, 0.1, 0.2] {
            let a = ln_gamma_1p_small(e);
            let b = ln_gamma(1.0 + e);
            assert!((a - b).abs() < 1e-15 + 1e-13 * b.abs(), "eps={e} {a} {b}");
        }
        // Tiny arguments keep full relative precision.
        let e = 1e-12;
        assert!((ln_gamma_1p_small(e) / e + EULER_GAMMA).abs() < 1e-11);
    }
}
