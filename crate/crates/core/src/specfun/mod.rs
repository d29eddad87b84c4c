//! Special functions and quadrature used by the densities and E-steps.

mod bessel;
mod expint;
mod gamma;
mod incgamma;
mod quad;
mod truncgamma;

pub use bessel::{bessel_k, bessel_k_scaled};
pub use expint::{exp_integral_scaled, gen_exp_integral, misra_phi};
pub use gamma::{digamma, gamma, ln_gamma, EULER_GAMMA};
pub use incgamma::{
    lower_incomplete_gamma, regularized_gamma_p, regularized_gamma_q, upper_incomplete_gamma,
};
pub use quad::{adaptive_quadrature, adaptive_quadrature_with_breaks, QuadratureConfig};
pub use truncgamma::{trunc_gamma_expectations, TruncGammaMoments};

pub(crate) use expint::{exp_integral_scaled_unchecked, ln_exp_integral};
pub(crate) use gamma::digamma_pos;
pub(crate) use incgamma::{ln_pq, ln_scaled_lower_gamma};
