//! The (μ, β, κ) maximizer shared by every EM variant.
//!
//! For fixed μ the weighted AL objective is maximized in closed form by
//! κ = (b/a)^{1/4}, β = κa + b/κ with a = (1/n)Σ wᵢ(xᵢ-μ)⁺ and
//! b = (1/n)Σ wᵢ(xᵢ-μ)⁻, leaving the profile -2 ln(√a + √b) - 1 (per
//! observation). Between order statistics √a + √b is concave in μ, so only
//! the order statistics need scanning. The two extremes are excluded: there
//! a or b vanishes and the likelihood has no maximizer in (β, κ).

use crate::ald::ALParams;
use crate::error::{Error, Result};

/// Sorted copy of a sample, reused across EM iterations.
#[derive(Debug, Clone)]
pub struct Q1Scan {
    sorted: Vec<f64>,
    order: Vec<usize>,
    center: f64,
}

impl Q1Scan {
    pub fn new(data: &[f64]) -> Result<Self> {
        if data.len() < 3 {
            return Err(Error::InvalidData(format!(
                "need at least 3 observations, got {}",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("data contain non-finite values".into()));
        }
        let mut order: Vec<usize> = (0..data.len()).collect();
        order.sort_by(|&i, &j| data[i].total_cmp(&data[j]));
        let sorted: Vec<f64> = order.iter().map(|&i| data[i]).collect();
        if sorted[0] == sorted[sorted.len() - 1] {
            return Err(Error::DegenerateSupport);
        }
        let center = sorted[sorted.len() / 2];
        Ok(Self {
            sorted,
            order,
            center,
        })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Maximize the weighted objective. An infinite weight pins μ at its
    /// observation (such points sit at δ = 0 and drop out of a and b).
    pub fn maximize(&self, weights: &[f64]) -> Result<ALParams> {
        let n = self.sorted.len();
        if weights.len() != n {
            return Err(Error::InvalidData(format!(
                "{} weights for {} observations",
                weights.len(),
                n
            )));
        }
        let mut pinned: Option<f64> = None;
        let mut ws = Vec::with_capacity(n);
        for (k, &i) in self.order.iter().enumerate() {
            let w = weights[i];
            if w == f64::INFINITY {
                match pinned {
                    Some(v) if v != self.sorted[k] => {
                        return Err(Error::InvalidParameter(
                            "infinite weights at distinct observations".into(),
                        ))
                    }
                    _ => pinned = Some(self.sorted[k]),
                }
                ws.push(0.0);
            } else if w > 0.0 && w.is_finite() {
                ws.push(w);
            } else {
                return Err(Error::InvalidParameter(format!(
                    "weight {w} at observation {i} is not positive"
                )));
            }
        }
        let ys: Vec<f64> = self.sorted.iter().map(|x| x - self.center).collect();

        // Weighted mass and first moment strictly below / above each index.
        let mut below = vec![(0.0, 0.0); n];
        let (mut s0, mut s1) = (0.0, 0.0);
        for k in 0..n {
            below[k] = (s0, s1);
            s0 += ws[k];
            s1 += ws[k] * ys[k];
        }
        let mut above = vec![(0.0, 0.0); n];
        let (mut s0, mut s1) = (0.0, 0.0);
        for k in (0..n).rev() {
            above[k] = (s0, s1);
            s0 += ws[k];
            s1 += ws[k] * ys[k];
        }

        let nf = n as f64;
        let mut best: Option<(f64, f64, f64, usize)> = None;
        for k in 1..n - 1 {
            if let Some(v) = pinned {
                if self.sorted[k] != v {
                    continue;
                }
            }
            let y = ys[k];
            let a = ((above[k].1 - y * above[k].0) / nf).max(0.0);
            let b = ((y * below[k].0 - below[k].1) / nf).max(0.0);
            let score = a.sqrt() + b.sqrt();
            if best.is_none_or(|(s, ..)| score < s) {
                best = Some((score, a, b, k));
            }
        }
        let Some((_, a, b, k)) = best else {
            return Err(Error::DegenerateSupport);
        };
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::DegenerateSupport);
        }
        let kappa = (b / a).sqrt().sqrt();
        ALParams::new(self.sorted[k], kappa * a + b / kappa, kappa)
    }
}

/// One-shot form of [`Q1Scan::maximize`].
pub fn maximize_q1(data: &[f64], weights: &[f64]) -> Result<ALParams> {
    Q1Scan::new(data)?.maximize(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_three_points() {
        let p = maximize_q1(&[-1.0, 0.0, 1.0], &[1.0; 3]).unwrap();
        assert_eq!(p.mu, 0.0);
        assert_eq!(p.kappa, 1.0);
        // a = b = 1/3
        assert!((p.beta - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn weight_scaling_is_exact() {
        let x = [0.3, -1.2, 2.5, 0.7, -0.1, 4.0, -2.2];
        let w = [1.0, 0.4, 2.0, 1.3, 0.9, 0.2, 0.7];
        let p = maximize_q1(&x, &w).unwrap();
        let w4: Vec<f64> = w.iter().map(|v| 4.0 * v).collect();
        let q = maximize_q1(&x, &w4).unwrap();
        assert_eq!(p.mu, q.mu);
        assert_eq!(p.kappa, q.kappa);
        assert_eq!(4.0 * p.beta, q.beta);
    }

    #[test]
    fn tied_interior_is_degenerate() {
        assert_eq!(
            maximize_q1(&[0.0, 0.0, 0.0, 5.0], &[1.0; 4]),
            Err(Error::DegenerateSupport)
        );
        assert_eq!(
            maximize_q1(&[2.0, 2.0, 2.0], &[1.0; 3]),
            Err(Error::DegenerateSupport)
        );
    }

    #[test]
    fn infinite_weight_pins_location() {
        let x = [-3.0, -1.0, 0.5, 2.0, 6.0];
        let mut w = [1.0; 5];
        w[3] = f64::INFINITY;
        assert_eq!(maximize_q1(&x, &w).unwrap().mu, 2.0);
    }
}
