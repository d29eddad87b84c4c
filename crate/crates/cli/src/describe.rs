//! Summary statistics of a return series.

use std::fmt::Write as _;

use alsm::specfun::regularized_gamma_q;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// With the n − 1 denominator.
    pub st_dev: f64,
    /// (1/(n s³)) Σ (x − x̄)³; absent when s = 0.
    pub skewness: Option<f64>,
    /// Raw kurtosis (1/(n s⁴)) Σ (x − x̄)⁴; absent when s = 0.
    pub kurtosis: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub minimum: f64,
    pub maximum: f64,
    pub jarque_bera_stat: Option<f64>,
    pub jarque_bera_pvalue: Option<f64>,
}

/// Statistics of a non-empty series.
pub fn describe(x: &[f64]) -> Option<DescriptiveStats> {
    if x.is_empty() {
        return None;
    }
    let n = x.len();
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let var = if n > 1 { m2 / (nf - 1.0) } else { 0.0 };
    let s = var.sqrt();
    let (skewness, kurtosis) = if s > 0.0 {
        (Some(m3 / (nf * s.powi(3))), Some(m4 / (nf * var * var)))
    } else {
        (None, None)
    };
    let jb = skewness
        .zip(kurtosis)
        .map(|(sk, k)| nf * (sk * sk / 6.0 + (k - 3.0).powi(2) / 24.0));
    Some(DescriptiveStats {
        n,
        mean,
        median,
        st_dev: s,
        skewness,
        kurtosis,
        excess_kurtosis: kurtosis.map(|k| k - 3.0),
        minimum: sorted[0],
        maximum: sorted[n - 1],
        jarque_bera_stat: jb,
        // χ²₂ survival
        jarque_bera_pvalue: jb
            .map(|t| regularized_gamma_q(1.0, 0.5 * t).unwrap_or((-0.5 * t).exp())),
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

impl DescriptiveStats {
    /// `key: value` lines, one per statistic.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let rows = [
            ("n", self.n.to_string()),
            ("mean", self.mean.to_string()),
            ("median", self.median.to_string()),
            ("st_dev", self.st_dev.to_string()),
            ("skewness", opt(self.skewness)),
            ("kurtosis", opt(self.kurtosis)),
            ("excess_kurtosis", opt(self.excess_kurtosis)),
            ("minimum", self.minimum.to_string()),
            ("maximum", self.maximum.to_string()),
            ("jarque_bera_stat", opt(self.jarque_bera_stat)),
            ("jarque_bera_pvalue", opt(self.jarque_bera_pvalue)),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }
}
