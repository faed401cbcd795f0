use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{gev_cdf, GevError, GevParams};

/// One-sample Kolmogorov–Smirnov result against a fitted GEV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub ks_statistic: f64,
    pub p_value: f64,
    pub n: usize,
    /// Empirical minus model CDF at the point where `|difference|` peaks.
    pub max_cdf_error: f64,
}

pub fn ks_test(data: &[f64], p: &GevParams) -> Result<GofReport, GevError> {
    if data.is_empty() {
        return Err(GevError::EmptyData);
    }
    if data.iter().any(|v| v.is_nan()) {
        return Err(GevError::NonFinite);
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;

    let mut d = 0.0;
    let mut signed = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = gev_cdf(x, p);
        let above = (i + 1) as f64 / n - f;
        let below = i as f64 / n - f;
        if above.abs() > d {
            d = above.abs();
            signed = above;
        }
        if below.abs() > d {
            d = below.abs();
            signed = below;
        }
    }
    let d = d.clamp(0.0, 1.0);
    Ok(GofReport {
        ks_statistic: d,
        p_value: kolmogorov_survival(n.sqrt() * d),
        n: sorted.len(),
        max_cdf_error: signed,
    })
}

/// `P(K > λ)` for the limiting Kolmogorov distribution.
///
/// Uses `2 Σ (−1)^(k−1) e^(−2k²λ²)` for larger λ and the Jacobi-theta form
/// `1 − √(2π)/λ Σ e^(−(2k−1)²π²/(8λ²))` for small λ, where the alternating
/// series converges slowly. Both series stop once a term drops below 1e-12.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    const TERM_TOL: f64 = 1e-12;
    if !(lambda > 0.0) {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        let mut sum = 0.0;
        for k in 1.. {
            let j = (2 * k - 1) as f64;
            let term = (-j * j * PI * PI / (8.0 * lambda * lambda)).exp();
            sum += term;
            if term < TERM_TOL {
                break;
            }
        }
        1.0 - (2.0 * PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        for k in 1.. {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < TERM_TOL {
                break;
            }
        }
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}
