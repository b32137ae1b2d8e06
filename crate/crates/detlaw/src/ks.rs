//! Kolmogorov-Smirnov machinery used by the law-comparison harness.
//!
//! Everything here is classical: the two-sample statistic via a merge walk
//! over both sorted samples (ties consumed in full before the gap is read),
//! the asymptotic Kolmogorov survival function with its two series branches,
//! and the one-sample variant against an explicit CDF.

use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

/// Survival function Q(lambda) of the Kolmogorov distribution. The theta
/// series converges fast for small lambda and the alternating series for
/// large lambda; 1.18 is the usual crossover where both are accurate to
/// well below 1e-10.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let u = (-PI * PI / (8.0 * lambda * lambda)).exp();
        let cdf = (2.0 * PI).sqrt() / lambda * (u + u.powi(9) + u.powi(25) + u.powi(49));
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let v = (-2.0 * lambda * lambda).exp();
        (2.0 * (v - v.powi(4) + v.powi(9) - v.powi(16))).clamp(0.0, 1.0)
    }
}

fn sorted_copy(sample: &[f64]) -> Result<Vec<f64>, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut out = sample.to_vec();
    out.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(out)
}

/// Two-sample statistic and asymptotic p-value
/// p = Q(sqrt(m k / (m + k)) * D).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64), StatsError> {
    let xs = sorted_copy(a)?;
    let ys = sorted_copy(b)?;
    let (m, k) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < m && j < k {
        let x = xs[i].min(ys[j]);
        while i < m && xs[i] == x {
            i += 1;
        }
        while j < k && ys[j] == x {
            j += 1;
        }
        let gap = (i as f64 / m as f64 - j as f64 / k as f64).abs();
        if gap > d {
            d = gap;
        }
    }
    let effective = (m as f64 * k as f64) / (m as f64 + k as f64);
    Ok((d, kolmogorov_sf(effective.sqrt() * d)))
}

/// One-sample statistic against a reference CDF, p = Q(sqrt(n) * D).
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<(f64, f64), StatsError> {
    let xs = sorted_copy(sample)?;
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let below = f - i as f64 / n;
        let above = (i + 1) as f64 / n - f;
        d = d.max(below).max(above);
    }
    Ok((d, kolmogorov_sf(n.sqrt() * d)))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}
