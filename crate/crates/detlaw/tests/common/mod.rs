//! Oracle helpers shared by the integration suites. Everything here is
//! derived independently of the library internals so that agreement is
//! evidence, not tautology.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Variance of Re log(1 - alpha) when alpha has uniform phase and
/// |alpha|^2 ~ Beta(1, s) (s = 0 meaning |alpha| = 1).
///
/// Averaging the Fourier expansion ln|1 - r e^(i theta)| =
/// -sum_k r^k cos(k theta)/k over the phase gives
/// E[(Re log)^2 | r] = (1/2) sum_k r^(2k)/k^2, and the Beta(1, s) moments
/// are E[x^k] = k! s!/(k+s)!. The summand is computed by recurrence;
/// terms decay like k^-(s+2), so the truncation below is far finer than
/// any tolerance used against it.
pub fn factor_variance_series(s: usize) -> f64 {
    if s == 0 {
        return PI * PI / 12.0;
    }
    let mut moment = 1.0 / (s as f64 + 1.0);
    let mut acc = 0.5 * moment;
    for k in 2..200_000u64 {
        moment *= k as f64 / (k as f64 + s as f64);
        let term = 0.5 * moment / (k as f64 * k as f64);
        acc += term;
        if term < 1e-16 * acc {
            break;
        }
    }
    acc
}

/// Same quantity by brute-force midpoint quadrature over (radius, phase),
/// with no Fourier identity and no Beta moment formula: the radial
/// variable is mapped through the Beta(1, s) inverse CDF so the outer
/// integral is over a uniform u.
pub fn factor_variance_bruteforce(s: usize) -> f64 {
    let theta_points = 2000usize;
    let mean_sq_at = |x: f64| {
        let r = x.sqrt();
        let mut acc = 0.0;
        for i in 0..theta_points {
            let theta = (i as f64 + 0.5) / theta_points as f64 * 2.0 * PI;
            let sq = 1.0 - 2.0 * r * theta.cos() + x;
            let re_log = 0.5 * sq.ln();
            acc += re_log * re_log;
        }
        acc / theta_points as f64
    };
    if s == 0 {
        // fixed radius 1; the integrand has a log^2 singularity at
        // theta = 0, so use a much finer grid
        let fine = 1_000_000usize;
        let mut acc = 0.0;
        for i in 0..fine {
            let theta = (i as f64 + 0.5) / fine as f64 * 2.0 * PI;
            let re_log = (2.0 * (theta / 2.0).sin().abs()).ln();
            acc += re_log * re_log;
        }
        return acc / fine as f64;
    }
    let radial_points = 2000usize;
    let mut acc = 0.0;
    for j in 0..radial_points {
        let u = (j as f64 + 0.5) / radial_points as f64;
        let x = 1.0 - (1.0 - u).powf(1.0 / s as f64);
        acc += mean_sq_at(x);
    }
    acc / radial_points as f64
}

/// Variance of the partial sum of the first `factors` log factors at model
/// size n: the l-th factor has shape parameter n - l - 1.
pub fn partial_sum_variance(n: usize, factors: usize) -> f64 {
    (0..factors).map(|l| factor_variance_series(n - l - 1)).sum()
}
