//! Scalar product representations of det(Id - G).
//!
//! For Haar unitaries the determinant equals in law a product of n
//! independent factors 1 - alpha_k with rotation-invariant alpha_k whose
//! squared modulus is Beta(1, k); for uniform phased permutations the
//! factors are 1 - e^{i theta_k} X_k with X_k ~ Bernoulli(1/k). Sampling a
//! product costs O(n) draws instead of an n x n matrix decomposition, which
//! is what makes the large-n statistics in this crate affordable.

use crate::rng::RngStream;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2};
use thiserror::Error;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const BRANCH_SLACK: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ProductError {
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("time grid must be nonempty")]
    EmptyGrid,
    #[error("time grid entry {index} = {value} is outside [0, 1)")]
    GridOutOfRange { index: usize, value: f64 },
    #[error("time grid must be strictly increasing at index {index}")]
    GridNotIncreasing { index: usize },
}

/// Z = prod_{k=1}^{n} (1 - alpha_k), |alpha_k|^2 ~ Beta(1, k-1) with uniform
/// phase. Equal in law to det(Id - G) for Haar G on U(n).
pub fn sample_unitary_product(n: usize, rng: &mut RngStream) -> Result<Complex64, ProductError> {
    if n == 0 {
        return Err(ProductError::EmptyDimension);
    }
    let mut z = ONE;
    for k in 1..=n {
        let alpha = rng.kn_alpha((k - 1) as f64).expect("nonnegative shape");
        z *= ONE - alpha;
    }
    Ok(z)
}

/// Z = prod_{k=1}^{n} (1 - e^{i theta_k} X_k), X_k ~ Bernoulli(1/k)
/// independent of the uniform phases. Equal in law to det(Id - S) for a
/// uniform phased permutation S.
pub fn sample_permutation_product(n: usize, rng: &mut RngStream) -> Result<Complex64, ProductError> {
    if n == 0 {
        return Err(ProductError::EmptyDimension);
    }
    let mut z = ONE;
    for k in 1..=n {
        let hit = rng.bernoulli(1.0 / k as f64).expect("valid probability");
        if hit {
            z *= ONE - rng.uniform_phase();
        }
    }
    Ok(z)
}

/// K_n = sum_{k=1}^{n} Bernoulli(1/k): the cycle-count law of a uniform
/// permutation of n symbols.
pub fn sample_cycle_count_sum(n: usize, rng: &mut RngStream) -> Result<usize, ProductError> {
    if n == 0 {
        return Err(ProductError::EmptyDimension);
    }
    let mut total = 0;
    for k in 1..=n {
        if rng.bernoulli(1.0 / k as f64).expect("valid probability") {
            total += 1;
        }
    }
    Ok(total)
}

/// One realized path of the partial-sum log process, recorded on a fixed
/// time grid: values[m] = sum of the first floor(n * t_grid[m]) log factors.
#[derive(Debug, Clone, PartialEq)]
pub struct LogProcessPath {
    pub n: usize,
    pub t_grid: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Every factor 1 - alpha with |alpha| <= 1 lies in the closed disk of
/// radius 1 centered at 1, so its principal log satisfies Re <= ln 2 and
/// arg in (-pi/2, pi/2]. Violations mean a branch or sampler bug.
fn checked_log_factor(alpha: Complex64) -> Complex64 {
    let log = (ONE - alpha).ln();
    debug_assert!(log.re <= LN_2 + BRANCH_SLACK, "Re log factor {} > ln 2", log.re);
    debug_assert!(
        log.im > -FRAC_PI_2 - BRANCH_SLACK && log.im <= FRAC_PI_2 + BRANCH_SLACK,
        "arg log factor {} outside (-pi/2, pi/2]",
        log.im
    );
    log
}

fn validate_grid(t_grid: &[f64]) -> Result<(), ProductError> {
    if t_grid.is_empty() {
        return Err(ProductError::EmptyGrid);
    }
    for (index, &t) in t_grid.iter().enumerate() {
        if !t.is_finite() || !(0.0..1.0).contains(&t) {
            return Err(ProductError::GridOutOfRange { index, value: t });
        }
        if index > 0 && t <= t_grid[index - 1] {
            return Err(ProductError::GridNotIncreasing { index });
        }
    }
    Ok(())
}

/// Samples L_n(t) = sum_{l < floor(n t)} log(1 - alpha_l) on the given grid,
/// with the same factor law as `sample_unitary_product` (shape n-l-1 for the
/// l-th factor, l = 0-based). Grid times live in [0, 1), so the boundary
/// factor, whose log can blow up, is never consumed.
pub fn sample_log_process(
    n: usize,
    t_grid: &[f64],
    rng: &mut RngStream,
) -> Result<LogProcessPath, ProductError> {
    if n == 0 {
        return Err(ProductError::EmptyDimension);
    }
    validate_grid(t_grid)?;
    let mut values = Vec::with_capacity(t_grid.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut consumed = 0usize;
    for &t in t_grid {
        let target = (n as f64 * t).floor() as usize;
        while consumed < target {
            let alpha = rng
                .kn_alpha((n - consumed - 1) as f64)
                .expect("nonnegative shape");
            acc += checked_log_factor(alpha);
            consumed += 1;
        }
        values.push(acc);
    }
    Ok(LogProcessPath {
        n,
        t_grid: t_grid.to_vec(),
        values,
    })
}

/// log Z for the full product of n factors, summed on the principal branch
/// factor by factor (not the principal log of the product). The final factor
/// has a uniform-phase alpha; the measure-zero draw alpha = 1 exactly would
/// make the log singular and is resampled.
pub fn log_z_full(n: usize, rng: &mut RngStream) -> Result<Complex64, ProductError> {
    if n == 0 {
        return Err(ProductError::EmptyDimension);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..n - 1 {
        let alpha = rng.kn_alpha((n - l - 1) as f64).expect("nonnegative shape");
        acc += checked_log_factor(alpha);
    }
    loop {
        let alpha = rng.kn_alpha(0.0).expect("nonnegative shape");
        if alpha != ONE {
            acc += checked_log_factor(alpha);
            break;
        }
    }
    Ok(acc)
}
