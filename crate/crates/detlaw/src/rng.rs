//! Deterministic random streams and the scalar samplers everything else is
//! built from.
//!
//! The generator is a splitmix64 counter: state advances by the golden-ratio
//! increment, outputs go through the usual 64-bit finalizer. Substream `i` of
//! a stream with base seed `s` is a fresh stream seeded with
//! `mix(s ^ mix(GOLDEN_GAMMA * i + SUBSTREAM_SALT))`, so batch element `i`
//! can be generated on any thread (or any machine) with the same result.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SUBSTREAM_SALT: u64 = 0x6A09_E667_F3BC_C909;

#[derive(Debug, Error, PartialEq)]
pub enum RngError {
    #[error("beta shape must be a positive finite number, got {0}")]
    InvalidBetaShape(f64),
    #[error("bernoulli probability must lie in [0, 1], got {0}")]
    InvalidBernoulli(f64),
    #[error("kn shape must be a nonnegative finite number, got {0}")]
    InvalidKnShape(f64),
    #[error("sphere dimension must be at least 1")]
    EmptyDimension,
}

/// 64-bit splitmix finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic stream of uniform variates, splittable by index.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    state: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, state: seed }
    }

    /// Derived stream for batch element `index`; independent of how much of
    /// the parent stream has been consumed.
    pub fn substream(&self, index: u64) -> RngStream {
        let folded = mix(
            self.seed ^ mix(index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(SUBSTREAM_SALT)),
        );
        RngStream::new(folded)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in [0, 1), using the top 53 bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in 0..bound (rejection on the biased tail).
    pub fn bounded_u64(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bounded_u64 needs a positive bound");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let raw = self.next_u64();
            let (hi, lo) = {
                let wide = (raw as u128) * (bound as u128);
                ((wide >> 64) as u64, wide as u64)
            };
            if lo >= threshold {
                return hi;
            }
        }
    }

    /// e^{i theta} with theta uniform on [0, 2 pi).
    #[inline]
    pub fn uniform_phase(&mut self) -> Complex64 {
        let theta = TAU * self.next_f64();
        let (s, c) = theta.sin_cos();
        Complex64::new(c, s)
    }

    /// Beta(1, s) by inverse CDF: X = 1 - (1 - U)^{1/s}, strictly below 1.
    pub fn beta_1_s(&mut self, s: f64) -> Result<f64, RngError> {
        if s <= 0.0 || !s.is_finite() {
            return Err(RngError::InvalidBetaShape(s));
        }
        let u = self.next_f64();
        Ok(1.0 - (1.0 - u).powf(1.0 / s))
    }

    pub fn bernoulli(&mut self, p: f64) -> Result<bool, RngError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(RngError::InvalidBernoulli(p));
        }
        Ok(self.next_f64() < p)
    }

    /// Standard complex Gaussian normalized to E|z|^2 = 1 (so the real and
    /// imaginary parts are independent N(0, 1/2)); polar Box-Muller.
    #[inline]
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let u = self.next_f64();
        let r = (-(1.0 - u).ln()).sqrt();
        r * self.uniform_phase()
    }

    /// Uniform point on the unit sphere of C^n.
    pub fn sphere_point(&mut self, n: usize) -> Result<Vec<Complex64>, RngError> {
        if n == 0 {
            return Err(RngError::EmptyDimension);
        }
        loop {
            let v: Vec<Complex64> = (0..n).map(|_| self.complex_gaussian()).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-150 {
                return Ok(v.into_iter().map(|z| z / norm).collect());
            }
        }
    }

    /// Rotation-invariant point of the closed unit disk with radial law
    /// |alpha|^2 ~ Beta(1, s); s = 0 degenerates to the unit circle. This is
    /// the coefficient law that makes the product samplers exact.
    #[inline]
    pub fn kn_alpha(&mut self, s: f64) -> Result<Complex64, RngError> {
        if s == 0.0 {
            return Ok(self.uniform_phase());
        }
        if s < 0.0 || !s.is_finite() {
            return Err(RngError::InvalidKnShape(s));
        }
        let radius_sqr = self.beta_1_s(s)?;
        Ok(radius_sqr.sqrt() * self.uniform_phase())
    }
}
