//! Exact-in-law samplers for `det(Id - G)` where `G` is a Haar-distributed
//! unitary or a uniformly random phased permutation, together with the
//! orthogonal-polynomial machinery (Verblunsky coefficients, Szego recursion,
//! CMV matrices) that makes the O(n) product samplers possible, and a
//! Kolmogorov-Smirnov harness for checking that the different sampling routes
//! produce the same distributions.
//!
//! All randomness flows from a single 64-bit root seed through [`rng::RngStream`];
//! batch generation derives one substream per sample index, so results are
//! independent of thread count.

pub mod cli;
pub mod haar;
pub mod harness;
pub mod ks;
pub mod linalg;
pub mod opuc;
pub mod product;
pub mod rng;

pub use num_complex::Complex64;
