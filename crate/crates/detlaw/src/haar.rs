//! Haar-distributed unitaries, two ways, plus uniformly random phased
//! permutations with their cycle structure.
//!
//! The Ginibre route (iid complex Gaussians -> QR with positive-real-diagonal
//! R) is the reference sampler. The recursive route builds G_n as
//! `reflection * (1 (+) G_{n-1})` where the reflection carries e_1 to a
//! uniform point of the complex sphere; the two routes must agree in law and
//! the harness checks that they do.

use crate::linalg::{self, ComplexMatrix};
use crate::rng::RngStream;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HaarError {
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("direction vector must have unit norm, got {0}")]
    NonUnitVector(f64),
    #[error("reflection denominator |1 - <v,e_1>| = {0:.3e} is numerically unstable; resample")]
    DegenerateDirection(f64),
    #[error("permutation images must be a bijection on 0..n")]
    InvalidPermutation,
    #[error("phase {index} has modulus {modulus} (must be 1 within 1e-12)")]
    NonUnimodularPhase { index: usize, modulus: f64 },
    #[error("embedded block of dimension {inner} does not fit target dimension {outer}")]
    EmbedMismatch { inner: usize, outer: usize },
}

/// Haar unitary via QR of an iid complex-Gaussian matrix. The QR phase
/// convention (diag R real positive) is exactly what makes Q Haar.
pub fn sample_haar_unitary_ginibre(
    n: usize,
    rng: &mut RngStream,
) -> Result<ComplexMatrix, HaarError> {
    if n == 0 {
        return Err(HaarError::EmptyDimension);
    }
    loop {
        let mut g = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, rng.complex_gaussian());
            }
        }
        // A Gaussian matrix is singular with probability zero; retry if the
        // QR pivot check disagrees.
        match linalg::householder_qr(&g) {
            Ok((q, _)) => return Ok(q),
            Err(linalg::LinalgError::RankDeficient { .. }) => continue,
            Err(_) => unreachable!("square finite input"),
        }
    }
}

/// Unitary reflection R with R e_1 = v, acting as the identity on the
/// orthogonal complement of w = e_1 - v:
///
///   R = Id - w w* / (1 - <v, e_1>)
///
/// The exact case v = e_1 (w = 0 bitwise) yields Id; near-degenerate
/// directions are reported so the caller can resample.
pub fn reflection_to(v: &[Complex64]) -> Result<ComplexMatrix, HaarError> {
    let n = v.len();
    if n == 0 {
        return Err(HaarError::EmptyDimension);
    }
    let norm = linalg::norm(v);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(HaarError::NonUnitVector(norm));
    }
    let mut w = v.iter().map(|z| -z).collect::<Vec<Complex64>>();
    w[0] += Complex64::new(1.0, 0.0);
    if w.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(ComplexMatrix::identity(n));
    }
    // <v, e_1> = conj(v_0)
    let denom = Complex64::new(1.0, 0.0) - v[0].conj();
    if denom.norm() < 1e-14 {
        return Err(HaarError::DegenerateDirection(denom.norm()));
    }
    let mut r = ComplexMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let cur = r.get(i, j);
            r.set(i, j, cur - w[i] * w[j].conj() / denom);
        }
    }
    Ok(r)
}

/// `1 (+) h`: the unitary fixing e_1 whose lower-right block is `h`, sized
/// one higher than `h`.
pub fn stabilizer_embed(h: &ComplexMatrix) -> ComplexMatrix {
    let inner = h.dim();
    let n = inner + 1;
    let mut m = ComplexMatrix::zeros(n);
    m.set(0, 0, Complex64::new(1.0, 0.0));
    for i in 0..inner {
        for j in 0..inner {
            m.set(i + 1, j + 1, h.get(i, j));
        }
    }
    m
}

/// Haar unitary by the recursive reflection decomposition:
/// G_1 = (uniform phase), G_k = reflection_to(v_k) * (1 (+) G_{k-1}) with
/// v_k uniform on the complex k-sphere.
pub fn sample_haar_unitary_recursive(
    n: usize,
    rng: &mut RngStream,
) -> Result<ComplexMatrix, HaarError> {
    if n == 0 {
        return Err(HaarError::EmptyDimension);
    }
    let mut g = ComplexMatrix::zeros(1);
    g.set(0, 0, rng.uniform_phase());
    for k in 2..=n {
        let reflection = loop {
            let v = rng.sphere_point(k).expect("k >= 2");
            match reflection_to(&v) {
                Ok(r) => break r,
                Err(HaarError::DegenerateDirection(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        let embedded = stabilizer_embed(&g);
        g = linalg::mat_mul(&reflection, &embedded).expect("dimensions agree");
    }
    Ok(g)
}

/// A phased permutation: the matrix with entry `phases[j]` at row i,
/// column j = perm[i], i.e. a permutation matrix whose unit entries carry
/// unimodular phases (one per column).
#[derive(Debug, Clone)]
pub struct PhasedPermutation {
    perm: Vec<usize>,
    phases: Vec<Complex64>,
}

impl PhasedPermutation {
    pub fn new(perm: Vec<usize>, phases: Vec<Complex64>) -> Result<Self, HaarError> {
        let n = perm.len();
        if n == 0 {
            return Err(HaarError::EmptyDimension);
        }
        if phases.len() != n {
            return Err(HaarError::InvalidPermutation);
        }
        let mut seen = vec![false; n];
        for &img in &perm {
            if img >= n || seen[img] {
                return Err(HaarError::InvalidPermutation);
            }
            seen[img] = true;
        }
        for (index, z) in phases.iter().enumerate() {
            let modulus = z.norm();
            if (modulus - 1.0).abs() > 1e-12 {
                return Err(HaarError::NonUnimodularPhase { index, modulus });
            }
        }
        Ok(PhasedPermutation { perm, phases })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// Dense matrix form; one unimodular entry per row and per column.
    pub fn dense(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            let j = self.perm[i];
            m.set(i, j, self.phases[j]);
        }
        m
    }
}

/// Uniform phased permutation: Fisher-Yates permutation, iid uniform phases.
pub fn sample_phased_permutation(
    n: usize,
    rng: &mut RngStream,
) -> Result<PhasedPermutation, HaarError> {
    if n == 0 {
        return Err(HaarError::EmptyDimension);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.bounded_u64(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let phases = (0..n).map(|_| rng.uniform_phase()).collect();
    Ok(PhasedPermutation { perm, phases })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub len: usize,
    /// Product of the phases on the cycle's columns.
    pub phase: Complex64,
}

#[derive(Debug, Clone)]
pub struct CycleDecomposition {
    pub cycles: Vec<Cycle>,
}

impl CycleDecomposition {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn total_len(&self) -> usize {
        self.cycles.iter().map(|c| c.len).sum()
    }
}

pub fn cycle_decompose(p: &PhasedPermutation) -> CycleDecomposition {
    let n = p.dim();
    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut phase = Complex64::new(1.0, 0.0);
        let mut cur = start;
        while !visited[cur] {
            visited[cur] = true;
            phase *= p.phases[cur];
            len += 1;
            cur = p.perm[cur];
        }
        cycles.push(Cycle { len, phase });
    }
    CycleDecomposition { cycles }
}

/// `det(Id - P)` for a phased permutation, via the cycle factorization
/// `prod_cycles (1 - cycle_phase)`. O(n), no matrix is formed.
pub fn det_id_minus_phased_permutation(p: &PhasedPermutation) -> Complex64 {
    cycle_decompose(p)
        .cycles
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, c| acc * (Complex64::new(1.0, 0.0) - c.phase))
}
