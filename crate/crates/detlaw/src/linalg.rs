//! Dense complex linear algebra sized for verification work (n <= a few
//! hundred): row-major matrices, LU determinants, Householder QR with a fixed
//! phase convention, and unitarity diagnostics. Nothing here is tuned for
//! large n; the point is predictable numerics.

use num_complex::Complex64;
use thiserror::Error;

pub type ComplexVector = Vec<Complex64>;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("rank deficiency detected at column {col} (|pivot| = {pivot:.3e})")]
    RankDeficient { col: usize, pivot: f64 },
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds from row-major data; rejects non-finite entries and bad lengths.
    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::DimensionMismatch { expected: n * n, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.n + j] = z;
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Leading j x j principal submatrix.
    pub fn principal_submatrix(&self, j: usize) -> Result<ComplexMatrix, LinalgError> {
        if j == 0 || j > self.n {
            return Err(LinalgError::DimensionMismatch { expected: self.n, got: j });
        }
        let mut out = Self::zeros(j);
        for r in 0..j {
            for c in 0..j {
                out.data[r * j + c] = self.get(r, c);
            }
        }
        Ok(out)
    }
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = a.n;
    if b.n != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: b.n });
    }
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a.get(i, k);
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out.data[i * n + j] += aik * b.get(k, j);
            }
        }
    }
    Ok(out)
}

pub fn mat_vec(a: &ComplexMatrix, x: &[Complex64]) -> Result<ComplexVector, LinalgError> {
    let n = a.n;
    if x.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: x.len() });
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &xj) in x.iter().enumerate() {
            acc += a.get(i, j) * xj;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Hermitian inner product, conjugate-linear in the first argument:
/// `<a, b> = sum conj(a_i) b_i`.
pub fn hermitian_inner(a: &[Complex64], b: &[Complex64]) -> Result<Complex64, LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    Ok(acc)
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Determinant by partial-pivot LU. A singular matrix yields 0, not an error;
/// exact for n = 1.
pub fn lu_det(m: &ComplexMatrix) -> Complex64 {
    let n = m.n;
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if n == 1 {
        return m.data[0];
    }
    let mut a = m.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut piv_mag = a[col * n + col].norm_sqr();
        for r in col + 1..n {
            let mag = a[r * n + col].norm_sqr();
            if mag > piv_mag {
                piv = r;
                piv_mag = mag;
            }
        }
        if piv_mag == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let pivot = a[col * n + col];
        det *= pivot;
        for r in col + 1..n {
            let factor = a[r * n + col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col + 1..n {
                let sub = factor * a[col * n + j];
                a[r * n + j] -= sub;
            }
            a[r * n + col] = Complex64::new(0.0, 0.0);
        }
    }
    det
}

/// `det(z * Id - A)` evaluated through the LU path.
pub fn charpoly_at(a: &ComplexMatrix, z: Complex64) -> Complex64 {
    let n = a.n;
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let base = if i == j { z } else { Complex64::new(0.0, 0.0) };
            m.data[i * n + j] = base - a.get(i, j);
        }
    }
    lu_det(&m)
}

/// Householder QR of a square complex matrix. The factorization is
/// normalized so every diagonal entry of R is real and strictly positive,
/// which pins down Q uniquely; a vanishing pivot reports rank deficiency.
pub fn householder_qr(
    m: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix), LinalgError> {
    let n = m.n;
    let mut r = m.clone();
    let mut q = ComplexMatrix::identity(n);

    // Accumulate Q by applying each reflector to the identity from the left
    // history: Q = H_0 H_1 ... ; reflectors are Hermitian so Q = (H_k ... H_0)^*.
    for col in 0..n {
        // x = trailing part of current column
        let mut x = vec![Complex64::new(0.0, 0.0); n - col];
        for i in col..n {
            x[i - col] = r.get(i, col);
        }
        let xnorm = norm(&x);
        if xnorm < 1e-300 {
            return Err(LinalgError::RankDeficient { col, pivot: xnorm });
        }
        // alpha = -exp(i arg x_0) * |x|, the cancellation-free sign choice
        let phase0 = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase0 * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr > 0.0 {
            // apply H = I - 2 v v^* / |v|^2 to R (rows col..) and to Q
            for j in col..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in col..n {
                    dot += v[i - col].conj() * r.get(i, j);
                }
                let scale = dot * (2.0 / vnorm_sqr);
                for i in col..n {
                    let sub = scale * v[i - col];
                    let cur = r.get(i, j);
                    r.set(i, j, cur - sub);
                }
            }
            for j in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in col..n {
                    dot += v[i - col].conj() * q.get(i, j);
                }
                let scale = dot * (2.0 / vnorm_sqr);
                for i in col..n {
                    let sub = scale * v[i - col];
                    let cur = q.get(i, j);
                    q.set(i, j, cur - sub);
                }
            }
        }
        for i in col + 1..n {
            r.set(i, col, Complex64::new(0.0, 0.0));
        }
    }
    // q currently holds H_{n-1} ... H_0 = Q^*; transpose-conjugate it back.
    let mut q = q.conj_transpose();

    // Phase-normalize so diag(R) > 0: Q <- Q D, R <- D^* R with D unitary diagonal.
    for k in 0..n {
        let d = r.get(k, k);
        let mag = d.norm();
        if mag < 1e-300 {
            return Err(LinalgError::RankDeficient { col: k, pivot: mag });
        }
        let phase = d / mag;
        for j in k..n {
            let cur = r.get(k, j);
            r.set(k, j, cur * phase.conj());
        }
        // d * conj(d/|d|) = |d| exactly; don't leave rounding residue on it
        r.set(k, k, Complex64::new(mag, 0.0));
        for i in 0..n {
            let cur = q.get(i, k);
            q.set(i, k, cur * phase);
        }
    }
    Ok((q, r))
}

/// Largest entrywise deviation of `U^* U` from the identity.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.n;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += u.get(k, i).conj() * u.get(k, j);
            }
            if i == j {
                acc -= Complex64::new(1.0, 0.0);
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}
