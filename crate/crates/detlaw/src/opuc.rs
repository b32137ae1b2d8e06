//! Orthogonal polynomials on the unit circle, finite-dimensional version.
//!
//! A unitary n x n matrix with cyclic vector e_1 induces a spectral measure
//! on the circle with exactly n atoms; its monic orthogonal polynomials obey
//! the Szego recursion driven by n Verblunsky coefficients, the first n-1
//! strictly inside the unit disk and the last one on the circle. The CMV
//! matrix is the canonical five-diagonal unitary carrying the same data, and
//! its leading principal minors reproduce the polynomials:
//! `Phi_j(z) = det(z Id_j - C^(j))`. That identity is the deterministic
//! anchor for every law-level test in this crate.

use crate::linalg::{self, ComplexMatrix};
use crate::rng::RngStream;
use num_complex::Complex64;
use thiserror::Error;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, PartialEq)]
pub enum OpucError {
    #[error("need at least one coefficient")]
    Empty,
    #[error("coefficient {index} has modulus {modulus} but must lie strictly inside the disk")]
    InteriorCoefficientOnCircle { index: usize, modulus: f64 },
    #[error("final coefficient has modulus {modulus} but must lie on the unit circle")]
    BoundaryCoefficientOffCircle { modulus: f64 },
    #[error("moment sequence must start at c_0 = 1, got modulus deviation {0:.3e}")]
    BadLeadingMoment(f64),
    #[error("moment c_{index} has modulus {modulus} > 1")]
    MomentTooLarge { index: usize, modulus: f64 },
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("need {needed} moments to recover {n} coefficients, got {got}")]
    InsufficientMoments { needed: usize, got: usize, n: usize },
    #[error("Gram pivot {pivot:.3e} at order {order}: e_1 is not cyclic or moments are inconsistent")]
    NotCyclic { order: usize, pivot: f64 },
    #[error("minor order {j} out of range 1..={n}")]
    MinorOutOfRange { j: usize, n: usize },
}

/// Verblunsky coefficients of an n-atom measure on the circle: the first
/// n-1 strictly inside the open disk, the last on the circle itself.
#[derive(Debug, Clone, PartialEq)]
pub struct VerblunskySequence {
    alphas: Vec<Complex64>,
}

impl VerblunskySequence {
    pub fn new(alphas: Vec<Complex64>) -> Result<Self, OpucError> {
        let n = alphas.len();
        if n == 0 {
            return Err(OpucError::Empty);
        }
        for (index, a) in alphas[..n - 1].iter().enumerate() {
            let modulus = a.norm();
            if modulus > 1.0 - 1e-12 {
                return Err(OpucError::InteriorCoefficientOnCircle { index, modulus });
            }
        }
        let boundary = alphas[n - 1].norm();
        if (boundary - 1.0).abs() > 1e-10 {
            return Err(OpucError::BoundaryCoefficientOffCircle { modulus: boundary });
        }
        Ok(VerblunskySequence { alphas })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }
}

/// Moments c_k of a probability measure on the circle, c_0 = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<Complex64>,
}

impl MomentSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self, OpucError> {
        if values.is_empty() {
            return Err(OpucError::Empty);
        }
        let lead = (values[0] - ONE).norm();
        if lead > 1e-12 {
            return Err(OpucError::BadLeadingMoment(lead));
        }
        for (index, c) in values.iter().enumerate() {
            let modulus = c.norm();
            if modulus > 1.0 + 1e-9 {
                return Err(OpucError::MomentTooLarge { index, modulus });
            }
        }
        Ok(MomentSequence { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// c_k for signed k, using c_{-k} = conj(c_k).
    fn get(&self, k: isize) -> Complex64 {
        if k >= 0 {
            self.values[k as usize]
        } else {
            self.values[(-k) as usize].conj()
        }
    }
}

/// Coefficient law matching a Haar-distributed unitary: alpha_j is a
/// rotation-invariant point of the disk with |alpha_j|^2 ~ Beta(1, n-j-1),
/// and the final coefficient is a uniform phase.
pub fn sample_verblunsky_kn(n: usize, rng: &mut RngStream) -> Result<VerblunskySequence, OpucError> {
    if n == 0 {
        return Err(OpucError::Empty);
    }
    let alphas = (0..n)
        .map(|j| rng.kn_alpha((n - j - 1) as f64).expect("nonnegative shape"))
        .collect();
    // shapes n-1, ..., 1, 0: the last draw sits on the circle by construction
    Ok(VerblunskySequence { alphas })
}

/// Szego recursion: returns (Phi_j(z), Phi*_j(z)) for j = 0..=n, where
/// Phi_{j+1} = z Phi_j - conj(alpha_j) Phi*_j and
/// Phi*_{j+1} = Phi*_j - alpha_j z Phi_j.
pub fn szego_eval(v: &VerblunskySequence, z: Complex64) -> Vec<(Complex64, Complex64)> {
    let mut out = Vec::with_capacity(v.len() + 1);
    let mut phi = ONE;
    let mut phi_star = ONE;
    out.push((phi, phi_star));
    for &alpha in &v.alphas {
        let next_phi = z * phi - alpha.conj() * phi_star;
        let next_star = phi_star - alpha * (z * phi);
        phi = next_phi;
        phi_star = next_star;
        out.push((phi, phi_star));
    }
    out
}

/// Values Phi_j(1) for j = 0..=n. At z = 1 the dual polynomial is the
/// conjugate of the primal one, so the recursion closes on a single value:
/// Phi_{j+1}(1) = Phi_j(1) - conj(alpha_j) conj(Phi_j(1)).
pub fn phi_at_one(v: &VerblunskySequence) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(v.len() + 1);
    let mut phi = ONE;
    out.push(phi);
    for &alpha in &v.alphas {
        phi -= alpha.conj() * phi.conj();
        out.push(phi);
    }
    out
}

fn theta_block(alpha: Complex64) -> [[Complex64; 2]; 2] {
    let rho = (1.0 - alpha.norm_sqr()).max(0.0).sqrt();
    [
        [alpha.conj(), Complex64::new(rho, 0.0)],
        [Complex64::new(rho, 0.0), -alpha],
    ]
}

/// CMV matrix of the coefficient sequence: C = L * M with
/// L = Theta_0 (+) Theta_2 (+) ... and M = (1) (+) Theta_1 (+) Theta_3 (+) ...,
/// where Theta_j = [[conj(a_j), rho_j], [rho_j, -a_j]] acts on coordinates
/// (j, j+1) and whichever block would overflow the dimension collapses to
/// the 1 x 1 entry conj(a_{n-1}). Unitary, five-diagonal.
pub fn cmv_from_verblunsky(v: &VerblunskySequence) -> ComplexMatrix {
    let n = v.len();
    let alphas = &v.alphas;
    let mut l = ComplexMatrix::zeros(n);
    let mut m = ComplexMatrix::zeros(n);
    let mut j = 0;
    while j + 1 < n {
        let b = theta_block(alphas[j]);
        for (di, row) in b.iter().enumerate() {
            for (dj, &val) in row.iter().enumerate() {
                l.set(j + di, j + dj, val);
            }
        }
        j += 2;
    }
    if j == n - 1 {
        l.set(n - 1, n - 1, alphas[n - 1].conj());
    }
    m.set(0, 0, ONE);
    let mut j = 1;
    while j + 1 < n {
        let b = theta_block(alphas[j]);
        for (di, row) in b.iter().enumerate() {
            for (dj, &val) in row.iter().enumerate() {
                m.set(j + di, j + dj, val);
            }
        }
        j += 2;
    }
    if n >= 2 && j == n - 1 {
        m.set(n - 1, n - 1, alphas[n - 1].conj());
    }
    linalg::mat_mul(&l, &m).expect("same dimension")
}

/// `det(z Id_j - C^(j))` for the leading j x j principal submatrix, via LU.
pub fn principal_minor_charpoly(
    c: &ComplexMatrix,
    j: usize,
    z: Complex64,
) -> Result<Complex64, OpucError> {
    if j == 0 || j > c.dim() {
        return Err(OpucError::MinorOutOfRange { j, n: c.dim() });
    }
    let sub = c.principal_submatrix(j).expect("range checked");
    Ok(linalg::charpoly_at(&sub, z))
}

/// Moments c_k = <e_1, G^k e_1> for k = 0..=k_max by repeated mat_vec;
/// G^k is never formed.
pub fn moments_from_matrix(g: &ComplexMatrix, k_max: usize) -> Result<MomentSequence, OpucError> {
    let defect = linalg::unitarity_defect(g);
    if defect > 1e-6 {
        return Err(OpucError::NotUnitary(defect));
    }
    let n = g.dim();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[0] = ONE;
    let mut values = Vec::with_capacity(k_max + 1);
    values.push(ONE);
    for _ in 0..k_max {
        v = linalg::mat_vec(g, &v).expect("square");
        values.push(v[0]);
    }
    MomentSequence::new(values)
}

/// Recovers the n Verblunsky coefficients of an n-atom measure from its
/// moments c_0..c_n: Gram-Schmidt on monomials in the moment inner product
/// `<z^a, z^b> = c_{b-a}` builds the monic orthogonal polynomials, and
/// `alpha_j = -conj(Phi_{j+1}(0))`.
pub fn verblunsky_from_moments(
    moments: &MomentSequence,
    n: usize,
) -> Result<VerblunskySequence, OpucError> {
    if n == 0 {
        return Err(OpucError::Empty);
    }
    if moments.len() < n + 1 {
        return Err(OpucError::InsufficientMoments {
            needed: n + 1,
            got: moments.len(),
            n,
        });
    }
    // phis[j] holds the monic coefficients of Phi_j (length j+1);
    // norms[j] = <Phi_j, Phi_j>, needed to project later polynomials.
    let mut phis: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
    let mut norms: Vec<f64> = Vec::with_capacity(n);
    phis.push(vec![ONE]);
    let mut alphas = Vec::with_capacity(n);
    for k in 1..=n {
        // norm of the previous polynomial; the k-th polynomial of an n-atom
        // measure may be null only at k = n
        let prev = &phis[k - 1];
        let mut nrm = Complex64::new(0.0, 0.0);
        for (a, ca) in prev.iter().enumerate() {
            for (b, cb) in prev.iter().enumerate() {
                nrm += ca.conj() * cb * moments.get(b as isize - a as isize);
            }
        }
        let pivot = nrm.re;
        if pivot < 1e-10 {
            return Err(OpucError::NotCyclic { order: k - 1, pivot });
        }
        norms.push(pivot);

        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = ONE;
        for j in 0..k {
            // <Phi_j, z^k> = sum_a conj(phi_j[a]) c_{k-a}
            let mut proj = Complex64::new(0.0, 0.0);
            for (a, ca) in phis[j].iter().enumerate() {
                proj += ca.conj() * moments.get(k as isize - a as isize);
            }
            let scale = proj / norms[j];
            for (a, ca) in phis[j].iter().enumerate() {
                coeffs[a] -= scale * ca;
            }
        }
        alphas.push(-coeffs[0].conj());
        phis.push(coeffs);
    }
    VerblunskySequence::new(alphas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::sample_haar_unitary_ginibre;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Test-local polynomial arithmetic: coefficient vectors, lowest degree
    // first. The star transform of a degree-j polynomial reverses and
    // conjugates the coefficients; this is independent of the running
    // recursion in szego_eval and validates its dual line.
    struct Poly(Vec<Complex64>);

    impl Poly {
        fn eval(&self, z: Complex64) -> Complex64 {
            self.0.iter().rev().fold(c(0.0, 0.0), |acc, &co| acc * z + co)
        }
        fn star(&self, degree: usize) -> Poly {
            let mut coeffs = vec![c(0.0, 0.0); degree + 1];
            for (a, &co) in self.0.iter().enumerate() {
                coeffs[degree - a] = co.conj();
            }
            Poly(coeffs)
        }
        fn shift_up(&self) -> Poly {
            let mut coeffs = vec![c(0.0, 0.0)];
            coeffs.extend_from_slice(&self.0);
            Poly(coeffs)
        }
        fn sub_scaled(&self, scale: Complex64, other: &Poly) -> Poly {
            let len = self.0.len().max(other.0.len());
            let mut coeffs = vec![c(0.0, 0.0); len];
            for (i, slot) in coeffs.iter_mut().enumerate() {
                let a = self.0.get(i).copied().unwrap_or(c(0.0, 0.0));
                let b = other.0.get(i).copied().unwrap_or(c(0.0, 0.0));
                *slot = a - scale * b;
            }
            Poly(coeffs)
        }
    }

    fn kn(n: usize, seed: u64) -> VerblunskySequence {
        let mut rng = RngStream::new(seed);
        sample_verblunsky_kn(n, &mut rng).unwrap()
    }

    #[test]
    fn verblunsky_sequence_validates_moduli() {
        assert!(VerblunskySequence::new(vec![]).is_err());
        assert!(matches!(
            VerblunskySequence::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(OpucError::InteriorCoefficientOnCircle { index: 0, .. })
        ));
        assert!(matches!(
            VerblunskySequence::new(vec![c(0.3, 0.0), c(0.5, 0.0)]),
            Err(OpucError::BoundaryCoefficientOffCircle { .. })
        ));
        assert!(VerblunskySequence::new(vec![c(0.3, 0.1), c(0.0, 1.0)]).is_ok());
    }

    #[test]
    fn kn_sampler_shapes_and_first_coefficient_moment() {
        let mut rng = RngStream::new(200);
        let m = 100_000;
        let mut acc = 0.0;
        let mut acc_sq = 0.0;
        for _ in 0..m {
            let v = sample_verblunsky_kn(3, &mut rng).unwrap();
            assert_eq!(v.len(), 3);
            let x = v.alphas()[0].norm_sqr();
            acc += x;
            acc_sq += x * x;
            assert!(v.alphas()[1].norm() < 1.0);
            assert!((v.alphas()[2].norm() - 1.0).abs() < 1e-14);
        }
        let mean = acc / m as f64;
        let var = acc_sq / m as f64 - mean * mean;
        let se = (var / m as f64).sqrt();
        // |alpha_0|^2 ~ Beta(1, 2): mean 1/3
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * se, "{mean} +- {se}");
    }

    #[test]
    fn szego_free_case_gives_monomials() {
        let v = VerblunskySequence::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        let z = c(0.4, -0.9);
        let levels = szego_eval(&v, z);
        let mut zpow = c(1.0, 0.0);
        for (j, (phi, star)) in levels.iter().take(4).enumerate() {
            assert!((phi - zpow).norm() < 1e-14, "j={j}");
            assert!((star - c(1.0, 0.0)).norm() < 1e-14);
            zpow *= z;
        }
        // terminator: Phi_4 = z^4 - 1
        assert!((levels[4].0 - (zpow - c(1.0, 0.0))).norm() < 1e-14);
    }

    #[test]
    fn szego_single_step_closed_form() {
        let alpha = c(0.2, 0.5);
        let v = VerblunskySequence::new(vec![alpha / alpha.norm()]).unwrap();
        let z = c(-0.3, 0.8);
        let levels = szego_eval(&v, z);
        let a = v.alphas()[0];
        assert!((levels[1].0 - (z - a.conj())).norm() < 1e-15);
        assert!((levels[1].1 - (c(1.0, 0.0) - a * z)).norm() < 1e-15);
    }

    #[test]
    fn szego_matches_polynomial_coefficient_oracle() {
        let mut rng = RngStream::new(201);
        for n in 1..=5 {
            let v = kn(n, 300 + n as u64);
            let mut phi = Poly(vec![c(1.0, 0.0)]);
            let mut star = Poly(vec![c(1.0, 0.0)]);
            let mut polys = vec![(Poly(phi.0.clone()), Poly(star.0.clone()))];
            for (j, &alpha) in v.alphas().iter().enumerate() {
                let next_phi = phi.shift_up().sub_scaled(alpha.conj(), &star);
                // dual line rebuilt from first principles instead of the
                // running recursion: Phi*_{j+1} = reverse-conjugate of Phi_{j+1}
                let next_star = next_phi.star(j + 1);
                phi = next_phi;
                star = next_star;
                polys.push((Poly(phi.0.clone()), Poly(star.0.clone())));
            }
            for _ in 0..10 {
                let z = c(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0);
                let levels = szego_eval(&v, z);
                for (level, (p, s)) in levels.iter().zip(&polys) {
                    assert!((level.0 - p.eval(z)).norm() < 1e-10);
                    assert!((level.1 - s.eval(z)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn szego_modulus_identity_on_circle() {
        let mut rng = RngStream::new(202);
        for _ in 0..50 {
            let v = sample_verblunsky_kn(6, &mut rng).unwrap();
            let z = Complex64::from_polar(1.0, TAU * rng.next_f64());
            for (phi, star) in szego_eval(&v, z) {
                assert!((phi.norm() - star.norm()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn phi_at_one_agrees_with_generic_recursion() {
        let mut rng = RngStream::new(203);
        for _ in 0..100 {
            let v = sample_verblunsky_kn(8, &mut rng).unwrap();
            let fast = phi_at_one(&v);
            let generic = szego_eval(&v, c(1.0, 0.0));
            assert_eq!(fast.len(), generic.len());
            for (a, (b, _)) in fast.iter().zip(&generic) {
                // conjugation commutes with the arithmetic bitwise, so the
                // two recursions coincide exactly, not just approximately
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn phi_at_one_negative_unit_coefficient() {
        let v = VerblunskySequence::new(vec![c(-1.0, 0.0)]).unwrap();
        assert_eq!(phi_at_one(&v)[1], c(2.0, 0.0));
    }

    #[test]
    fn cmv_matches_hand_built_small_cases() {
        let phase = Complex64::from_polar(1.0, 0.9);
        let c1 = cmv_from_verblunsky(&VerblunskySequence::new(vec![phase]).unwrap());
        assert!((c1.get(0, 0) - phase.conj()).norm() < 1e-15);

        let alpha = c(0.3, -0.4);
        let last = Complex64::from_polar(1.0, -2.1);
        let v = VerblunskySequence::new(vec![alpha, last]).unwrap();
        let m = cmv_from_verblunsky(&v);
        let rho = (1.0 - alpha.norm_sqr()).sqrt();
        assert!((m.get(0, 0) - alpha.conj()).norm() < 1e-14);
        assert!((m.get(0, 1) - rho * last.conj()).norm() < 1e-14);
        assert!((m.get(1, 0) - c(rho, 0.0)).norm() < 1e-14);
        assert!((m.get(1, 1) + alpha * last.conj()).norm() < 1e-14);
    }

    #[test]
    fn cmv_is_unitary_and_five_diagonal() {
        for n in [2usize, 5, 8, 9] {
            let v = kn(n, 400 + n as u64);
            let m = cmv_from_verblunsky(&v);
            assert!(linalg::unitarity_defect(&m) < 1e-10, "n={n}");
            for i in 0..n {
                for j in 0..n {
                    if i.abs_diff(j) > 2 {
                        assert!(m.get(i, j).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn principal_minors_reproduce_szego_values() {
        let v = kn(8, 401);
        let m = cmv_from_verblunsky(&v);
        let at_one = phi_at_one(&v);
        for (j, &phi) in at_one.iter().enumerate().skip(1) {
            let minor = principal_minor_charpoly(&m, j, c(1.0, 0.0)).unwrap();
            let rel = (minor - phi).norm() / minor.norm().max(phi.norm());
            assert!(rel < 1e-9, "j={j}: {minor} vs {phi}");
        }
        assert!(principal_minor_charpoly(&m, 0, c(1.0, 0.0)).is_err());
        assert!(principal_minor_charpoly(&m, 9, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn full_charpoly_at_zero_is_unimodular() {
        let mut rng = RngStream::new(402);
        for _ in 0..50 {
            let v = sample_verblunsky_kn(7, &mut rng).unwrap();
            let phi_n = szego_eval(&v, c(0.0, 0.0))[7].0;
            assert!((phi_n.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn moments_of_structured_matrices() {
        let id = ComplexMatrix::identity(4);
        let m = moments_from_matrix(&id, 3).unwrap();
        assert!(m.values().iter().all(|&v| (v - c(1.0, 0.0)).norm() < 1e-15));

        let mut diag = ComplexMatrix::zeros(2);
        diag.set(0, 0, Complex64::from_polar(1.0, 0.7));
        diag.set(1, 1, Complex64::from_polar(1.0, -1.2));
        let m = moments_from_matrix(&diag, 4).unwrap();
        for (k, &v) in m.values().iter().enumerate() {
            assert!((v - Complex64::from_polar(1.0, 0.7 * k as f64)).norm() < 1e-12);
        }

        let mut swap = ComplexMatrix::zeros(2);
        swap.set(0, 1, c(1.0, 0.0));
        swap.set(1, 0, c(1.0, 0.0));
        let m = moments_from_matrix(&swap, 4).unwrap();
        let want = [1.0, 0.0, 1.0, 0.0, 1.0];
        for (got, want) in m.values().iter().zip(want) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }

        let mut scaled = ComplexMatrix::identity(2);
        scaled.set(0, 0, c(2.0, 0.0));
        assert!(matches!(moments_from_matrix(&scaled, 2), Err(OpucError::NotUnitary(_))));
    }

    #[test]
    fn recovery_from_atomic_measures() {
        // point mass at 1: c_k = 1
        let m = MomentSequence::new(vec![c(1.0, 0.0); 2]).unwrap();
        let v = verblunsky_from_moments(&m, 1).unwrap();
        assert!((v.alphas()[0] - c(1.0, 0.0)).norm() < 1e-14);

        // half-half at +-1: c = (1, 0, 1) -> alpha = (0, 1)
        let m = MomentSequence::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let v = verblunsky_from_moments(&m, 2).unwrap();
        assert!(v.alphas()[0].norm() < 1e-14);
        assert!((v.alphas()[1] - c(1.0, 0.0)).norm() < 1e-14);

        // point mass at 1 again, but asking for two coefficients: the
        // first-order polynomial z - 1 is already null
        let m = MomentSequence::new(vec![c(1.0, 0.0); 3]).unwrap();
        assert!(matches!(
            verblunsky_from_moments(&m, 2),
            Err(OpucError::NotCyclic { order: 1, .. })
        ));

        let short = MomentSequence::new(vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            verblunsky_from_moments(&short, 1),
            Err(OpucError::InsufficientMoments { .. })
        ));
    }

    #[test]
    fn roundtrip_through_cmv_and_moments() {
        let mut rng = RngStream::new(403);
        for _ in 0..20 {
            let v = sample_verblunsky_kn(6, &mut rng).unwrap();
            let m = cmv_from_verblunsky(&v);
            let moments = moments_from_matrix(&m, 6).unwrap();
            let back = verblunsky_from_moments(&moments, 6).unwrap();
            let worst = v
                .alphas()
                .iter()
                .zip(back.alphas())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(worst < 1e-7, "roundtrip error {worst}");
        }
    }

    #[test]
    fn recovered_coefficients_from_haar_matrices_keep_kn_structure() {
        let mut rng = RngStream::new(404);
        let g = sample_haar_unitary_ginibre(6, &mut rng).unwrap();
        let moments = moments_from_matrix(&g, 6).unwrap();
        let v = verblunsky_from_moments(&moments, 6).unwrap();
        assert_eq!(v.len(), 6);
        assert!((v.alphas()[5].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn moment_sequence_validates() {
        assert!(matches!(
            MomentSequence::new(vec![c(0.9, 0.0)]),
            Err(OpucError::BadLeadingMoment(_))
        ));
        assert!(matches!(
            MomentSequence::new(vec![c(1.0, 0.0), c(1.5, 0.0)]),
            Err(OpucError::MomentTooLarge { index: 1, .. })
        ));
    }
}
