//! Seeded random matrices, including PSD block matrices whose off-diagonal
//! block lies in a prescribed class.
//!
//! PSD block matrices are built through the Schur complement: with `A` positive
//! definite, `[[A, X], [X*, B]]` is PSD iff `B - X* A⁻¹ X` is PSD, so taking
//! `B = X* A⁻¹ X + R` with `R` PSD lands in the cone for any `X`.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::blockdecomp::BlockMatrix;
use crate::numkernel::{complete_orthonormal, inverse, ComplexMatrix, I};

/// Generator for trial `index` of a run keyed by `seed`. Streams are
/// independent, so trials can be evaluated in any order or in parallel.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Entries with independent standard normal real and imaginary parts.
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut col = g.column(j);
        for _ in 0..2 {
            for b in &basis {
                let proj = crate::numkernel::inner(b, &col);
                for (c, bi) in col.iter_mut().zip(b) {
                    *c -= proj * bi;
                }
            }
        }
        let norm = crate::numkernel::vec_norm(&col);
        if norm < 1e-8 {
            break;
        }
        basis.push(col.into_iter().map(|z| z / norm).collect());
    }
    let basis = complete_orthonormal(basis, n);
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, col) in basis.iter().enumerate() {
        u.set_column(j, col);
    }
    u
}

/// `G* G + eps I` with `G` Gaussian `n x n`.
pub fn random_pd(rng: &mut impl Rng, n: usize, eps: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g.adjoint() * &g)
        .hermitian_part()
        .shift(Complex64::new(eps, 0.0))
}

/// `G G*` with `G` Gaussian `n x rank`.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> ComplexMatrix {
    if rank == 0 {
        return ComplexMatrix::zeros(n, n);
    }
    let g = gaussian_matrix(rng, n, rank);
    (&g * &g.adjoint()).hermitian_part()
}

/// `c0 I + c1 H + c2 H²` with Gaussian complex coefficients.
pub fn random_polynomial_in(rng: &mut impl Rng, h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.rows();
    let h2 = h * h;
    let (c0, c1, c2) = (gaussian(rng), gaussian(rng), gaussian(rng) * 0.25);
    let mut out = ComplexMatrix::identity(n).scale(c0);
    out = &out + &h.scale(c1);
    &out + &h2.scale(c2)
}

/// Constraint placed on the off-diagonal block `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XClass {
    General,
    Hermitian,
    SkewHermitian,
    /// `X = H + i r I`, so `Im(X) = r I`.
    ScalarShiftIm(f64),
    /// `X = i H + r I`, so `Re(X) = r I`.
    ScalarShiftRe(f64),
    /// `X* = q(A)` for a random polynomial `q`.
    CommutesWithA,
    /// `X = q(B)` for a random polynomial `q`.
    CommutesWithB,
}

/// Random PSD block matrix with `X` in `class`. With `definite` the Schur
/// remainder is positive definite and so is `M`; otherwise it has random rank.
pub fn random_psd_block<R: Rng>(
    rng: &mut R,
    n: usize,
    class: XClass,
    definite: bool,
) -> BlockMatrix {
    let remainder = |rng: &mut R| -> ComplexMatrix {
        if definite {
            random_pd(rng, n, 0.1)
        } else {
            let rank: usize = rng.random_range(0..=n);
            random_psd(rng, n, rank)
        }
    };

    if class == XClass::CommutesWithB {
        let b = random_pd(rng, n, 0.5);
        let x = random_polynomial_in(rng, &b.scale_real(1.0 / n as f64));
        let b_inv = inverse(&b).expect("positive definite");
        let schur = &(&x * &b_inv) * &x.adjoint();
        let a = (&schur + &remainder(rng)).hermitian_part();
        return BlockMatrix::new(a, x, b).expect("Hermitian blocks");
    }

    let a = random_pd(rng, n, 0.5);
    let x = match class {
        XClass::General => gaussian_matrix(rng, n, n),
        XClass::Hermitian => random_hermitian(rng, n),
        XClass::SkewHermitian => random_hermitian(rng, n).scale(I),
        XClass::ScalarShiftIm(r) => random_hermitian(rng, n).shift(I * r),
        XClass::ScalarShiftRe(r) => random_hermitian(rng, n)
            .scale(I)
            .shift(Complex64::new(r, 0.0)),
        XClass::CommutesWithA => random_polynomial_in(rng, &a.scale_real(1.0 / n as f64)).adjoint(),
        XClass::CommutesWithB => unreachable!(),
    };
    let a_inv = inverse(&a).expect("positive definite");
    let schur = &(&x.adjoint() * &a_inv) * &x;
    let b = (&schur + &remainder(rng)).hermitian_part();
    BlockMatrix::new(a, x, b).expect("Hermitian blocks")
}

/// `M = G* G` with `G` Gaussian `2n x 2n`, split into blocks.
pub fn wishart_block(rng: &mut impl Rng, n: usize) -> BlockMatrix {
    let g = gaussian_matrix(rng, 2 * n, 2 * n);
    let m = (&g.adjoint() * &g).hermitian_part();
    BlockMatrix::from_assembled(&m).expect("Hermitian by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockdecomp::{imag_part, real_part};
    use crate::numkernel::is_unitary;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = trial_rng(42, 3).sample(StandardNormal);
        let b: f64 = trial_rng(42, 3).sample(StandardNormal);
        let c: f64 = trial_rng(42, 4).sample(StandardNormal);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = trial_rng(1, 0);
        for n in 1..=6 {
            assert!(is_unitary(&random_unitary(&mut rng, n), 1e-12));
        }
    }

    #[test]
    fn classes_are_psd_and_constrained() {
        let mut rng = trial_rng(7, 0);
        let classes = [
            XClass::General,
            XClass::Hermitian,
            XClass::SkewHermitian,
            XClass::ScalarShiftIm(0.3),
            XClass::ScalarShiftRe(-1.2),
            XClass::CommutesWithA,
            XClass::CommutesWithB,
        ];
        for class in classes {
            for n in 1..=4 {
                let m = random_psd_block(&mut rng, n, class, false);
                assert!(m.is_psd(1e-8).unwrap().psd, "{class:?}");
                let x = m.x();
                match class {
                    XClass::Hermitian => assert_eq!(x.hermitian_deviation(), Some(0.0)),
                    XClass::ScalarShiftIm(r) => {
                        let id = ComplexMatrix::identity(n).scale_real(r);
                        assert!(imag_part(x).distance(&id) < 1e-14);
                    }
                    XClass::ScalarShiftRe(r) => {
                        let id = ComplexMatrix::identity(n).scale_real(r);
                        assert!(real_part(x).distance(&id) < 1e-14);
                    }
                    XClass::CommutesWithA => {
                        let c = x.adjoint().commutator(m.a()).unwrap();
                        assert!(
                            c.frobenius_norm() < 1e-10 * (1.0 + m.a().frobenius_norm().powi(3))
                        );
                    }
                    _ => {}
                }
            }
        }
    }
}
