//! Block matrices `M = [[A, X], [X*, B]]` and their two-summand decompositions.
//!
//! For PSD `M` with equal block sizes there are unitaries `U`, `V` with
//!
//! ```text
//! M = U ((A+B)/2 + φ(X) ⊕ 0) U* + V (0 ⊕ (A+B)/2 - φ(X)) V*
//! ```
//!
//! where `φ` is either the Hermitian imaginary part `Im(X) = (X - X*)/2i` or
//! the real part `Re(X) = (X + X*)/2`. The construction here first rotates `M`
//! by a fixed unitary `J` so that the two summands appear as diagonal blocks,
//! then splits the rotated matrix along its square root.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{
    check_hermitian, is_psd, matrix_sqrt_psd, polar_right, ComplexMatrix, PsdCheck, I, ZERO,
};
use crate::tolerance;

/// Hermitian block matrix `[[A, X], [X*, B]]` with `n x n` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    a: ComplexMatrix,
    x: ComplexMatrix,
    b: ComplexMatrix,
}

/// Which Hermitian part of `X` a decomposition works with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    pub fn as_str(self) -> &'static str {
        match self {
            Part::Re => "re",
            Part::Im => "im",
        }
    }

    /// `Re(X)` or `Im(X)`.
    pub fn of(self, x: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Part::Re => real_part(x),
            Part::Im => imag_part(x),
        }
    }
}

impl std::str::FromStr for Part {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "re" => Ok(Part::Re),
            "im" => Ok(Part::Im),
            other => Err(format!("unknown part {other:?}, expected re or im")),
        }
    }
}

impl BlockMatrix {
    /// Validates that all three blocks are `n x n` and that `A`, `B` are Hermitian.
    pub fn new(a: ComplexMatrix, x: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        for (name, blk) in [("A", &a), ("X", &x), ("B", &b)] {
            if blk.rows() != n || blk.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "block {name} is {}x{}, expected {n}x{n}",
                    blk.rows(),
                    blk.cols()
                )));
            }
        }
        check_hermitian(&a)?;
        check_hermitian(&b)?;
        Ok(Self { a, x, b })
    }

    /// Splits an even-sized Hermitian matrix into equal blocks.
    pub fn from_assembled(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "expected an even square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        check_hermitian(m)?;
        let n = m.rows() / 2;
        Self::new(
            m.block(0, 0, n, n),
            m.block(0, n, n, n),
            m.block(n, n, n, n),
        )
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn assemble(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&self.a, &self.x, &self.x.adjoint(), &self.b)
            .expect("blocks share one size")
    }

    pub fn a_plus_b(&self) -> ComplexMatrix {
        &self.a + &self.b
    }

    /// `s * M`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a: self.a.scale_real(s),
            x: self.x.scale_real(s),
            b: self.b.scale_real(s),
        }
    }

    pub fn is_psd(&self, tol: f64) -> Result<PsdCheck> {
        is_psd(&self.assemble(), tol)
    }
}

/// `Im(X) = (X - X*) / 2i`, Hermitian.
pub fn imag_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x - &x.adjoint()).scale(Complex64::new(0.0, -0.5))
}

/// `Re(X) = (X + X*) / 2`, Hermitian.
pub fn real_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + &x.adjoint()).scale_real(0.5)
}

/// `M1, M2 = (A+B)/2 ± Im(X)` and `N1, N2 = (A+B)/2 ± Re(X)`.
#[derive(Debug, Clone)]
pub struct HalfParts {
    pub m1: ComplexMatrix,
    pub m2: ComplexMatrix,
    pub n1: ComplexMatrix,
    pub n2: ComplexMatrix,
}

impl HalfParts {
    /// The `(+, -)` pair for the given part.
    pub fn pair(&self, part: Part) -> (&ComplexMatrix, &ComplexMatrix) {
        match part {
            Part::Im => (&self.m1, &self.m2),
            Part::Re => (&self.n1, &self.n2),
        }
    }
}

pub fn half_parts(m: &BlockMatrix) -> HalfParts {
    let mean = m.a_plus_b().scale_real(0.5);
    let im = imag_part(m.x());
    let re = real_part(m.x());
    HalfParts {
        m1: &mean + &im,
        m2: &mean - &im,
        n1: &mean + &re,
        n2: &mean - &re,
    }
}

/// The four Loewner facts `A + B >= ±2 Im(X)` and `A + B >= ±2 Re(X)`.
#[derive(Debug, Clone)]
pub struct LoewnerFacts {
    pub plus_im: PsdCheck,
    pub minus_im: PsdCheck,
    pub plus_re: PsdCheck,
    pub minus_re: PsdCheck,
}

impl LoewnerFacts {
    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.psd)
    }

    /// Labelled checks in a fixed order.
    pub fn checks(&self) -> [(&'static str, &PsdCheck); 4] {
        [
            ("A+B+2Im(X)", &self.plus_im),
            ("A+B-2Im(X)", &self.minus_im),
            ("A+B+2Re(X)", &self.plus_re),
            ("A+B-2Re(X)", &self.minus_re),
        ]
    }
}

/// Evaluates the four facts; they are guaranteed when `M` is PSD but are
/// computed for any input.
pub fn check_loewner_facts(m: &BlockMatrix, tol: f64) -> Result<LoewnerFacts> {
    let ab = m.a_plus_b();
    let im2 = imag_part(m.x()).scale_real(2.0);
    let re2 = real_part(m.x()).scale_real(2.0);
    Ok(LoewnerFacts {
        plus_im: is_psd(&(&ab + &im2), tol)?,
        minus_im: is_psd(&(&ab - &im2), tol)?,
        plus_re: is_psd(&(&ab + &re2), tol)?,
        minus_re: is_psd(&(&ab - &re2), tol)?,
    })
}

/// Fixed unitary `J` whose congruence `J* M J` has diagonal blocks
/// `(A+B)/2 + φ(X)` (top) and `(A+B)/2 - φ(X)` (bottom).
///
/// Re: `J = [[I, I], [I, -I]] / √2`; Im: `J = [[I, I], [-iI, iI]] / √2`.
pub fn rotation(n: usize, part: Part) -> ComplexMatrix {
    let id = ComplexMatrix::identity(n).scale_real(FRAC_1_SQRT_2);
    let (bl, br) = match part {
        Part::Re => (id.clone(), -&id),
        Part::Im => (id.scale(-I), id.scale(I)),
    };
    ComplexMatrix::from_blocks(&id, &id, &bl, &br).expect("square blocks")
}

/// Returns `(J* M J, J)` for the rotation of the given part.
pub fn rotate(m: &BlockMatrix, part: Part) -> (ComplexMatrix, ComplexMatrix) {
    let j = rotation(m.n(), part);
    let rotated = (&(&j.adjoint() * &m.assemble()) * &j).hermitian_part();
    (rotated, j)
}

/// Unitaries `U`, `V` with `P = U (P11 ⊕ 0) U* + V (0 ⊕ P22) V*` for PSD `P`
/// of even size, where `P11`, `P22` are the diagonal blocks of `P`.
///
/// With `S = P^{1/2}` and `E1 = I ⊕ 0`, `E2 = 0 ⊕ I`, the factors `K1 = S E1`
/// and `K2 = S E2` satisfy `K1 K1* + K2 K2* = P` and `K1* K1 = P11 ⊕ 0`. The
/// polar factor of `K1 = U |K1|` then gives `K1 K1* = U (P11 ⊕ 0) U*`, and
/// likewise for `K2`.
pub fn pinching_decompose(p: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !p.is_square() || !p.rows().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "expected an even square matrix, got {}x{}",
            p.rows(),
            p.cols()
        )));
    }
    let check = is_psd(p, tolerance::DEFAULT)?;
    if !check.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: check.min_eigenvalue,
        });
    }
    let n = p.rows() / 2;
    let s = matrix_sqrt_psd(p)?;
    let k1 = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| if j < n { s[(i, j)] } else { ZERO });
    let k2 = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| if j >= n { s[(i, j)] } else { ZERO });
    let u = polar_right(&k1)?.unitary;
    let v = polar_right(&k2)?.unitary;
    Ok((u, v))
}

/// `M = U (top ⊕ 0) U* + V (0 ⊕ bottom) V*`.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    pub top: ComplexMatrix,
    pub bottom: ComplexMatrix,
    pub part: Part,
}

impl DecompositionResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.top.rows();
        let zero = ComplexMatrix::zeros(n, n);
        let first = &(&self.u * &self.top.direct_sum(&zero)) * &self.u.adjoint();
        let second = &(&self.v * &zero.direct_sum(&self.bottom)) * &self.v.adjoint();
        &first + &second
    }

    /// `||M - reconstruct()||_F / max(1, ||M||_F)`.
    pub fn relative_error(&self, m: &BlockMatrix) -> f64 {
        let full = m.assemble();
        full.distance(&self.reconstruct()) / tolerance::scale(full.frobenius_norm())
    }
}

/// Constructive two-summand decomposition of a PSD block matrix.
pub fn two_unitary_decompose(m: &BlockMatrix, part: Part) -> Result<DecompositionResult> {
    let check = m.is_psd(tolerance::DEFAULT)?;
    if !check.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: check.min_eigenvalue,
        });
    }
    let (rotated, j) = rotate(m, part);
    let (u0, v0) = pinching_decompose(&rotated)?;
    let halves = half_parts(m);
    let (top, bottom) = halves.pair(part);
    Ok(DecompositionResult {
        u: &j * &u0,
        v: &j * &v0,
        top: top.clone(),
        bottom: bottom.clone(),
        part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{herm_eigenvalues, is_unitary, ONE};

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn t_block() -> BlockMatrix {
        BlockMatrix::new(
            ComplexMatrix::from_real_diagonal(&[0.3, 5.0]),
            ComplexMatrix::from_rows(&[&[ZERO, I / 11.0], &[I, ZERO]]),
            ComplexMatrix::from_real_diagonal(&[5.0, 0.3]),
        )
        .unwrap()
    }

    #[test]
    fn imag_part_of_x_t() {
        let im = imag_part(t_block().x());
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 6.0 / 11.0], &[6.0 / 11.0, 0.0]]);
        assert!(im.distance(&expected) < 1e-15);
        let x = t_block().x().clone();
        let rebuilt = &real_part(&x) + &im.scale(I);
        assert!(rebuilt.distance(&x) < 1e-15);
    }

    #[test]
    fn parts_of_special_inputs() {
        let h = ComplexMatrix::from_rows(&[&[r(1.0), I], &[-I, r(2.0)]]);
        assert_eq!(imag_part(&h).frobenius_norm(), 0.0);
        let ii = ComplexMatrix::identity(3).scale(I);
        assert!(imag_part(&ii).distance(&ComplexMatrix::identity(3)) < 1e-15);
        assert_eq!(real_part(&ii).frobenius_norm(), 0.0);
    }

    #[test]
    fn block_matrix_validation() {
        let id = ComplexMatrix::identity(2);
        let bad = ComplexMatrix::from_rows(&[&[ONE, I], &[I, ONE]]);
        assert!(BlockMatrix::new(bad, id.clone(), id.clone()).is_err());
        assert!(BlockMatrix::new(id.clone(), ComplexMatrix::zeros(2, 3), id.clone()).is_err());
        assert!(BlockMatrix::from_assembled(&ComplexMatrix::identity(3)).is_err());
        let m = t_block();
        assert_eq!(BlockMatrix::from_assembled(&m.assemble()).unwrap(), m);
    }

    #[test]
    fn half_parts_of_t() {
        let h = half_parts(&t_block());
        let expected = ComplexMatrix::from_real_rows(&[&[2.65, 6.0 / 11.0], &[6.0 / 11.0, 2.65]]);
        assert!(h.m1.distance(&expected) < 1e-15);
        let ev = herm_eigenvalues(&h.m1).unwrap();
        assert!((ev[0] - (2.65 + 6.0 / 11.0)).abs() < 1e-14);
        assert!((ev[1] - (2.65 - 6.0 / 11.0)).abs() < 1e-14);
        let ab = t_block().a_plus_b();
        assert!((&h.m1 + &h.m2).distance(&ab) < 1e-15);
        assert!((&h.n1 + &h.n2).distance(&ab) < 1e-15);
    }

    #[test]
    fn half_parts_with_zero_coupling() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let b = ComplexMatrix::identity(2);
        let m = BlockMatrix::new(a.clone(), ComplexMatrix::zeros(2, 2), b.clone()).unwrap();
        let h = half_parts(&m);
        let mean = (&a + &b).scale_real(0.5);
        for part in [&h.m1, &h.m2, &h.n1, &h.n2] {
            assert!(part.distance(&mean) < 1e-15);
        }
    }

    #[test]
    fn loewner_facts_on_t() {
        let facts = check_loewner_facts(&t_block(), 1e-8).unwrap();
        assert!(facts.all_hold());
        assert!((facts.minus_im.min_eigenvalue - (5.3 - 12.0 / 11.0)).abs() < 1e-13);
    }

    #[test]
    fn loewner_facts_fail_for_indefinite_family() {
        let m = BlockMatrix::new(
            ComplexMatrix::from_real_diagonal(&[1.0, 2.0]),
            ComplexMatrix::from_real_diagonal(&[1.0, 2.0]),
            ComplexMatrix::from_real_diagonal(&[-0.5, -1.0]),
        )
        .unwrap();
        let facts = check_loewner_facts(&m, 1e-8).unwrap();
        assert!(!facts.all_hold());
        assert!(!facts.minus_re.psd);
    }

    #[test]
    fn rotation_surfaces_half_parts() {
        let m = t_block();
        let h = half_parts(&m);
        for part in [Part::Re, Part::Im] {
            let (rot, j) = rotate(&m, part);
            assert!(is_unitary(&j, 1e-14));
            let (top, bottom) = h.pair(part);
            assert!(rot.block(0, 0, 2, 2).distance(top) < 1e-14);
            assert!(rot.block(2, 2, 2, 2).distance(bottom) < 1e-14);
        }
        for n in 1..=6 {
            assert!(is_unitary(&rotation(n, Part::Im), 1e-12));
            assert!(is_unitary(&rotation(n, Part::Re), 1e-12));
        }
    }

    #[test]
    fn rotation_of_decoupled_equal_blocks() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let m = BlockMatrix::new(a.clone(), ComplexMatrix::zeros(2, 2), a.clone()).unwrap();
        let (rot, _) = rotate(&m, Part::Re);
        assert!(rot.distance(&a.direct_sum(&a)) < 1e-14);
    }

    #[test]
    fn pinching_block_diagonal_and_rank_one() {
        let p =
            ComplexMatrix::from_real_diagonal(&[2.0, 1.0]).direct_sum(&ComplexMatrix::identity(2));
        let (u, v) = pinching_decompose(&p).unwrap();
        let m = BlockMatrix::from_assembled(&p).unwrap();
        let d = DecompositionResult {
            u,
            v,
            top: m.a().clone(),
            bottom: m.b().clone(),
            part: Part::Re,
        };
        assert!(d.reconstruct().distance(&p) < 1e-13);

        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let (u, v) = pinching_decompose(&ones).unwrap();
        assert!(is_unitary(&u, 1e-12) && is_unitary(&v, 1e-12));
        let d = DecompositionResult {
            u,
            v,
            top: ComplexMatrix::identity(1),
            bottom: ComplexMatrix::identity(1),
            part: Part::Re,
        };
        assert!(d.reconstruct().distance(&ones) < 1e-12);
    }

    #[test]
    fn pinching_rejects_bad_input() {
        assert!(matches!(
            pinching_decompose(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0])),
            Err(Error::NotPsd { .. })
        ));
        assert!(pinching_decompose(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn decompose_t_both_parts() {
        let m = t_block();
        for part in [Part::Im, Part::Re] {
            let d = two_unitary_decompose(&m, part).unwrap();
            assert!(is_unitary(&d.u, 1e-12));
            assert!(is_unitary(&d.v, 1e-12));
            assert!(m.assemble().distance(&d.reconstruct()) <= 1e-8);
            let halves = half_parts(&m);
            let (top, bottom) = halves.pair(part);
            assert_eq!(&d.top, top);
            assert_eq!(&d.bottom, bottom);
        }
    }

    #[test]
    fn decompose_zero_coupling() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let b = ComplexMatrix::from_real_diagonal(&[1.0, 3.0]);
        let m = BlockMatrix::new(a.clone(), ComplexMatrix::zeros(2, 2), b.clone()).unwrap();
        let d = two_unitary_decompose(&m, Part::Im).unwrap();
        let mean = (&a + &b).scale_real(0.5);
        assert!(d.top.distance(&mean) < 1e-15 && d.bottom.distance(&mean) < 1e-15);
        assert!(d.relative_error(&m) < 1e-13);
    }

    #[test]
    fn decompose_rejects_indefinite() {
        let m = BlockMatrix::new(
            ComplexMatrix::identity(1),
            ComplexMatrix::identity(1).scale_real(2.0),
            ComplexMatrix::identity(1),
        )
        .unwrap();
        assert!(matches!(
            two_unitary_decompose(&m, Part::Re),
            Err(Error::NotPsd { .. })
        ));
    }
}
