//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::tolerance;

/// Eigenvalues sorted descending with matching unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralData {
    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `V diag(f(lambda)) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let out = ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * vals[k] * v[(j, k)].conj()).sum()
        });
        out.hermitian_part()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| l)
    }
}

/// Fails with [`Error::NonHermitianInput`] unless `h` is square and
/// `||h - h*||_F <= 1e-10 * max(1, ||h||_F)`.
pub fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let Some(deviation) = h.hermitian_deviation() else {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    };
    let allowed = tolerance::HERMITICITY * tolerance::scale(h.frobenius_norm());
    if deviation > allowed {
        return Err(Error::NonHermitianInput { deviation, allowed });
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Hermitian eigendecomposition `H = V diag(lambda) V*`, eigenvalues descending.
pub fn herm_eig(h: &ComplexMatrix) -> Result<SpectralData> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = tolerance::JACOBI_OFF_DIAGONAL * a.frobenius_norm();

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweep == tolerance::JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: sweep,
                off_diagonal: off,
            });
        }
        sweep += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, descending.
pub fn herm_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(herm_eig(h)?.eigenvalues)
}

/// One Jacobi step annihilating `a[p][q]`: a phase fix making the pivot real,
/// followed by a real plane rotation. `a <- W* a W`, `v <- v W`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= f64::MIN_POSITIVE {
        return;
    }
    let phase = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let w_pp = Complex64::new(c, 0.0);
    let w_pq = Complex64::new(s, 0.0);
    let w_qp = phase * -s;
    let w_qq = phase * c;

    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::is_unitary;
    use crate::numkernel::matrix::{I, ONE};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn invariant_block_of_t() {
        let h = ComplexMatrix::from_rows(&[&[c(5.0, 0.0), I], &[-I, c(5.0, 0.0)]]);
        let eig = herm_eig(&h).unwrap();
        assert!((eig.eigenvalues[0] - 6.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 4.0).abs() < 1e-14);
        assert!(eig.reconstruct().distance(&h) < 1e-13);
    }

    #[test]
    fn diagonal_input_is_untouched() {
        let h = ComplexMatrix::from_real_diagonal(&[3.0, 1.0]);
        let eig = herm_eig(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(eig.eigenvectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn ascending_diagonal_is_sorted() {
        let h = ComplexMatrix::from_real_diagonal(&[-1.0, 2.0, 0.5]);
        let eig = herm_eig(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![2.0, 0.5, -1.0]);
        assert!(eig.reconstruct().distance(&h) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = ComplexMatrix::from_rows(&[&[ONE, I], &[I, ONE]]);
        assert!(matches!(herm_eig(&h), Err(Error::NonHermitianInput { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(herm_eig(&rect), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn zero_matrix() {
        let eig = herm_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn dense_complex_hermitian() {
        let h = ComplexMatrix::from_rows(&[
            &[c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            &[c(1.0, 1.0), c(-1.0, 0.0), c(0.25, 0.0)],
            &[c(0.0, -0.5), c(0.25, 0.0), c(3.0, 0.0)],
        ]);
        let eig = herm_eig(&h).unwrap();
        assert!(eig.reconstruct().distance(&h) < 1e-13);
        assert!(is_unitary(&eig.eigenvectors, 1e-13));
        let tr: f64 = eig.eigenvalues.iter().sum();
        assert!((tr - 4.0).abs() < 1e-13);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }
}
