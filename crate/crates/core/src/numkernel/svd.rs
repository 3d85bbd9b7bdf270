//! Singular value and polar decompositions built on the Hermitian eigensolver.

use num_complex::Complex64;

use super::eigen::herm_eig;
use super::matrix::{inner, vec_norm, ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::tolerance;

/// `X = U diag(sigma) V*` with `U` (rows x rows) and `V` (cols x cols) unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    /// `min(rows, cols)` values, nonnegative, descending.
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let k = self.singular_values.len();
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k)
                .map(|l| self.u[(i, l)] * self.singular_values[l] * self.v[(j, l)].conj())
                .sum()
        })
    }
}

/// `X = U |X|` with `U` unitary and `|X| = (X*X)^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub modulus: ComplexMatrix,
}

/// SVD via the eigendecomposition of `X*X`.
///
/// Right vectors come from the eigenvectors; each singular value is taken as
/// `||X v_i||` rather than `sqrt(lambda_i)`, which keeps small singular values
/// accurate to roughly `eps * ||X||`. Left vectors are `X v_i / sigma_i` for
/// `sigma_i >= 1e-12 sigma_max`; the rest are filled in by Gram-Schmidt.
pub fn svd(x: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = (x.rows(), x.cols());
    let gram = (&x.adjoint() * x).hermitian_part();
    let eig = herm_eig(&gram)?;

    let mut columns: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .map(|j| {
            let v = eig.eigenvectors.column(j);
            let w = x.mul_vec(&v);
            (vec_norm(&w), w, v)
        })
        .collect();
    columns.sort_by(|a, b| b.0.total_cmp(&a.0));

    let k = m.min(n);
    let sigma_max = columns[0].0;
    let cutoff = tolerance::SVD_SMALL_SINGULAR * sigma_max;

    let mut left: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for (sigma, w, _) in columns.iter().take(k) {
        if *sigma > cutoff && *sigma > 0.0 {
            let u: Vec<Complex64> = w.iter().map(|z| z / *sigma).collect();
            if let Some(u) = orthonormalize_against(&left, u) {
                left.push(u);
                continue;
            }
        }
        break;
    }
    let left = complete_orthonormal(left, m);

    let singular_values = columns.iter().take(k).map(|c| c.0).collect();
    let mut v = ComplexMatrix::zeros(n, n);
    for (j, (_, _, col)) in columns.iter().enumerate() {
        v.set_column(j, col);
    }
    let mut u = ComplexMatrix::zeros(m, m);
    for (j, col) in left.iter().enumerate() {
        u.set_column(j, col);
    }
    Ok(Svd {
        u,
        singular_values,
        v,
    })
}

/// Singular values only, descending.
pub fn singular_values(x: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(x)?.singular_values)
}

/// Right polar decomposition `X = U |X|`. For singular `X` the unitary factor is
/// completed on the null space and is therefore not unique.
pub fn polar_right(x: &ComplexMatrix) -> Result<PolarFactors> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "polar decomposition needs a square matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let s = svd(x)?;
    let unitary = &s.u * &s.v.adjoint();
    let n = x.rows();
    let modulus = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|l| s.v[(i, l)] * s.singular_values[l] * s.v[(j, l)].conj())
            .sum()
    })
    .hermitian_part();
    Ok(PolarFactors { unitary, modulus })
}

/// Two passes of modified Gram-Schmidt of `u` against `basis`; `None` when the
/// residual collapses.
fn orthonormalize_against(
    basis: &[Vec<Complex64>],
    mut u: Vec<Complex64>,
) -> Option<Vec<Complex64>> {
    let start = vec_norm(&u);
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, &u);
            for (ui, bi) in u.iter_mut().zip(b) {
                *ui -= proj * bi;
            }
        }
    }
    let norm = vec_norm(&u);
    if norm <= 1e-3 * start {
        return None;
    }
    Some(u.into_iter().map(|z| z / norm).collect())
}

/// Extends orthonormal `basis` to `dim` vectors using standard basis candidates.
pub(crate) fn complete_orthonormal(
    mut basis: Vec<Vec<Complex64>>,
    dim: usize,
) -> Vec<Vec<Complex64>> {
    while basis.len() < dim {
        // pick the unit vector with the largest residual for stability
        let best = (0..dim)
            .filter_map(|e| {
                let mut cand = vec![ZERO; dim];
                cand[e] = Complex64::new(1.0, 0.0);
                let mut resid = cand.clone();
                for b in &basis {
                    let proj = inner(b, &resid);
                    for (r, bi) in resid.iter_mut().zip(b) {
                        *r -= proj * bi;
                    }
                }
                let norm = vec_norm(&resid);
                (norm > 0.0).then_some((norm, cand))
            })
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("orthonormal completion needs a spanning candidate");
        let u = orthonormalize_against(&basis, best.1).expect("residual is nonzero");
        basis.push(u);
    }
    basis
}
