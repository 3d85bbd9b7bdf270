//! Partially pivoted LU: determinants and inverses for small dense matrices.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

struct Lu {
    factors: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

fn factor(m: &ComplexMatrix) -> Result<Lu> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut singular = false;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap();
        if a[(pivot, k)] == ZERO {
            singular = true;
            continue;
        }
        if pivot != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
            perm.swap(k, pivot);
            sign = -sign;
        }
        let d = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / d;
            a[(i, k)] = f;
            for j in k + 1..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
        }
    }
    Ok(Lu {
        factors: a,
        perm,
        sign,
        singular,
    })
}

/// Determinant via partially pivoted LU. Singular input gives (approximately) zero.
pub fn det(m: &ComplexMatrix) -> Result<Complex64> {
    let lu = factor(m)?;
    if lu.singular {
        return Ok(ZERO);
    }
    let prod: Complex64 = lu.factors.diagonal().into_iter().product();
    Ok(prod * lu.sign)
}

/// Inverse via LU; errors on exactly singular input.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = factor(m)?;
    if lu.singular {
        return Err(Error::DimensionMismatch("matrix is singular".into()));
    }
    let n = m.rows();
    let a = &lu.factors;
    let mut inv = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        let mut y: Vec<Complex64> = (0..n)
            .map(|i| if lu.perm[i] == col { ONE } else { ZERO })
            .collect();
        for i in 0..n {
            for j in 0..i {
                let l = a[(i, j)];
                let yj = y[j];
                y[i] -= l * yj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = a[(i, j)];
                let yj = y[j];
                y[i] -= u * yj;
            }
            y[i] /= a[(i, i)];
        }
        inv.set_column(col, &y);
    }
    Ok(inv)
}
