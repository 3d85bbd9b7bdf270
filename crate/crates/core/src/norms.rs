//! Unitarily invariant norms through singular values, and Fan dominance.
//!
//! `||P|| <= ||Q||` holds for every symmetric norm exactly when
//! `||P||_k <= ||Q||_k` for every Ky Fan k-norm, so a comparison of the two
//! cumulative singular-value profiles settles the whole family at once.
//! Operands of different sizes are compared after padding with zero singular
//! values (`A ↦ A ⊕ 0`).

use crate::error::{Error, Result};
use crate::numkernel::{singular_values, ComplexMatrix};
use crate::tolerance;

/// Descending singular values and their running sums.
#[derive(Debug, Clone, PartialEq)]
pub struct KyFanProfile {
    sigma: Vec<f64>,
    cumsum: Vec<f64>,
}

impl KyFanProfile {
    /// Builds a profile from arbitrary-order nonnegative values, padded with
    /// zeros to `pad_to` entries.
    pub fn from_singular_values(mut sigma: Vec<f64>, pad_to: usize) -> Result<Self> {
        if pad_to < sigma.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot pad {} singular values down to {pad_to}",
                sigma.len()
            )));
        }
        if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::DimensionMismatch(
                "singular values must be finite and nonnegative".into(),
            ));
        }
        sigma.sort_by(|a, b| b.total_cmp(a));
        sigma.resize(pad_to, 0.0);
        let cumsum = sigma
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        Ok(Self { sigma, cumsum })
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// `cumsum()[k - 1]` is the Ky Fan k-norm.
    pub fn cumsum(&self) -> &[f64] {
        &self.cumsum
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// Ky Fan k-norm, `1 <= k <= len`.
    pub fn ky_fan(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.len(),
            });
        }
        Ok(self.cumsum[k - 1])
    }

    pub fn spectral(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn trace_norm(&self) -> f64 {
        self.cumsum.last().copied().unwrap_or(0.0)
    }

    pub fn frobenius(&self) -> f64 {
        self.sigma.iter().map(|s| s * s).sum::<f64>().sqrt()
    }

    /// Same profile with extra zero singular values.
    pub fn padded(&self, size: usize) -> Result<Self> {
        Self::from_singular_values(self.sigma.clone(), size)
    }
}

/// Singular-value profile of `m`, padded with zeros to `pad_to` entries.
pub fn ky_fan_profile(m: &ComplexMatrix, pad_to: usize) -> Result<KyFanProfile> {
    let min_dim = m.rows().min(m.cols());
    if pad_to < min_dim {
        return Err(Error::DimensionMismatch(format!(
            "pad_to {pad_to} is below min(rows, cols) = {min_dim}"
        )));
    }
    KyFanProfile::from_singular_values(singular_values(m)?, pad_to)
}

/// Ky Fan k-norm; `k` may run up to `max(rows, cols)`, zero-padded.
pub fn ky_fan(m: &ComplexMatrix, k: usize) -> Result<f64> {
    ky_fan_profile(m, m.rows().max(m.cols()))?.ky_fan(k)
}

pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// Entrywise; equals `sqrt(sum sigma_i^2)`.
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Per-k comparison of two padded profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub dominated: bool,
    /// `margins[k-1] = ||Q||_k - ||P||_k`.
    pub margins: Vec<f64>,
    /// 1-based index of the first `k` with `margin < -tol`.
    pub first_violation: Option<usize>,
    pub tol: f64,
    pub dominated_profile: KyFanProfile,
    pub dominating_profile: KyFanProfile,
}

impl DominanceReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when every margin is strictly positive.
    pub fn strict(&self) -> bool {
        self.margins.iter().all(|&m| m > 0.0)
    }
}

/// `1e-8 * max(1, ||Q||_tr)`.
pub fn default_dominance_tol(q: &KyFanProfile) -> f64 {
    tolerance::DEFAULT * tolerance::scale(q.trace_norm())
}

/// Compares two profiles after padding both to the longer length.
/// `tol = None` selects [`default_dominance_tol`].
pub fn dominance(p: &KyFanProfile, q: &KyFanProfile, tol: Option<f64>) -> DominanceReport {
    let size = p.len().max(q.len());
    let p = p.padded(size).expect("padding up never fails");
    let q = q.padded(size).expect("padding up never fails");
    let tol = tol.unwrap_or_else(|| default_dominance_tol(&q));
    let margins: Vec<f64> = q
        .cumsum()
        .iter()
        .zip(p.cumsum())
        .map(|(qk, pk)| qk - pk)
        .collect();
    let first_violation = margins.iter().position(|&m| m < -tol).map(|i| i + 1);
    DominanceReport {
        dominated: first_violation.is_none(),
        margins,
        first_violation,
        tol,
        dominated_profile: p,
        dominating_profile: q,
    }
}

/// Does `Q` dominate `P` in every symmetric norm? Both operands are padded
/// to the larger dimension.
pub fn fan_dominates(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<DominanceReport> {
    let size = p.rows().max(p.cols()).max(q.rows()).max(q.cols());
    let pp = ky_fan_profile(p, size)?;
    let qp = ky_fan_profile(q, size)?;
    Ok(dominance(&pp, &qp, tol))
}
