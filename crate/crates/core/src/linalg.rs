//! Small dense helpers shared by the solvers and the block oracle.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{RecoveryError, Result};

/// Systems whose condition estimate exceeds this are rejected as singular.
pub const MAX_CONDITION: f64 = 1e14;

/// Cholesky factorization of a symmetric positive definite system matrix,
/// rejected when the factor's diagonal spread says it is numerically
/// singular.
pub(crate) struct SpdFactor {
    chol: Cholesky<f64, Dyn>,
}

impl SpdFactor {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        let chol = a
            .cholesky()
            .ok_or(RecoveryError::SingularSystem { condition: f64::INFINITY })?;
        let condition = condition_estimate(&chol);
        if condition.is_nan() || condition > MAX_CONDITION {
            return Err(RecoveryError::SingularSystem { condition });
        }
        Ok(Self { chol })
    }

    pub fn solve(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol.solve(b)
    }

    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    pub fn ln_determinant(&self) -> f64 {
        self.chol.ln_determinant()
    }
}

/// Squared ratio of the extreme diagonal entries of the Cholesky factor.
/// A cheap lower bound on the 2-norm condition number.
fn condition_estimate(chol: &Cholesky<f64, Dyn>) -> f64 {
    let l = chol.l_dirty();
    let (lo, hi) = (0..l.nrows()).fold((f64::INFINITY, 0.0f64), |(lo, hi), i| {
        let d = l[(i, i)].abs();
        (lo.min(d), hi.max(d))
    });
    if lo == 0.0 {
        return f64::INFINITY;
    }
    (hi / lo).powi(2)
}

/// Whitening by a symmetric positive definite correlation matrix, used to
/// evaluate quadratic Mahalanobis forms `x B⁻¹ xᵀ`.
pub(crate) struct Whitener {
    chol: Cholesky<f64, Dyn>,
}

impl Whitener {
    pub fn new(b: &DMatrix<f64>) -> Result<Self> {
        let chol = b.clone().cholesky().ok_or(RecoveryError::NotPositiveDefinite)?;
        Ok(Self { chol })
    }

    /// `x B⁻¹ xᵀ` for a row (or column) given as an iterator of entries.
    pub fn quadratic<'a>(&self, x: impl IntoIterator<Item = &'a f64>) -> f64 {
        let mut z: DVector<f64> = DVector::from_iterator(self.chol.l_dirty().nrows(), x.into_iter().copied());
        self.chol.l_dirty().solve_lower_triangular_mut(&mut z);
        z.norm_squared()
    }
}

/// `‖a − b‖_F / ‖b‖_F`, with `0/0 = 0`.
pub(crate) fn relative_change(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let diff = (a - b).norm();
    let base = b.norm();
    if diff == 0.0 {
        0.0
    } else if base == 0.0 {
        f64::INFINITY
    } else {
        diff / base
    }
}
