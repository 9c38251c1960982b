//! Direct dense solves with partial pivoting.

use nalgebra::{DMatrix, DVector, Dyn};

use crate::error::{CoreError, Result};
use crate::linalg::matrix::{C64, CMatrix};
use crate::linalg::spectral::spectral_norm;

/// Relative pivot threshold below which a factorization is rejected.
pub const PIVOT_REL_THRESHOLD: f64 = 1e-14;

/// Reusable LU factorization of a square complex matrix.
///
/// The factorization is computed once and checked against the pivot
/// threshold `1e-14 * ||M||_2`; iteration engines keep one factor per
/// splitting part and reuse it across outer iterations.
pub struct LuFactor {
    lu: nalgebra::LU<C64, Dyn, Dyn>,
    n: usize,
}

impl LuFactor {
    pub fn new(m: &CMatrix) -> Result<Self> {
        let n = m.dim();
        let norm = spectral_norm(m)?;
        let lu = m.as_dmatrix().clone().lu();
        let threshold = PIVOT_REL_THRESHOLD * norm;
        let mut min_pivot = f64::INFINITY;
        for i in 0..n {
            min_pivot = min_pivot.min(lu.u()[(i, i)].norm());
        }
        if n > 0 && min_pivot <= threshold {
            return Err(CoreError::Singular {
                pivot: min_pivot,
                threshold,
            });
        }
        Ok(Self { lu, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_vec(&self, rhs: &DVector<C64>) -> Result<DVector<C64>> {
        assert_eq!(rhs.len(), self.n, "rhs length");
        self.lu.solve(rhs).ok_or(CoreError::Singular {
            pivot: 0.0,
            threshold: 0.0,
        })
    }

    pub fn solve_mat(&self, rhs: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        assert_eq!(rhs.nrows(), self.n, "rhs rows");
        self.lu.solve(rhs).ok_or(CoreError::Singular {
            pivot: 0.0,
            threshold: 0.0,
        })
    }

    /// Solves `M X = B` for a square right-hand side.
    pub fn solve_cmatrix(&self, rhs: &CMatrix) -> Result<CMatrix> {
        CMatrix::new(self.solve_mat(rhs.as_dmatrix())?)
    }
}

/// Cholesky factor of a Hermitian positive definite matrix: returns the
/// lower triangular `L` with `A = L L*`. Fails on the first nonpositive
/// pivot, naming the leading minor. (The generic complex Cholesky in the
/// backing library would take complex square roots of negative pivots
/// instead of failing, so the factorization is done here.)
pub fn cholesky_lower(h: &crate::linalg::matrix::HermitianMatrix) -> Result<CMatrix> {
    let n = h.dim();
    let a = h.as_dmatrix();
    let mut l = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        let mut s = a[(j, j)].re;
        for k in 0..j {
            s -= l[(j, k)].norm_sqr();
        }
        if s <= 0.0 || !s.is_finite() {
            return Err(CoreError::NotPositiveDefiniteMinor {
                minor: j + 1,
                pivot: s,
            });
        }
        let pivot = s.sqrt();
        l[(j, j)] = C64::new(pivot, 0.0);
        for i in (j + 1)..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / pivot;
        }
    }
    CMatrix::new(l)
}

/// Reduction of a Hermitian `B` to standard form against the Cholesky
/// factor `L`: returns `L^{-1} B L^{-*}`, exactly symmetrized. This turns
/// the generalized eigenproblem `B x = mu (L L*) x` into an ordinary
/// Hermitian one.
pub fn reduce_to_standard(
    l: &CMatrix,
    b: &crate::linalg::matrix::HermitianMatrix,
) -> Result<crate::linalg::matrix::HermitianMatrix> {
    let ld = l.as_dmatrix();
    let y = ld
        .solve_lower_triangular(b.as_dmatrix())
        .ok_or(CoreError::Singular {
            pivot: 0.0,
            threshold: 0.0,
        })?;
    let w = ld
        .solve_lower_triangular(&y.adjoint())
        .ok_or(CoreError::Singular {
            pivot: 0.0,
            threshold: 0.0,
        })?
        .adjoint();
    Ok(crate::linalg::matrix::HermitianMatrix::symmetrize(
        &CMatrix::new(w)?,
    ))
}

/// One-shot dense solve `Mx = rhs`.
pub fn solve_dense(m: &CMatrix, rhs: &DVector<C64>) -> Result<DVector<C64>> {
    LuFactor::new(m)?.solve_vec(rhs)
}

/// One-shot dense solve with a matrix right-hand side.
pub fn solve_dense_mat(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    LuFactor::new(m)?.solve_cmatrix(rhs)
}

/// Dense inverse via LU; desk-scale sizes only.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    solve_dense_mat(m, &CMatrix::identity(m.dim()))
}
