//! Spectral computations: Hermitian/skew parts, definiteness tests,
//! eigenvalues, spectral radius and spectral norm.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::linalg::matrix::{C64, CMatrix, CongruencePair, HermitianMatrix};

/// Default relative tolerance for positive-definiteness verdicts.
pub const DEFAULT_PD_TOL: f64 = 1e-10;

const EIGEN_MAX_ITER: usize = 10_000;

/// Hermitian part `(A + A*)/2`, exactly Hermitian after symmetrization.
pub fn hermitian_part(a: &CMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(a)
}

/// Skew-Hermitian part `(A - A*)/2`; satisfies `X* = -X` bitwise.
pub fn skew_part(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let m = a.as_dmatrix();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = C64::new(0.0, m[(i, i)].im);
        for j in (i + 1)..n {
            let v = (m[(i, j)] - m[(j, i)].conj()) * 0.5;
            s[(i, j)] = v;
            s[(j, i)] = -v.conj();
        }
    }
    CMatrix::new(s).expect("skew part preserves shape and finiteness")
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = h.dim();
    let eig = nalgebra::SymmetricEigen::try_new(h.as_dmatrix().clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(CoreError::EigenNonConvergence { n })?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// Full Hermitian eigendecomposition: eigenvalues with matching unit
/// eigenvector columns.
pub fn hermitian_eigen(h: &HermitianMatrix) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let n = h.dim();
    let eig = nalgebra::SymmetricEigen::try_new(h.as_dmatrix().clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(CoreError::EigenNonConvergence { n })?;
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min(h: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?[0])
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn lambda_max(h: &HermitianMatrix) -> Result<f64> {
    let vals = hermitian_eigenvalues(h)?;
    Ok(vals[vals.len() - 1])
}

/// Positive-definiteness verdict with its deciding witness.
#[derive(Debug, Clone, Copy)]
pub struct PdCheck {
    /// True iff `lambda_min(H(A)) > tol * max(1, ||A||_2)`.
    pub definite: bool,
    /// Smallest eigenvalue of the Hermitian part.
    pub lambda_min: f64,
}

/// Tests whether `A` is (non-Hermitian) positive definite: the Hermitian part
/// must be positive definite beyond a relative threshold. Semidefinite
/// boundaries report `false` with a witness near zero.
pub fn is_positive_definite(a: &CMatrix, tol: f64) -> Result<PdCheck> {
    let h = hermitian_part(a);
    let lmin = lambda_min(&h)?;
    let threshold = tol * spectral_norm(a)?.max(1.0);
    Ok(PdCheck {
        definite: lmin > threshold,
        lambda_min: lmin,
    })
}

/// All eigenvalues of a general complex matrix via the Schur form.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(a.as_dmatrix().clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(CoreError::EigenNonConvergence { n })?;
    if let Some(vals) = schur.eigenvalues() {
        return Ok(vals.iter().copied().collect());
    }
    // The complex Schur form is upper triangular; a populated subdiagonal
    // means the iteration stalled.
    let (_, t) = schur.unpack();
    let scale = a.frobenius_norm().max(1.0);
    let mut sub: f64 = 0.0;
    for i in 1..n {
        sub = sub.max(t[(i, i - 1)].norm());
    }
    if sub > 1e-10 * scale {
        return Err(CoreError::EigenNonConvergence { n });
    }
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Spectral radius: maximum eigenvalue modulus.
pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Spectral norm: largest singular value.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    let n = a.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let svd = nalgebra::SVD::try_new(a.as_dmatrix().clone(), false, false, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(CoreError::EigenNonConvergence { n })?;
    Ok(svd.singular_values.max())
}

/// Smallest singular value.
pub fn sigma_min(a: &CMatrix) -> Result<f64> {
    let n = a.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let svd = nalgebra::SVD::try_new(a.as_dmatrix().clone(), false, false, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(CoreError::EigenNonConvergence { n })?;
    Ok(svd.singular_values.min())
}

/// Simultaneous diagonalization of a Hermitian positive definite `A` and a
/// Hermitian `B`: returns `(C, D)` with `A = C*C`, `B = C*DC` and `D` real
/// diagonal. Uses the Cholesky factor of `A` followed by a unitary
/// diagonalization of the transformed `B`.
pub fn simultaneous_diagonalize(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<CongruencePair> {
    let n = a.dim();
    if b.dim() != n {
        return Err(CoreError::DimensionMismatch {
            context: "simultaneous_diagonalize",
            expected: n,
            found: b.dim(),
        });
    }
    let l = crate::linalg::solve::cholesky_lower(a)?;
    // W = L^{-1} B L^{-*}, Hermitian by construction.
    let w = crate::linalg::solve::reduce_to_standard(&l, b)?;
    let (d, q) = hermitian_eigen(&w)?;
    // C = Q* L*  gives  C*C = L Q Q* L* = A  and  C* D C = L W L* = B.
    let c = CMatrix::new(q.adjoint() * l.as_dmatrix().adjoint())?;
    CongruencePair::new(c, d, a, b)
}

/// Complex unit phase `e^{it}`.
pub fn unit_phase(t: f64) -> C64 {
    Complex::from_polar(1.0, t)
}
