//! Dense complex square matrices and the exactly-Hermitian wrapper.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{CoreError, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Complex column vector.
pub type CVector = DVector<C64>;

/// Dense complex square matrix with finite entries.
///
/// This is the universal carrier for system matrices, splitting parts,
/// iteration matrices and lifted block matrices. Construction validates
/// squareness and finiteness; the payload is immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    inner: DMatrix<C64>,
}

impl CMatrix {
    /// Wraps a dense matrix, validating the type invariants.
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(CoreError::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let z = inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(CoreError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Builds from a row-major slice of complex entries.
    pub fn from_rows(n: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(CoreError::DimensionMismatch {
                context: "CMatrix::from_rows",
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    /// Builds from a row-major slice of real entries.
    pub fn from_real_rows(n: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_rows(n, &complex)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DMatrix::zeros(n, n),
        }
    }

    /// Diagonal matrix from complex diagonal entries.
    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Self { inner: m }
    }

    /// Diagonal matrix from real diagonal entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let entries: Vec<C64> = diag.iter().map(|&d| C64::new(d, 0.0)).collect();
        Self::from_diagonal(&entries)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.inner
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            inner: self.inner.map(|z| z * factor),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary-part magnitude; zero for real matrices.
    pub fn max_imag_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        &self.inner * v
    }

    /// Scales row `i` by `factors[i]`.
    pub fn row_scaled(&self, factors: &[f64]) -> Self {
        assert_eq!(factors.len(), self.dim(), "row scale length");
        let mut m = self.inner.clone();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                m[(i, j)] *= factors[i];
            }
        }
        Self { inner: m }
    }

    /// Scales column `j` by `factors[j]`.
    pub fn col_scaled(&self, factors: &[f64]) -> Self {
        assert_eq!(factors.len(), self.dim(), "col scale length");
        let mut m = self.inner.clone();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                m[(i, j)] *= factors[j];
            }
        }
        Self { inner: m }
    }

    /// Strictly lower-triangular part (entries below the diagonal).
    pub fn strictly_lower(&self) -> Self {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 1..n {
            for j in 0..i {
                m[(i, j)] = self.inner[(i, j)];
            }
        }
        Self { inner: m }
    }

    /// Strictly upper-triangular part (entries above the diagonal).
    pub fn strictly_upper(&self) -> Self {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                m[(i, j)] = self.inner[(i, j)];
            }
        }
        Self { inner: m }
    }

    /// Diagonal part as a matrix.
    pub fn diagonal_part(&self) -> Self {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.inner[(i, i)];
        }
        Self { inner: m }
    }
}

impl std::ops::Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix add dimension");
        CMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl std::ops::Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix sub dimension");
        CMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl std::ops::Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix mul dimension");
        CMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl std::ops::Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix {
            inner: -self.inner.clone(),
        }
    }
}

/// Hermitian matrix, stored exactly Hermitian.
///
/// `new` accepts input that is Hermitian up to a small relative deviation and
/// then symmetrizes it so that `h[(i,j)] == conj(h[(j,i)])` holds bitwise.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DMatrix<C64>,
}

/// Relative deviation accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_CHECK_TOL: f64 = 1e-13;

impl HermitianMatrix {
    /// Validates near-Hermitian input, then stores the exact symmetrization.
    pub fn new(m: &CMatrix) -> Result<Self> {
        let scale = m.max_abs();
        let mut deviation: f64 = 0.0;
        let a = m.as_dmatrix();
        for i in 0..m.dim() {
            for j in i..m.dim() {
                let d = (a[(i, j)] - a[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        let tolerance = HERMITIAN_CHECK_TOL * scale;
        if deviation > tolerance {
            return Err(CoreError::NotHermitian {
                deviation,
                tolerance,
            });
        }
        Ok(Self::symmetrize(m))
    }

    /// Unconditional symmetrization `(M + M*)/2`, stored exactly Hermitian.
    pub fn symmetrize(m: &CMatrix) -> Self {
        let n = m.dim();
        let a = m.as_dmatrix();
        let mut h = DMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = C64::new(a[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
                h[(i, j)] = v;
                h[(j, i)] = v.conj();
            }
        }
        Self { inner: h }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    /// View as a general matrix (clones the payload).
    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix {
            inner: self.inner.clone(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }
}

/// Congruence pair `(C, D)` with `A = C*C` and `B = C*DC`, `D` real diagonal.
///
/// Produced by [`crate::linalg::simultaneous_diagonalize`]; the constructor
/// re-checks the reconstruction identities against the source pair.
#[derive(Debug, Clone)]
pub struct CongruencePair {
    c: CMatrix,
    d: Vec<f64>,
}

impl CongruencePair {
    /// Builds the pair and verifies it reconstructs `(a, b)`.
    pub fn new(c: CMatrix, d: Vec<f64>, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        if d.len() != c.dim() {
            return Err(CoreError::DimensionMismatch {
                context: "CongruencePair diagonal",
                expected: c.dim(),
                found: d.len(),
            });
        }
        let pair = Self { c, d };
        let a_m = a.to_cmatrix();
        let b_m = b.to_cmatrix();
        let ra = (&pair.reconstruct_a() - &a_m).frobenius_norm();
        let rb = (&pair.reconstruct_b() - &b_m).frobenius_norm();
        if ra > 1e-10 * a_m.frobenius_norm() {
            return Err(CoreError::IdentityCheckFailed {
                context: "congruence pair A = C*C",
                residual: ra,
            });
        }
        if rb > 1e-10 * (b_m.frobenius_norm() + 1.0) {
            return Err(CoreError::IdentityCheckFailed {
                context: "congruence pair B = C*DC",
                residual: rb,
            });
        }
        Ok(pair)
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// `C*C`.
    pub fn reconstruct_a(&self) -> CMatrix {
        &self.c.adjoint() * &self.c
    }

    /// `C*DC`.
    pub fn reconstruct_b(&self) -> CMatrix {
        let dc = self.c.row_scaled(&self.d);
        &self.c.adjoint() * &dc
    }
}
