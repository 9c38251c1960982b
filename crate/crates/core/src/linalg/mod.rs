//! Dense complex matrix kernel: types, factorizations and spectral
//! computations consumed by every other module.

pub mod market;
mod matrix;
mod solve;
mod spectral;

pub use matrix::{C64, CMatrix, CVector, CongruencePair, HermitianMatrix, HERMITIAN_CHECK_TOL};
pub use solve::{
    cholesky_lower, inverse, reduce_to_standard, solve_dense, solve_dense_mat, LuFactor,
    PIVOT_REL_THRESHOLD,
};
pub use spectral::{
    eigenvalues, hermitian_eigen, hermitian_eigenvalues, hermitian_part, is_positive_definite,
    lambda_max, lambda_min, sigma_min, simultaneous_diagonalize, skew_part,
    spectral_norm, spectral_radius, unit_phase, PdCheck, DEFAULT_PD_TOL,
};
