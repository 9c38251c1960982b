//! Dense solvers and convergence certificates for non-Hermitian positive
//! definite linear systems `Ax = b`.
//!
//! The crate provides two stationary engines, the parallel multisplitting
//! iteration and the parallel PSS (positive-definite / skew-Hermitian
//! splitting) iteration, together with a certificate layer that decides
//! the splitting conditions guaranteeing `rho(T) < 1` and a property layer
//! (block comparison matrices, generalized M-matrix membership, the
//! `A_t` definiteness family) backing those certificates.
//!
//! Matrices are dense and complex; everything is sized for certification
//! work at desk scale, where exactness of spectral computations matters
//! more than throughput.

pub mod certificates;
pub mod error;
pub mod iteration;
pub mod linalg;
pub mod parallel;
pub mod problems;
pub mod pss_params;
pub mod splittings;

pub use error::{CoreError, Result};
pub use linalg::{C64, CMatrix, CVector, CongruencePair, HermitianMatrix};
pub use splittings::{Multisplitting, PssSplitting, SplitConvention, Splitting};
pub use iteration::{IterationReport, SolveConfig};
