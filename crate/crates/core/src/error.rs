//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by matrix kernels, splitting constructors, certificates
/// and the iteration engines.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is numerically singular: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    Singular { pivot: f64, threshold: f64 },

    #[error("eigensolver did not converge on a {n}x{n} matrix")]
    EigenNonConvergence { n: usize },

    #[error("matrix is not positive definite: lambda_min of Hermitian part is {lambda_min:.6e}")]
    NotPositiveDefinite { lambda_min: f64 },

    #[error("matrix is not positive definite: leading minor {minor} has nonpositive pivot {pivot:.6e}")]
    NotPositiveDefiniteMinor { minor: usize, pivot: f64 },

    #[error("splitting does not reconstruct A: relative deviation {deviation:.3e}")]
    SplittingMismatch { deviation: f64 },

    #[error("part {part}: M is singular")]
    SingularPartM { part: usize },

    #[error("part {part}: A != M - N, relative deviation {deviation:.3e}")]
    PartMismatch { part: usize, deviation: f64 },

    #[error("weights sum != I: max deviation {deviation:.3e}")]
    WeightSumNotIdentity { deviation: f64 },

    #[error("weight matrix {part} has negative entry {value:.3e} at index {index}")]
    NegativeWeight {
        part: usize,
        index: usize,
        value: f64,
    },

    #[error("certificate '{condition}' needs scalar weights E_k = beta_k I")]
    ScalarWeightsRequired { condition: &'static str },

    #[error("rho[{index}] = {rho:.6e} below bound {bound:.6e}")]
    RhoBelowBound { index: usize, rho: f64, bound: f64 },

    #[error("matrix must be real: max imaginary magnitude {deviation:.3e}")]
    NotReal { deviation: f64 },

    #[error("matrix is symmetric; shifted triangular construction targets nonsymmetric input")]
    SymmetricInput,

    #[error("alpha must be positive, got {alpha}")]
    NonPositiveAlpha { alpha: f64 },

    #[error("{name} part of the splitting is zero")]
    ZeroPart { name: &'static str },

    #[error("block sizes sum to {sum}, matrix dimension is {n}")]
    BlockSizesMismatch { sum: usize, n: usize },

    #[error("condition '{condition}' requires the {expected} convention")]
    WrongConvention {
        condition: &'static str,
        expected: &'static str,
    },

    #[error("splitting identity violated: relative residual {deviation:.3e} (inconsistent M, N)")]
    InconsistentSplitting { deviation: f64 },

    #[error("bracket supported for normal matrices only: ||A*A - AA*||_F = {deviation:.3e}")]
    NotNormal { deviation: f64 },

    #[error("block ({row},{col}) violates class membership: {reason}")]
    BlockClassViolation {
        row: usize,
        col: usize,
        reason: &'static str,
    },

    #[error("t_samples must be at least 8, got {got}")]
    TooFewSamples { got: usize },

    #[error("two evaluation routes disagree in {context}: {first:.12e} vs {second:.12e}")]
    RouteDisagreement {
        context: &'static str,
        first: f64,
        second: f64,
    },

    #[error("internal identity check failed in {context}: residual {residual:.3e}")]
    IdentityCheckFailed { context: &'static str, residual: f64 },

    #[error("invalid solve configuration: {reason}")]
    InvalidConfig { reason: &'static str },

    #[error("divergence detected at iteration {iteration}: relative residual {residual:.3e}")]
    Divergence { iteration: usize, residual: f64 },

    #[error("base iteration not contractive: rho = {rho}")]
    NotContractive { rho: f64 },

    #[error("chain rho <= ||M|| <= ||V|| < 1 violated at alpha = {alpha}: ({rho_m:.6e}, {norm_m:.6e}, {norm_v:.6e})")]
    ChainViolation {
        alpha: f64,
        rho_m: f64,
        norm_m: f64,
        norm_v: f64,
    },

    #[error("task {task} panicked: {message}")]
    TaskPanicked { task: usize, message: String },

    #[error("generator parameter out of range: {reason}")]
    GeneratorParameter { reason: String },

    #[error("matrix market parse error at line {line}: {reason}")]
    MarketParse { line: usize, reason: String },

    #[error("matrix market i/o error on {path}: {reason}")]
    MarketIo { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
