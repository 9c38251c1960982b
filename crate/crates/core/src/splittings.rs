//! Construction and validation of single splittings, multisplittings and
//! PSS triples, including the shifted-triangular multisplitting of
//! Hadjidimos type and the TS/BTS constructions.

use crate::error::{CoreError, Result};
use crate::linalg::{
    is_positive_definite, lambda_min, skew_part, CMatrix, HermitianMatrix,
    LuFactor, DEFAULT_PD_TOL,
};

/// Relative reconstruction tolerance for splitting validation.
pub const SPLIT_RECONSTRUCT_TOL: f64 = 1e-12;

/// Entrywise tolerance for weight matrices summing to the identity.
pub const WEIGHT_SUM_TOL: f64 = 1e-13;

/// Sign convention tying `(M, N)` to `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitConvention {
    /// `A = M - N` (stationary iteration form).
    Difference,
    /// `A = M + N` (PSS generator form).
    Sum,
}

/// A validated single splitting of `A`.
#[derive(Debug, Clone)]
pub struct Splitting {
    a: CMatrix,
    m: CMatrix,
    n: CMatrix,
    convention: SplitConvention,
}

impl Splitting {
    /// Builds `A = M - N`, checking reconstruction and nonsingularity of `M`.
    pub fn difference(a: CMatrix, m: CMatrix, n: CMatrix) -> Result<Self> {
        Self::build(a, m, n, SplitConvention::Difference)
    }

    /// Builds `A = M + N`.
    pub fn sum(a: CMatrix, m: CMatrix, n: CMatrix) -> Result<Self> {
        Self::build(a, m, n, SplitConvention::Sum)
    }

    fn build(a: CMatrix, m: CMatrix, n: CMatrix, convention: SplitConvention) -> Result<Self> {
        let dim = a.dim();
        for (label, mat) in [("M", &m), ("N", &n)] {
            if mat.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    context: match label {
                        "M" => "splitting part M",
                        _ => "splitting part N",
                    },
                    expected: dim,
                    found: mat.dim(),
                });
            }
        }
        let combined = match convention {
            SplitConvention::Difference => &m - &n,
            SplitConvention::Sum => &m + &n,
        };
        let deviation = (&a - &combined).frobenius_norm();
        if deviation > SPLIT_RECONSTRUCT_TOL * a.frobenius_norm().max(f64::MIN_POSITIVE) {
            return Err(CoreError::SplittingMismatch { deviation });
        }
        LuFactor::new(&m)?;
        Ok(Self {
            a,
            m,
            n,
            convention,
        })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    pub fn n(&self) -> &CMatrix {
        &self.n
    }

    pub fn convention(&self) -> SplitConvention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// A multisplitting `(M_k, N_k, E_k)`, `k = 1..m`, of a single matrix `A`
/// under the difference convention, with nonnegative diagonal weights
/// summing to the identity.
#[derive(Debug, Clone)]
pub struct Multisplitting {
    a: CMatrix,
    parts: Vec<(CMatrix, CMatrix)>,
    weights: Vec<Vec<f64>>,
    scalar_weights: Option<Vec<f64>>,
}

impl Multisplitting {
    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn part(&self, k: usize) -> (&CMatrix, &CMatrix) {
        (&self.parts[k].0, &self.parts[k].1)
    }

    pub fn parts(&self) -> &[(CMatrix, CMatrix)] {
        &self.parts
    }

    /// Diagonal entries of `E_k`.
    pub fn weight(&self, k: usize) -> &[f64] {
        &self.weights[k]
    }

    /// Scalar weights `beta_k` when every `E_k = beta_k I` with
    /// `beta_k > 0`; `None` for general diagonal weights.
    pub fn scalar_weights(&self) -> Option<&[f64]> {
        self.scalar_weights.as_deref()
    }

    /// The splitting for part `k` as a standalone object.
    pub fn part_splitting(&self, k: usize) -> Result<Splitting> {
        Splitting::difference(self.a.clone(), self.parts[k].0.clone(), self.parts[k].1.clone())
    }
}

/// Validates a multisplitting: every part reconstructs `A = M_k - N_k` with
/// nonsingular `M_k`, weights are nonnegative diagonals summing to the
/// identity. Scalar weights are detected and recorded.
pub fn make_multisplitting(
    a: CMatrix,
    parts: Vec<(CMatrix, CMatrix)>,
    weights: Vec<Vec<f64>>,
) -> Result<Multisplitting> {
    let n = a.dim();
    if parts.is_empty() {
        return Err(CoreError::DimensionMismatch {
            context: "multisplitting parts",
            expected: 1,
            found: 0,
        });
    }
    if weights.len() != parts.len() {
        return Err(CoreError::DimensionMismatch {
            context: "multisplitting weights",
            expected: parts.len(),
            found: weights.len(),
        });
    }

    let a_norm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for (k, (m, nk)) in parts.iter().enumerate() {
        if m.dim() != n || nk.dim() != n {
            return Err(CoreError::DimensionMismatch {
                context: "multisplitting part",
                expected: n,
                found: m.dim().max(nk.dim()),
            });
        }
        let deviation = (&a - &(m - nk)).frobenius_norm();
        if deviation > SPLIT_RECONSTRUCT_TOL * a_norm {
            return Err(CoreError::PartMismatch {
                part: k,
                deviation: deviation / a_norm,
            });
        }
        LuFactor::new(m).map_err(|_| CoreError::SingularPartM { part: k })?;
    }

    for (k, w) in weights.iter().enumerate() {
        if w.len() != n {
            return Err(CoreError::DimensionMismatch {
                context: "weight diagonal",
                expected: n,
                found: w.len(),
            });
        }
        for (i, &v) in w.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(CoreError::NegativeWeight {
                    part: k,
                    index: i,
                    value: v,
                });
            }
        }
    }
    let mut max_dev: f64 = 0.0;
    for i in 0..n {
        let sum: f64 = weights.iter().map(|w| w[i]).sum();
        max_dev = max_dev.max((sum - 1.0).abs());
    }
    if max_dev > WEIGHT_SUM_TOL {
        return Err(CoreError::WeightSumNotIdentity { deviation: max_dev });
    }

    let scalar_weights = detect_scalar_weights(&weights);

    Ok(Multisplitting {
        a,
        parts,
        weights,
        scalar_weights,
    })
}

/// Convenience constructor for scalar weights `E_k = beta_k I`.
pub fn make_scalar_multisplitting(
    a: CMatrix,
    parts: Vec<(CMatrix, CMatrix)>,
    betas: &[f64],
) -> Result<Multisplitting> {
    let n = a.dim();
    let weights = betas.iter().map(|&b| vec![b; n]).collect();
    make_multisplitting(a, parts, weights)
}

fn detect_scalar_weights(weights: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut betas = Vec::with_capacity(weights.len());
    for w in weights {
        let b = w[0];
        if b <= 0.0 {
            return None;
        }
        if w.iter().any(|&v| (v - b).abs() > WEIGHT_SUM_TOL * b.max(1.0)) {
            return None;
        }
        betas.push(b);
    }
    Some(betas)
}

/// Witnesses from the shifted-triangular construction: the minimal
/// eigenvalue of `A + A^T` and of the two triangular Gram differences that
/// define the admissible shift ranges.
#[derive(Debug, Clone)]
pub struct HadjidimosParams {
    /// Group count `m`; the construction yields `2m` parts.
    pub group_count: usize,
    /// The `2m` shifts.
    pub rho: Vec<f64>,
    /// `lambda_min(A + A^T)`.
    pub lambda_m: f64,
    /// `lambda_min((D-L)(D-L)^T - UU^T)`.
    pub eta_m: f64,
    /// `lambda_min((D-U)(D-U)^T - LL^T)`.
    pub theta_m: f64,
    /// Lower bound for each shift index.
    pub bounds: Vec<f64>,
}

/// Margin by which each shift must clear its strict lower bound.
pub const RHO_STRICTNESS_MARGIN: f64 = 1e-8;

/// Builds the shifted lower/upper triangular multisplitting of a real
/// nonsymmetric positive definite matrix: with `A = D - L - U`,
///
/// * `M_k = D + rho_k I - L`, `N_k = rho_k I + U` for the first `m` shifts,
/// * `M_k = D + rho_k I - U`, `N_k = rho_k I + L` for the remaining `m`,
///
/// where each `rho_k` must exceed `max(0, -eta_m/lambda_m)` respectively
/// `max(0, -theta_m/lambda_m)`. Weights default to uniform `1/(2m)`.
pub fn hadjidimos_multisplitting(
    a: &CMatrix,
    rho: &[f64],
    weights: Option<&[f64]>,
) -> Result<(Multisplitting, HadjidimosParams)> {
    let imag = a.max_imag_abs();
    if imag > 1e-14 * a.max_abs().max(1.0) {
        return Err(CoreError::NotReal { deviation: imag });
    }
    let sym_dev = (a - &a.transpose()).frobenius_norm();
    if sym_dev <= 1e-14 * a.frobenius_norm().max(1.0) {
        return Err(CoreError::SymmetricInput);
    }
    let pd = is_positive_definite(a, DEFAULT_PD_TOL)?;
    if !pd.definite {
        return Err(CoreError::NotPositiveDefinite {
            lambda_min: pd.lambda_min,
        });
    }
    if rho.is_empty() || !rho.len().is_multiple_of(2) {
        return Err(CoreError::DimensionMismatch {
            context: "rho list (must have even length 2m)",
            expected: 2,
            found: rho.len(),
        });
    }
    let m_groups = rho.len() / 2;

    let d = a.diagonal_part();
    let l = &(-&a.strictly_lower());
    let u = &(-&a.strictly_upper());

    let sym = &a.transpose() + a;
    let lambda_m = lambda_min(&HermitianMatrix::new(&sym)?)?;

    let dl = &d - l;
    let du = &d - u;
    let eta_mat = &(&dl * &dl.adjoint()) - &(u * &u.adjoint());
    let theta_mat = &(&du * &du.adjoint()) - &(l * &l.adjoint());
    let eta_m = lambda_min(&HermitianMatrix::new(&eta_mat)?)?;
    let theta_m = lambda_min(&HermitianMatrix::new(&theta_mat)?)?;

    let mut bounds = Vec::with_capacity(rho.len());
    for (k, &r) in rho.iter().enumerate() {
        let raw = if k < m_groups { -eta_m / lambda_m } else { -theta_m / lambda_m };
        let bound = raw.max(0.0);
        bounds.push(bound);
        if r < bound + RHO_STRICTNESS_MARGIN * bound.abs().max(1.0) {
            return Err(CoreError::RhoBelowBound {
                index: k,
                rho: r,
                bound,
            });
        }
    }

    let n = a.dim();
    let mut parts = Vec::with_capacity(rho.len());
    for (k, &r) in rho.iter().enumerate() {
        let shift = CMatrix::from_real_diagonal(&vec![r; n]);
        let (mk, nk) = if k < m_groups {
            (&(&d + &shift) - l, &shift + u)
        } else {
            (&(&d + &shift) - u, &shift + l)
        };
        parts.push((mk, nk));
    }

    let betas: Vec<f64> = match weights {
        Some(w) => {
            if w.len() != rho.len() {
                return Err(CoreError::DimensionMismatch {
                    context: "hadjidimos weights",
                    expected: rho.len(),
                    found: w.len(),
                });
            }
            w.to_vec()
        }
        None => vec![1.0 / rho.len() as f64; rho.len()],
    };

    let ms = make_scalar_multisplitting(a.clone(), parts, &betas)?;
    let params = HadjidimosParams {
        group_count: m_groups,
        rho: rho.to_vec(),
        lambda_m,
        eta_m,
        theta_m,
        bounds,
    };
    Ok((ms, params))
}

/// A PSS triple `(P, S, alpha)` realizing `A = P + S` with `P` positive
/// definite and `S` exactly skew-Hermitian.
#[derive(Debug, Clone)]
pub struct PssSplitting {
    a: CMatrix,
    p: CMatrix,
    s: CMatrix,
    alpha: f64,
    origin: Option<(CMatrix, CMatrix)>,
}

impl PssSplitting {
    /// Validates and stores a PSS triple for `A`.
    pub fn new(a: CMatrix, p: CMatrix, s: CMatrix, alpha: f64) -> Result<Self> {
        Self::with_origin(a, p, s, alpha, None)
    }

    fn with_origin(
        a: CMatrix,
        p: CMatrix,
        s: CMatrix,
        alpha: f64,
        origin: Option<(CMatrix, CMatrix)>,
    ) -> Result<Self> {
        if alpha <= 0.0 || !alpha.is_finite() {
            return Err(CoreError::NonPositiveAlpha { alpha });
        }
        let n = a.dim();
        if p.dim() != n || s.dim() != n {
            return Err(CoreError::DimensionMismatch {
                context: "pss splitting",
                expected: n,
                found: p.dim().max(s.dim()),
            });
        }
        // S must be skew-Hermitian; store the exact antisymmetrization.
        let s_exact = skew_part(&s);
        let skew_dev = (&s - &s_exact).frobenius_norm();
        if skew_dev > SPLIT_RECONSTRUCT_TOL * s.frobenius_norm().max(1.0) {
            return Err(CoreError::InconsistentSplitting {
                deviation: skew_dev,
            });
        }
        let recon_dev = (&a - &(&p + &s_exact)).frobenius_norm();
        if recon_dev > SPLIT_RECONSTRUCT_TOL * a.frobenius_norm().max(f64::MIN_POSITIVE) {
            return Err(CoreError::SplittingMismatch {
                deviation: recon_dev,
            });
        }
        let pd = is_positive_definite(&p, DEFAULT_PD_TOL)?;
        if !pd.definite {
            return Err(CoreError::NotPositiveDefinite {
                lambda_min: pd.lambda_min,
            });
        }
        Ok(Self {
            a,
            p,
            s: s_exact,
            alpha,
            origin,
        })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The generating pair `(M, N)` with `A = M + N`, when built from one.
    pub fn origin(&self) -> Option<(&CMatrix, &CMatrix)> {
        self.origin.as_ref().map(|(m, n)| (m, n))
    }

    /// Same triple at a different shift.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::with_origin(
            self.a.clone(),
            self.p.clone(),
            self.s.clone(),
            alpha,
            self.origin.clone(),
        )
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// Builds the PSS triple induced by a generating pair `A = M + N`:
/// `P = M + N* = A - (N - N*)` and `S = N - N*`. Requires `A` positive
/// definite (equivalently, the Hermitian part of `P` positive definite)
/// and both `M = A - N` and `N` nonzero.
pub fn ps_split(a: &CMatrix, n: &CMatrix, alpha: f64) -> Result<PssSplitting> {
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(CoreError::NonPositiveAlpha { alpha });
    }
    if n.dim() != a.dim() {
        return Err(CoreError::DimensionMismatch {
            context: "ps_split N",
            expected: a.dim(),
            found: n.dim(),
        });
    }
    if n.is_zero() {
        return Err(CoreError::ZeroPart { name: "N" });
    }
    let m = &(a - n);
    if m.is_zero() {
        return Err(CoreError::ZeroPart { name: "M" });
    }
    // N - N* is already skew-Hermitian; skew_part only enforces the exact
    // storage convention.
    let s = skew_part(&(n - &n.adjoint()));
    let p = a - &s;
    PssSplitting::with_origin(a.clone(), p, s, alpha, Some((m.clone(), n.clone())))
}

/// Triangle selector for [`ts_split`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrianglePart {
    StrictUpper,
    StrictLower,
}

/// TS splitting: `N` is the strictly upper or strictly lower triangular
/// part of `A`, then delegates to [`ps_split`].
pub fn ts_split(a: &CMatrix, part: TrianglePart, alpha: f64) -> Result<PssSplitting> {
    let n = match part {
        TrianglePart::StrictUpper => a.strictly_upper(),
        TrianglePart::StrictLower => a.strictly_lower(),
    };
    ps_split(a, &n, alpha)
}

/// BTS splitting: `N` is the strictly block upper triangular part of `A`
/// for contiguous diagonal blocks of the given sizes.
pub fn bts_split(a: &CMatrix, block_sizes: &[usize], alpha: f64) -> Result<PssSplitting> {
    let n = a.dim();
    let total: usize = block_sizes.iter().sum();
    if total != n || block_sizes.contains(&0) {
        return Err(CoreError::BlockSizesMismatch { sum: total, n });
    }
    let mut block_of = vec![0usize; n];
    let mut row = 0;
    for (b, &size) in block_sizes.iter().enumerate() {
        for _ in 0..size {
            block_of[row] = b;
            row += 1;
        }
    }
    let nk = CMatrix::from_fn(n, |i, j| {
        if block_of[j] > block_of[i] {
            a.get(i, j)
        } else {
            num_complex::Complex::new(0.0, 0.0)
        }
    })?;
    ps_split(a, &nk, alpha)
}
