//! Convergence certificates for splittings and multisplittings.
//!
//! Each certificate decides one sufficient condition on a splitting
//! `A = M - N` and reports the deciding witness (an extreme eigenvalue or a
//! norm). Multisplitting certificates apply a per-part condition under
//! scalar weights and conjoin the verdicts.

mod block;

pub use block::{
    at_family_pd, block_comparison, bracket, extended_h_matrix, generalized_m_matrix, BlockMatrix,
    GmWitness, DEFAULT_T_SAMPLES,
};

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::linalg::{
    hermitian_part, inverse, is_positive_definite, solve_dense_mat, spectral_norm, CMatrix,
    LuFactor, DEFAULT_PD_TOL,
};
use crate::splittings::{Multisplitting, SplitConvention, Splitting};

/// Three-way certificate outcome. `Undecided` is reserved for bounded
/// searches that neither find a witness nor prove infeasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    NotCertified,
    Undecided,
}

impl Verdict {
    pub fn certified(self) -> bool {
        self == Verdict::Certified
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Certified
        } else {
            Verdict::NotCertified
        }
    }
}

/// Per-part breakdown inside a multisplitting certificate.
#[derive(Debug, Clone, Serialize)]
pub struct PartCertificate {
    pub part: usize,
    pub verdict: Verdict,
    pub witness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Outcome of a certificate check.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateResult {
    /// Label of the decided condition.
    pub condition: String,
    pub verdict: Verdict,
    /// The decisive scalar: a smallest eigenvalue for definiteness-type
    /// conditions, the norm itself for contraction-type conditions.
    pub witness: f64,
    /// Per-part details for multisplitting certificates.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_part: Vec<PartCertificate>,
}

impl CertificateResult {
    fn single(condition: &str, verdict: Verdict, witness: f64) -> Self {
        Self {
            condition: condition.to_string(),
            verdict,
            witness,
            per_part: Vec::new(),
        }
    }
}

fn require_difference(s: &Splitting, condition: &'static str) -> Result<()> {
    if s.convention() != SplitConvention::Difference {
        return Err(CoreError::WrongConvention {
            condition,
            expected: "difference",
        });
    }
    Ok(())
}

/// P-regular splitting: `M* + N` positive definite.
pub fn p_regular(s: &Splitting) -> Result<CertificateResult> {
    require_difference(s, "p-regular")?;
    let w = &s.m().adjoint() + s.n();
    let pd = is_positive_definite(&w, DEFAULT_PD_TOL)?;
    Ok(CertificateResult::single(
        "p-regular",
        Verdict::from_bool(pd.definite),
        pd.lambda_min,
    ))
}

/// Relative tolerance for the Hermitian test on `N`.
const N_HERMITIAN_TOL: f64 = 1e-12;

fn n_is_hermitian(n: &CMatrix) -> bool {
    (n - &n.adjoint()).frobenius_norm() <= N_HERMITIAN_TOL * n.frobenius_norm()
}

/// P-regular splitting with Hermitian `N`.
pub fn p_regular_hermitian_n(s: &Splitting) -> Result<CertificateResult> {
    require_difference(s, "p-regular-hermitian-n")?;
    let base = p_regular(s)?;
    let hermitian = n_is_hermitian(s.n());
    let verdict = Verdict::from_bool(base.verdict.certified() && hermitian);
    let mut result = CertificateResult::single("p-regular-hermitian-n", verdict, base.witness);
    if !hermitian {
        result.per_part.push(PartCertificate {
            part: 0,
            verdict: Verdict::NotCertified,
            witness: (s.n() - &s.n().adjoint()).frobenius_norm(),
            note: Some("N is not Hermitian".to_string()),
        });
    }
    Ok(result)
}

/// Extended P-regular splitting: `M*(A^{-1})*A + N` positive definite.
///
/// Also evaluates the algebraically equal form `M + N*(A^{-1})*A` and
/// requires the two verdicts to agree; a disagreement means the witness sits
/// inside rounding noise of the threshold.
pub fn extended_p_regular(s: &Splitting) -> Result<CertificateResult> {
    require_difference(s, "extended-p-regular")?;
    let a_inv = inverse(s.a())?;
    let trans = &a_inv.adjoint() * s.a();
    let primary = &(&s.m().adjoint() * &trans) + s.n();
    let alternate = &(&s.n().adjoint() * &trans) + s.m();
    let pd1 = is_positive_definite(&primary, DEFAULT_PD_TOL)?;
    let pd2 = is_positive_definite(&alternate, DEFAULT_PD_TOL)?;
    if pd1.definite != pd2.definite {
        return Err(CoreError::RouteDisagreement {
            context: "extended-p-regular equivalent forms",
            first: pd1.lambda_min,
            second: pd2.lambda_min,
        });
    }
    Ok(CertificateResult::single(
        "extended-p-regular",
        Verdict::from_bool(pd1.definite),
        pd1.lambda_min,
    ))
}

/// Relative tolerance for the Yuan identity `M*A + A*N = M*M - N*N`.
const YUAN_IDENTITY_TOL: f64 = 1e-12;

/// Yuan condition: `M*M - N*N` positive definite. The identity
/// `M*A + A*N = M*M - N*N` is verified first; a violation signals an
/// inconsistent `(A, M, N)` triple.
pub fn yuan_condition(s: &Splitting) -> Result<CertificateResult> {
    require_difference(s, "yuan")?;
    let lhs = &(&s.m().adjoint() * s.a()) + &(&s.a().adjoint() * s.n());
    let rhs = &(&s.m().adjoint() * s.m()) - &(&s.n().adjoint() * s.n());
    let scale = rhs.frobenius_norm().max(1.0);
    let dev = (&lhs - &rhs).frobenius_norm() / scale;
    if dev > YUAN_IDENTITY_TOL {
        return Err(CoreError::InconsistentSplitting { deviation: dev });
    }
    let pd = is_positive_definite(&rhs, DEFAULT_PD_TOL)?;
    Ok(CertificateResult::single(
        "yuan",
        Verdict::from_bool(pd.definite),
        pd.lambda_min,
    ))
}

/// Contraction condition: `||M^{-1}N||_2 < 1` (strict). Witness is the norm.
pub fn contraction_condition(s: &Splitting) -> Result<CertificateResult> {
    require_difference(s, "contraction")?;
    let t = solve_dense_mat(s.m(), s.n())?;
    let norm = spectral_norm(&t)?;
    Ok(CertificateResult::single(
        "contraction",
        Verdict::from_bool(norm < 1.0),
        norm,
    ))
}

/// `N` Hermitian positive semidefinite (witness: smallest eigenvalue).
fn n_psd(n: &CMatrix) -> Result<(Verdict, f64, Option<String>)> {
    if !n_is_hermitian(n) && !n.is_zero() {
        let dev = (n - &n.adjoint()).frobenius_norm();
        return Ok((
            Verdict::NotCertified,
            -dev,
            Some("N is not Hermitian".to_string()),
        ));
    }
    let h = hermitian_part(n);
    let lmin = crate::linalg::lambda_min(&h)?;
    let threshold = -DEFAULT_PD_TOL * spectral_norm(n)?.max(1.0);
    Ok((Verdict::from_bool(lmin >= threshold), lmin, None))
}

/// The per-part condition applied by [`certify_multisplitting`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultisplitCondition {
    Yuan,
    Contraction,
    ExtendedPRegular,
    PRegularHermitianN,
    NPsd,
}

impl MultisplitCondition {
    pub fn label(self) -> &'static str {
        match self {
            Self::Yuan => "yuan",
            Self::Contraction => "contraction",
            Self::ExtendedPRegular => "extended-p-regular",
            Self::PRegularHermitianN => "p-regular-hermitian-n",
            Self::NPsd => "n-psd",
        }
    }

    /// Whether the backing theorem additionally assumes `A` positive
    /// definite.
    fn needs_positive_definite_a(self) -> bool {
        matches!(
            self,
            Self::ExtendedPRegular | Self::PRegularHermitianN | Self::NPsd
        )
    }
}

impl std::str::FromStr for MultisplitCondition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "yuan" => Ok(Self::Yuan),
            "contraction" => Ok(Self::Contraction),
            "extended-p-regular" => Ok(Self::ExtendedPRegular),
            "p-regular-hermitian-n" => Ok(Self::PRegularHermitianN),
            "n-psd" => Ok(Self::NPsd),
            other => Err(format!("unknown condition label `{other}`")),
        }
    }
}

/// Applies `which` to every part of a multisplitting with scalar weights and
/// conjoins the verdicts. Conditions whose theorem assumes a positive
/// definite `A` additionally check that hypothesis; its witness then caps
/// the reported witness.
pub fn certify_multisplitting(
    ms: &Multisplitting,
    which: MultisplitCondition,
) -> Result<CertificateResult> {
    if ms.scalar_weights().is_none() {
        return Err(CoreError::ScalarWeightsRequired {
            condition: which.label(),
        });
    }

    let mut per_part = Vec::with_capacity(ms.part_count());
    let mut all = true;
    // The weakest part decides: largest norm for contraction, smallest
    // eigenvalue margin for the definiteness-type conditions.
    let mut witness = match which {
        MultisplitCondition::Contraction => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    };

    for k in 0..ms.part_count() {
        let split = ms.part_splitting(k)?;
        let (verdict, w, note) = match which {
            MultisplitCondition::Yuan => {
                let r = yuan_condition(&split)?;
                (r.verdict, r.witness, None)
            }
            MultisplitCondition::Contraction => {
                let r = contraction_condition(&split)?;
                (r.verdict, r.witness, None)
            }
            MultisplitCondition::ExtendedPRegular => {
                let r = extended_p_regular(&split)?;
                (r.verdict, r.witness, None)
            }
            MultisplitCondition::PRegularHermitianN => {
                let r = p_regular_hermitian_n(&split)?;
                let note = r.per_part.first().and_then(|p| p.note.clone());
                (r.verdict, r.witness, note)
            }
            MultisplitCondition::NPsd => n_psd(split.n())?,
        };
        all &= verdict.certified();
        witness = match which {
            MultisplitCondition::Contraction => witness.max(w),
            _ => witness.min(w),
        };
        per_part.push(PartCertificate {
            part: k,
            verdict,
            witness: w,
            note,
        });
    }

    if which.needs_positive_definite_a() {
        let pd = is_positive_definite(ms.a(), DEFAULT_PD_TOL)?;
        all &= pd.definite;
        if !pd.definite {
            witness = witness.min(pd.lambda_min);
        }
        per_part.push(PartCertificate {
            part: ms.part_count(),
            verdict: Verdict::from_bool(pd.definite),
            witness: pd.lambda_min,
            note: Some("positive definiteness of A".to_string()),
        });
    }

    Ok(CertificateResult {
        condition: which.label().to_string(),
        verdict: Verdict::from_bool(all),
        witness,
        per_part,
    })
}

/// Residual of the congruence identity
/// `A - T*AT = (I - T*)(M*(A^{-1})*A + N)(I - T)` with `T = M^{-1}N`,
/// normalized by `max(1, ||A||_F)`. Serves as a self-test of the dense
/// linear algebra stack; the identity requires `A = M - N`.
pub fn lemma_identity_check(a: &CMatrix, m: &CMatrix, n: &CMatrix) -> Result<f64> {
    let dim = a.dim();
    if m.dim() != dim || n.dim() != dim {
        return Err(CoreError::DimensionMismatch {
            context: "lemma_identity_check",
            expected: dim,
            found: m.dim().max(n.dim()),
        });
    }
    let t = LuFactor::new(m)?.solve_cmatrix(n)?;
    let lhs = a - &(&(&t.adjoint() * a) * &t);

    let a_inv = inverse(a)?;
    let core = &(&m.adjoint() * &(&a_inv.adjoint() * a)) + n;
    let i = CMatrix::identity(dim);
    let left = &i - &t.adjoint();
    let right = &i - &t;
    let rhs = &(&left * &core) * &right;

    Ok((&lhs - &rhs).frobenius_norm() / a.frobenius_norm().max(1.0))
}

/// Stein-type check: `A*A - T*(A*A)T` positive definite. A certified verdict
/// implies `rho(T) < 1` (the implication, not an equivalence).
pub fn stein_check(a: &CMatrix, t: &CMatrix) -> Result<CertificateResult> {
    let gram = &a.adjoint() * a;
    let w = &gram - &(&(&t.adjoint() * &gram) * t);
    let pd = is_positive_definite(&w, DEFAULT_PD_TOL)?;
    Ok(CertificateResult::single(
        "stein",
        Verdict::from_bool(pd.definite),
        pd.lambda_min,
    ))
}
