//! Shared helpers for integration suites: independent numeric oracles and
//! seeded instance constructions whose hypotheses are verified, not assumed.

#![allow(dead_code)]

use multisplit_core::certificates::{certify_multisplitting, MultisplitCondition};
use multisplit_core::linalg::{hermitian_eigen, hermitian_part, skew_part};
use multisplit_core::problems::Lcg64;
use multisplit_core::{C64, CMatrix, CVector, HermitianMatrix, Multisplitting};
use nalgebra::DVector;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rvec(entries: &[f64]) -> CVector {
    DVector::from_iterator(entries.len(), entries.iter().map(|&x| C64::new(x, 0.0)))
}

/// Random dense complex matrix with standard Gaussian entries.
pub fn random_complex(n: usize, rng: &mut Lcg64) -> CMatrix {
    CMatrix::new(nalgebra::DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.next_gaussian(), rng.next_gaussian())
    }))
    .unwrap()
}

/// Random dense real matrix with standard Gaussian entries.
pub fn random_real(n: usize, rng: &mut Lcg64) -> CMatrix {
    CMatrix::new(nalgebra::DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.next_gaussian(), 0.0)
    }))
    .unwrap()
}

/// Random real nonsymmetric positive definite matrix: `G^T G + I` plus a
/// scaled real skew part.
pub fn random_real_nonsymmetric_pd(n: usize, skew_scale: f64, rng: &mut Lcg64) -> CMatrix {
    let g = random_real(n, rng);
    let spd = &(&g.adjoint() * &g) + &CMatrix::identity(n);
    let k = random_real(n, rng);
    let skew = skew_part(&k);
    &spd + &skew.scale_re(skew_scale)
}

/// Determinant by Laplace expansion; an independent oracle path for tiny
/// matrices (n <= 5 or so).
pub fn det_laplace(m: &CMatrix) -> C64 {
    fn go(entries: &[Vec<C64>]) -> C64 {
        let n = entries.len();
        if n == 1 {
            return entries[0][0];
        }
        let mut acc = C64::new(0.0, 0.0);
        for (j, &top) in entries[0].iter().enumerate() {
            if top.norm() == 0.0 {
                continue;
            }
            let minor: Vec<Vec<C64>> = entries[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += top * go(&minor) * C64::new(sign, 0.0);
        }
        acc
    }
    let n = m.dim();
    let rows: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();
    go(&rows)
}

/// Sylvester's criterion on the Hermitian part: all leading principal
/// minors positive. Valid as an independent positive-definiteness oracle
/// for small n.
pub fn sylvester_positive_definite(a: &CMatrix) -> bool {
    let h = hermitian_part(a).to_cmatrix();
    let n = a.dim();
    for k in 1..=n {
        let sub = CMatrix::from_fn(k, |i, j| h.get(i, j)).unwrap();
        let det = det_laplace(&sub);
        if det.re <= 0.0 {
            return false;
        }
    }
    true
}

/// Smallest eigenvalue of a 2x2 Hermitian matrix in closed form.
pub fn lambda_min_2x2(h: &CMatrix) -> f64 {
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let z = h.get(0, 1);
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + z.norm_sqr()).sqrt();
    mid - rad
}

/// Hermitian square root via the eigendecomposition; independent oracle for
/// the bracket of a normal matrix (`<A> = (A*A)^{1/2}`).
pub fn sqrtm_psd(h: &HermitianMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(h).unwrap();
    let roots: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let q = CMatrix::new(vecs).unwrap();
    let scaled = q.col_scaled(&roots);
    &scaled * &q.adjoint()
}

/// Positive scalar weights summing to one.
pub fn random_scalar_weights(m: usize, rng: &mut Lcg64) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.next_range(0.2, 1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|v| v / sum).collect();
    // Force the exact sum so weight validation never trips on rounding.
    let last = 1.0 - w[..m - 1].iter().sum::<f64>();
    w[m - 1] = last;
    w
}

/// Random diagonal weight matrices (entrywise nonnegative, summing to the
/// identity), generally not scalar.
#[allow(clippy::needless_range_loop)] // `i` spans the inner diagonal index
pub fn random_diagonal_weights(m: usize, n: usize, rng: &mut Lcg64) -> Vec<Vec<f64>> {
    let mut weights = vec![vec![0.0; n]; m];
    for i in 0..n {
        let raw: Vec<f64> = (0..m).map(|_| rng.next_range(0.05, 1.0)).collect();
        let sum: f64 = raw.iter().sum();
        for (k, r) in raw.iter().enumerate() {
            weights[k][i] = r / sum;
        }
        let used: f64 = (0..m - 1).map(|k| weights[k][i]).sum();
        weights[m - 1][i] = 1.0 - used;
    }
    weights
}

/// The five certified hypothesis classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisClass {
    Yuan,
    Contraction,
    ExtendedPRegular,
    PRegularHermitianN,
    NPsd,
}

impl HypothesisClass {
    pub fn all() -> [Self; 5] {
        [
            Self::Yuan,
            Self::Contraction,
            Self::ExtendedPRegular,
            Self::PRegularHermitianN,
            Self::NPsd,
        ]
    }

    pub fn condition(self) -> MultisplitCondition {
        match self {
            Self::Yuan => MultisplitCondition::Yuan,
            Self::Contraction => MultisplitCondition::Contraction,
            Self::ExtendedPRegular => MultisplitCondition::ExtendedPRegular,
            Self::PRegularHermitianN => MultisplitCondition::PRegularHermitianN,
            Self::NPsd => MultisplitCondition::NPsd,
        }
    }
}

/// Builds a multisplitting whose parts are constructed to satisfy the given
/// hypothesis class, then *verifies* the hypothesis through the certificate
/// layer (shrinking the perturbation until it holds). Panics if no instance
/// is found, so suites never assert on an unverified hypothesis.
pub fn hypothesis_true_instance(
    class: HypothesisClass,
    n: usize,
    m: usize,
    seed: u64,
) -> Multisplitting {
    let mut rng = Lcg64::new(seed);
    let a = multisplit_core::problems::random_npd(n, rng.next_range(0.1, 1.0), rng.next_u64());
    let betas = random_scalar_weights(m, &mut rng);

    let mut eps = 0.5;
    for _attempt in 0..60 {
        let mut parts = Vec::with_capacity(m);
        for _ in 0..m {
            let nk = match class {
                HypothesisClass::Yuan
                | HypothesisClass::Contraction
                | HypothesisClass::ExtendedPRegular => {
                    let g = random_complex(n, &mut rng);
                    let scale = eps / g.frobenius_norm().max(1e-12);
                    g.scale_re(scale)
                }
                HypothesisClass::PRegularHermitianN => {
                    let g = random_complex(n, &mut rng);
                    let h = hermitian_part(&g).to_cmatrix();
                    let scale = eps / h.frobenius_norm().max(1e-12);
                    h.scale_re(scale)
                }
                HypothesisClass::NPsd => {
                    let v = random_complex(n, &mut rng);
                    let gram = &v.adjoint() * &v;
                    let scale = rng.next_range(0.1, 2.0) / gram.frobenius_norm().max(1e-12);
                    hermitian_part(&gram.scale_re(scale)).to_cmatrix()
                }
            };
            let mk = &a + &nk;
            parts.push((mk, nk));
        }
        if let Ok(ms) =
            multisplit_core::splittings::make_scalar_multisplitting(a.clone(), parts, &betas)
        {
            if let Ok(cert) = certify_multisplitting(&ms, class.condition()) {
                if cert.verdict.certified() {
                    return ms;
                }
            }
        }
        eps /= 2.0;
    }
    panic!("no hypothesis-true instance found for {class:?} (n={n}, m={m}, seed={seed})");
}
