//! The two stationary engines: the multisplitting iteration and the
//! parallel PSS iteration, together with iteration-matrix assembly, the
//! lifted block form and relaxation.

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::linalg::{
    solve_dense, spectral_radius, CMatrix, CVector, LuFactor, C64,
};
use crate::parallel::run_parallel;
use crate::splittings::{Multisplitting, PssSplitting};

/// Growth factor over the initial residual that triggers a divergence abort.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// Stopping and relaxation parameters for both engines.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Relative residual target `||Ax - b|| / ||b||`.
    pub tol: f64,
    /// Outer iteration cap.
    pub max_iter: usize,
    /// Relaxation parameter; `1` recovers the plain combine step.
    pub omega: f64,
    /// Initial vector; zero when absent.
    pub x0: Option<CVector>,
    /// Worker count for the per-part sub-solves.
    pub workers: usize,
    /// Also compute the exact spectral radius of the iteration matrix.
    pub exact_rho: bool,
    /// Record every iterate (used by determinism checks).
    pub trace_iterates: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            omega: 1.0,
            x0: None,
            workers: 1,
            exact_rho: false,
            trace_iterates: false,
        }
    }
}

impl SolveConfig {
    fn validate(&self) -> Result<()> {
        if self.tol <= 0.0 || self.tol.is_nan() {
            return Err(CoreError::InvalidConfig {
                reason: "tol must be positive",
            });
        }
        if self.max_iter == 0 {
            return Err(CoreError::InvalidConfig {
                reason: "max_iter must be at least 1",
            });
        }
        if self.omega == 0.0 || !self.omega.is_finite() {
            return Err(CoreError::InvalidConfig {
                reason: "omega must be nonzero",
            });
        }
        Ok(())
    }
}

/// Outcome of an engine run.
#[derive(Debug, Clone)]
pub struct IterationReport {
    /// Outer iterations performed.
    pub iterates_used: usize,
    /// Relative residuals, starting with the initial one
    /// (`len == iterates_used + 1`).
    pub residual_history: Vec<f64>,
    pub final_x: CVector,
    pub converged: bool,
    /// Observed contraction: geometric mean of the last five residual
    /// ratios (NaN when no step was taken).
    pub rho_estimate: f64,
    /// Exact spectral radius of the (relaxed) iteration matrix, on request.
    pub rho_exact: Option<f64>,
    /// Every iterate including the initial one, when tracing was requested.
    pub iterate_trace: Option<Vec<CVector>>,
}

fn rho_estimate(history: &[f64]) -> f64 {
    let ratios: Vec<f64> = history
        .windows(2)
        .filter(|w| w[0] > 0.0 && w[1] > 0.0)
        .map(|w| w[1] / w[0])
        .collect();
    if ratios.is_empty() {
        return f64::NAN;
    }
    let tail = &ratios[ratios.len().saturating_sub(5)..];
    let log_sum: f64 = tail.iter().map(|r| r.ln()).sum();
    (log_sum / tail.len() as f64).exp()
}

/// Iteration matrix of a multisplitting: `T = sum_k E_k M_k^{-1} N_k`,
/// assembled by dense solves and summed in part order.
pub fn iteration_matrix(ms: &Multisplitting) -> Result<CMatrix> {
    let mut t = CMatrix::zeros(ms.dim());
    for k in 0..ms.part_count() {
        let (m, n) = ms.part(k);
        let local = LuFactor::new(m)
            .map_err(|_| CoreError::SingularPartM { part: k })?
            .solve_cmatrix(n)?;
        t = &t + &local.row_scaled(ms.weight(k));
    }
    Ok(t)
}

/// Lifted block pair `(B, C)` with `B = diag(M_1, ..., M_m)` and
/// `C_{kj} = N_k E_j`; the lifted iteration satisfies
/// `rho(T) = rho(B^{-1}C)`.
pub fn lifted_matrices(ms: &Multisplitting) -> Result<(CMatrix, CMatrix)> {
    let n = ms.dim();
    let m = ms.part_count();
    let size = n * m;
    let mut b = nalgebra::DMatrix::<C64>::zeros(size, size);
    let mut c = nalgebra::DMatrix::<C64>::zeros(size, size);
    for k in 0..m {
        let (mk, nk) = ms.part(k);
        for i in 0..n {
            for j in 0..n {
                b[(k * n + i, k * n + j)] = mk.get(i, j);
            }
        }
        for jblk in 0..m {
            let scaled = nk.col_scaled(ms.weight(jblk));
            for i in 0..n {
                for j in 0..n {
                    c[(k * n + i, jblk * n + j)] = scaled.get(i, j);
                }
            }
        }
    }
    Ok((CMatrix::new(b)?, CMatrix::new(c)?))
}

/// Spectral radius through the lifted pair.
pub fn lifted_spectral_radius(ms: &Multisplitting) -> Result<f64> {
    let (b, c) = lifted_matrices(ms)?;
    let t = LuFactor::new(&b)?.solve_cmatrix(&c)?;
    spectral_radius(&t)
}

struct RunState {
    x: CVector,
    history: Vec<f64>,
    trace: Option<Vec<CVector>>,
}

fn init_state(
    a: &CMatrix,
    b: &CVector,
    cfg: &SolveConfig,
) -> Result<(RunState, f64)> {
    cfg.validate()?;
    let n = a.dim();
    if b.len() != n {
        return Err(CoreError::DimensionMismatch {
            context: "right-hand side",
            expected: n,
            found: b.len(),
        });
    }
    let x = match &cfg.x0 {
        Some(v) => {
            if v.len() != n {
                return Err(CoreError::DimensionMismatch {
                    context: "initial vector",
                    expected: n,
                    found: v.len(),
                });
            }
            v.clone()
        }
        None => DVector::zeros(n),
    };
    let denom = b.norm().max(f64::MIN_POSITIVE);
    let r0 = (a.mul_vec(&x) - b).norm() / denom;
    let trace = cfg.trace_iterates.then(|| vec![x.clone()]);
    Ok((
        RunState {
            x,
            history: vec![r0],
            trace,
        },
        denom,
    ))
}

fn finish(
    state: RunState,
    converged: bool,
    rho_exact: Option<f64>,
) -> IterationReport {
    let iterates_used = state.history.len() - 1;
    IterationReport {
        iterates_used,
        rho_estimate: rho_estimate(&state.history),
        residual_history: state.history,
        final_x: state.x,
        converged,
        rho_exact,
        iterate_trace: state.trace,
    }
}

/// Runs the multisplitting iteration: each outer step solves
/// `M_k y_k = N_k x + b` for every part and combines
/// `x <- omega * sum_k E_k y_k + (1 - omega) x`.
pub fn multisplit_run(ms: &Multisplitting, b: &CVector, cfg: &SolveConfig) -> Result<IterationReport> {
    let a = ms.a();
    let (mut state, denom) = init_state(a, b, cfg)?;

    let rho_exact = if cfg.exact_rho {
        let t = iteration_matrix(ms)?;
        Some(spectral_radius(&relaxed_matrix(&t, cfg.omega))?)
    } else {
        None
    };

    if state.history[0] <= cfg.tol {
        return Ok(finish(state, true, rho_exact));
    }

    let m = ms.part_count();
    let mut factors = Vec::with_capacity(m);
    for k in 0..m {
        factors.push(
            LuFactor::new(ms.part(k).0).map_err(|_| CoreError::SingularPartM { part: k })?,
        );
    }

    let r0 = state.history[0];
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let x_ref = &state.x;
        let tasks: Vec<Box<dyn FnOnce() -> Result<CVector> + Send>> = (0..m)
            .map(|k| {
                let lu = &factors[k];
                let nk = ms.part(k).1;
                Box::new(move || {
                    let rhs = nk.mul_vec(x_ref) + b;
                    lu.solve_vec(&rhs)
                }) as Box<dyn FnOnce() -> Result<CVector> + Send>
            })
            .collect();
        let results = run_parallel(tasks, cfg.workers)?;

        // Combine in ascending part order for bitwise reproducibility.
        let mut combined: CVector = DVector::zeros(a.dim());
        for (k, yk) in results.into_iter().enumerate() {
            let yk = yk?;
            let w = ms.weight(k);
            for i in 0..a.dim() {
                combined[i] += yk[i] * w[i];
            }
        }
        state.x = combined * C64::new(cfg.omega, 0.0)
            + &state.x * C64::new(1.0 - cfg.omega, 0.0);

        let r = (a.mul_vec(&state.x) - b).norm() / denom;
        state.history.push(r);
        if let Some(tr) = state.trace.as_mut() {
            tr.push(state.x.clone());
        }
        if r <= cfg.tol {
            converged = true;
            break;
        }
        if r > DIVERGENCE_FACTOR * r0 {
            return Err(CoreError::Divergence {
                iteration: state.history.len() - 1,
                residual: r,
            });
        }
    }

    Ok(finish(state, converged, rho_exact))
}

/// PSS step matrices for one triple:
/// `M(alpha) = (aI+S)^{-1}(aI-P)(aI+P)^{-1}(aI-S)` and
/// `G(alpha) = 2a (aI+S)^{-1}(aI+P)^{-1}`. The exactness identity
/// `M(alpha) + G(alpha) A = I` is verified before returning.
pub fn pss_matrices(p: &PssSplitting) -> Result<(CMatrix, CMatrix)> {
    let n = p.dim();
    let alpha = p.alpha();
    let shift = CMatrix::from_real_diagonal(&vec![alpha; n]);
    let a_plus_p = &shift + p.p();
    let a_minus_p = &shift - p.p();
    let a_plus_s = &shift + p.s();
    let a_minus_s = &shift - p.s();

    let lu_p = LuFactor::new(&a_plus_p)?;
    let lu_s = LuFactor::new(&a_plus_s)?;

    let x1 = lu_p.solve_cmatrix(&a_minus_s)?;
    let m = lu_s.solve_cmatrix(&(&a_minus_p * &x1))?;

    let inv_p = lu_p.solve_cmatrix(&CMatrix::identity(n))?;
    let g = lu_s.solve_cmatrix(&inv_p)?.scale_re(2.0 * alpha);

    let residual = (&(&m + &(&g * p.a())) - &CMatrix::identity(n)).frobenius_norm();
    let scale = m.frobenius_norm().max(1.0);
    if residual > 1e-12 * scale.max(g.frobenius_norm() * p.a().frobenius_norm()) {
        return Err(CoreError::IdentityCheckFailed {
            context: "pss step matrices M + G A = I",
            residual,
        });
    }
    Ok((m, g))
}

fn check_pss_collection(parts: &[PssSplitting], weights: &[f64]) -> Result<()> {
    if parts.is_empty() {
        return Err(CoreError::InvalidConfig {
            reason: "pss collection is empty",
        });
    }
    if weights.len() != parts.len() {
        return Err(CoreError::DimensionMismatch {
            context: "pss weights",
            expected: parts.len(),
            found: weights.len(),
        });
    }
    let mut sum = 0.0;
    for &w in weights {
        if w <= 0.0 || !w.is_finite() {
            return Err(CoreError::InvalidConfig {
                reason: "pss weights must be positive",
            });
        }
        sum += w;
    }
    if (sum - 1.0).abs() > 1e-13 {
        return Err(CoreError::WeightSumNotIdentity {
            deviation: (sum - 1.0).abs(),
        });
    }
    let a0 = parts[0].a();
    for part in parts.iter().skip(1) {
        let dev = (part.a() - a0).frobenius_norm();
        if dev > 1e-12 * a0.frobenius_norm().max(1.0) {
            return Err(CoreError::InvalidConfig {
                reason: "pss parts must split the same matrix",
            });
        }
    }
    Ok(())
}

/// Combined PSS iteration matrix `sum_k beta_k M(alpha_k)`, cross-checked
/// for fixed-point consistency against a direct solve.
pub fn pss_iteration_matrix(parts: &[PssSplitting], weights: &[f64]) -> Result<CMatrix> {
    check_pss_collection(parts, weights)?;
    let n = parts[0].dim();
    let a = parts[0].a();
    let mut m_total = CMatrix::zeros(n);
    let mut g_total = CMatrix::zeros(n);
    for (part, &beta) in parts.iter().zip(weights) {
        let (m, g) = pss_matrices(part)?;
        m_total = &m_total + &m.scale_re(beta);
        g_total = &g_total + &g.scale_re(beta);
    }
    // Fixed point check: x* = M x* + (sum beta_k G_k) b  for A x* = b.
    let ones = DVector::from_element(n, C64::new(1.0, 0.0));
    let x_star = solve_dense(a, &ones)?;
    let lhs = m_total.mul_vec(&x_star) + g_total.mul_vec(&ones);
    let residual = (lhs - &x_star).norm();
    if residual > 1e-10 * x_star.norm().max(1.0) {
        return Err(CoreError::IdentityCheckFailed {
            context: "pss fixed-point consistency",
            residual,
        });
    }
    Ok(m_total)
}

/// Runs the parallel PSS iteration. Each outer step performs, per part,
/// the two half-solves
/// `(a_k I + P_k) x_half = (a_k I - S_k) x + b` and
/// `(a_k I + S_k) y_k = (a_k I - P_k) x_half + b`,
/// then combines `x <- omega * sum_k beta_k y_k + (1 - omega) x`.
pub fn pss_run(
    parts: &[PssSplitting],
    weights: &[f64],
    b: &CVector,
    cfg: &SolveConfig,
) -> Result<IterationReport> {
    check_pss_collection(parts, weights)?;
    let a = parts[0].a();
    let (mut state, denom) = init_state(a, b, cfg)?;

    let rho_exact = if cfg.exact_rho {
        let m = pss_iteration_matrix(parts, weights)?;
        Some(spectral_radius(&relaxed_matrix(&m, cfg.omega))?)
    } else {
        None
    };

    if state.history[0] <= cfg.tol {
        return Ok(finish(state, true, rho_exact));
    }

    struct PartOps {
        plus_p: LuFactor,
        plus_s: LuFactor,
        minus_p: CMatrix,
        minus_s: CMatrix,
    }
    let n = a.dim();
    let mut ops = Vec::with_capacity(parts.len());
    for part in parts {
        let shift = CMatrix::from_real_diagonal(&vec![part.alpha(); n]);
        ops.push(PartOps {
            plus_p: LuFactor::new(&(&shift + part.p()))?,
            plus_s: LuFactor::new(&(&shift + part.s()))?,
            minus_p: &shift - part.p(),
            minus_s: &shift - part.s(),
        });
    }

    let r0 = state.history[0];
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let x_ref = &state.x;
        let tasks: Vec<Box<dyn FnOnce() -> Result<CVector> + Send>> = ops
            .iter()
            .map(|op| {
                Box::new(move || {
                    let x_half = op.plus_p.solve_vec(&(op.minus_s.mul_vec(x_ref) + b))?;
                    op.plus_s.solve_vec(&(op.minus_p.mul_vec(&x_half) + b))
                }) as Box<dyn FnOnce() -> Result<CVector> + Send>
            })
            .collect();
        let results = run_parallel(tasks, cfg.workers)?;

        let mut combined: CVector = DVector::zeros(n);
        for (k, yk) in results.into_iter().enumerate() {
            let yk = yk?;
            combined += yk * C64::new(weights[k], 0.0);
        }
        state.x = combined * C64::new(cfg.omega, 0.0)
            + &state.x * C64::new(1.0 - cfg.omega, 0.0);

        let r = (a.mul_vec(&state.x) - b).norm() / denom;
        state.history.push(r);
        if let Some(tr) = state.trace.as_mut() {
            tr.push(state.x.clone());
        }
        if r <= cfg.tol {
            converged = true;
            break;
        }
        if r > DIVERGENCE_FACTOR * r0 {
            return Err(CoreError::Divergence {
                iteration: state.history.len() - 1,
                residual: r,
            });
        }
    }

    Ok(finish(state, converged, rho_exact))
}

/// Relaxed iteration matrix `omega T + (1 - omega) I`.
pub fn relaxed_matrix(t: &CMatrix, omega: f64) -> CMatrix {
    if omega == 1.0 {
        return t.clone();
    }
    let n = t.dim();
    let eye = CMatrix::identity(n).scale_re(1.0 - omega);
    &t.scale_re(omega) + &eye
}

/// The relaxation range `(0, 2/(1 + rho))` guaranteed to keep the relaxed
/// iteration contractive when the base iteration has spectral radius `rho`.
pub fn omega_range(rho: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&rho) {
        return Err(CoreError::NotContractive { rho });
    }
    Ok((0.0, 2.0 / (1.0 + rho)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splittings::{make_multisplitting, make_scalar_multisplitting, ts_split, TrianglePart};
    use approx::assert_relative_eq;

    fn scal(x: f64) -> CMatrix {
        CMatrix::from_real_rows(1, &[x]).unwrap()
    }

    fn vecr(entries: &[f64]) -> CVector {
        DVector::from_iterator(entries.len(), entries.iter().map(|&x| C64::new(x, 0.0)))
    }

    fn scalar_demo() -> Multisplitting {
        make_scalar_multisplitting(
            scal(2.0),
            vec![(scal(3.0), scal(1.0)), (scal(4.0), scal(2.0))],
            &[0.5, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn iteration_matrix_scalar_demo() {
        let t = iteration_matrix(&scalar_demo()).unwrap();
        assert_relative_eq!(t.get(0, 0).re, 5.0 / 12.0, max_relative = 1e-14);
    }

    #[test]
    fn iteration_matrix_single_part() {
        let ms = make_scalar_multisplitting(scal(2.0), vec![(scal(4.0), scal(2.0))], &[1.0]).unwrap();
        let t = iteration_matrix(&ms).unwrap();
        assert_relative_eq!(t.get(0, 0).re, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn iteration_matrix_degenerate_weights() {
        let ms = make_multisplitting(
            scal(2.0),
            vec![(scal(3.0), scal(1.0)), (scal(4.0), scal(2.0))],
            vec![vec![1.0], vec![0.0]],
        )
        .unwrap();
        let t = iteration_matrix(&ms).unwrap();
        assert_relative_eq!(t.get(0, 0).re, 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn lifted_matrices_scalar_demo() {
        let (b, c) = lifted_matrices(&scalar_demo()).unwrap();
        assert_eq!(b, CMatrix::from_real_diagonal(&[3.0, 4.0]));
        let expect = CMatrix::from_real_rows(2, &[0.5, 0.5, 1.0, 1.0]).unwrap();
        assert_eq!(c, expect);
        let rho = lifted_spectral_radius(&scalar_demo()).unwrap();
        assert_relative_eq!(rho, 5.0 / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn lifted_zero_n_gives_zero_radius() {
        let a = scal(3.0);
        let ms = make_scalar_multisplitting(a.clone(), vec![(a.clone(), scal(0.0))], &[1.0]).unwrap();
        assert!(lifted_spectral_radius(&ms).unwrap() <= 1e-14);
    }

    #[test]
    fn multisplit_scalar_demo_converges() {
        let report = multisplit_run(&scalar_demo(), &vecr(&[2.0]), &SolveConfig::default()).unwrap();
        assert!(report.converged);
        assert_relative_eq!(report.final_x[0].re, 1.0, max_relative = 1e-9);
        // Error contracts by exactly 5/12 per step.
        assert!((report.rho_estimate - 5.0 / 12.0).abs() < 0.02);
    }

    #[test]
    fn exact_start_converges_in_zero_iterations() {
        let cfg = SolveConfig {
            x0: Some(vecr(&[1.0])),
            ..Default::default()
        };
        let report = multisplit_run(&scalar_demo(), &vecr(&[2.0]), &cfg).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterates_used, 0);
        assert_eq!(report.residual_history.len(), 1);
    }

    #[test]
    fn oversized_omega_diverges() {
        // Scalar oracle: T_w = 1 - w(1 - 5/12); |T_w| >= 1 iff w >= 24/7.
        let cfg = SolveConfig {
            omega: 4.0,
            max_iter: 200,
            ..Default::default()
        };
        match multisplit_run(&scalar_demo(), &vecr(&[2.0]), &cfg) {
            Err(CoreError::Divergence { .. }) => {}
            Ok(r) => assert!(!r.converged, "omega=4 contracts only if the oracle is wrong"),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn relaxation_spectrum_matches_oracle() {
        let t = iteration_matrix(&scalar_demo()).unwrap();
        let omega = 1.3;
        let tw = relaxed_matrix(&t, omega);
        // Eigenvalue oracle: w*lambda + 1 - w with lambda = 5/12.
        let expect = omega * 5.0 / 12.0 + 1.0 - omega;
        assert_relative_eq!(tw.get(0, 0).re, expect, max_relative = 1e-14);
    }

    #[test]
    fn pss_matrices_examples() {
        // S = 0: M(alpha) = (aI - P)(aI + P)^{-1}; P = 2I, alpha = 1 -> -I/3.
        let a = CMatrix::from_real_diagonal(&[2.0, 2.0]);
        let pss = PssSplitting::new(a.clone(), a.clone(), CMatrix::zeros(2), 1.0).unwrap();
        let (m, _) = pss_matrices(&pss).unwrap();
        assert_relative_eq!(m.get(0, 0).re, -1.0 / 3.0, max_relative = 1e-12);
        assert!(m.get(0, 1).norm() <= 1e-14);

        // alpha = 2 with P = 2I annihilates: M(2) = 0.
        let full = CMatrix::from_real_rows(2, &[2.0, 1.0, -1.0, 2.0]).unwrap();
        let pss = ts_split(&full, TrianglePart::StrictUpper, 2.0).unwrap();
        let (m, _) = pss_matrices(&pss).unwrap();
        assert!(m.frobenius_norm() <= 1e-12);
    }

    #[test]
    fn pss_one_step_exactness() {
        let a = CMatrix::from_real_rows(2, &[2.0, 1.0, -1.0, 2.0]).unwrap();
        let pss = ts_split(&a, TrianglePart::StrictUpper, 2.0).unwrap();
        let b = vecr(&[1.0, 1.0]);
        let report = pss_run(&[pss], &[1.0], &b, &SolveConfig::default()).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterates_used, 1);
        let direct = solve_dense(&a, &b).unwrap();
        assert!((report.final_x - direct).norm() <= 1e-12);
    }

    #[test]
    fn pss_zero_rhs_converges_immediately() {
        let a = CMatrix::from_real_rows(2, &[2.0, 1.0, -1.0, 2.0]).unwrap();
        let pss = ts_split(&a, TrianglePart::StrictUpper, 1.0).unwrap();
        let report = pss_run(&[pss], &[1.0], &vecr(&[0.0, 0.0]), &SolveConfig::default()).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterates_used, 0);
        assert_eq!(report.final_x.norm(), 0.0);
    }

    #[test]
    fn pss_alpha_one_contracts_by_a_third() {
        let a = CMatrix::from_real_rows(2, &[2.0, 1.0, -1.0, 2.0]).unwrap();
        let pss = ts_split(&a, TrianglePart::StrictUpper, 1.0).unwrap();
        let m = pss_iteration_matrix(std::slice::from_ref(&pss), &[1.0]).unwrap();
        let rho = spectral_radius(&m).unwrap();
        assert!(rho <= 1.0 / 3.0 + 1e-12);

        let report = pss_run(&[pss], &[1.0], &vecr(&[1.0, 2.0]), &SolveConfig::default()).unwrap();
        assert!(report.converged);
    }

    #[test]
    fn pss_iteration_matrix_convexity_cases() {
        let a = CMatrix::from_real_diagonal(&[2.0, 2.0]);
        let p1 = PssSplitting::new(a.clone(), a.clone(), CMatrix::zeros(2), 1.0).unwrap();
        let p2 = PssSplitting::new(a.clone(), a.clone(), CMatrix::zeros(2), 2.0).unwrap();

        // Two identical parts equal the single part.
        let single = pss_iteration_matrix(std::slice::from_ref(&p1), &[1.0]).unwrap();
        let double = pss_iteration_matrix(&[p1.clone(), p1.clone()], &[0.5, 0.5]).unwrap();
        assert!((&single - &double).frobenius_norm() <= 1e-13);

        // alpha = (1, 2) on P = 2I, S = 0: 0.5(-1/3) + 0.5*0 = -1/6.
        let mixed = pss_iteration_matrix(&[p1, p2], &[0.5, 0.5]).unwrap();
        assert_relative_eq!(mixed.get(0, 0).re, -1.0 / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn omega_range_cases() {
        assert_eq!(omega_range(0.0).unwrap(), (0.0, 2.0));
        assert_eq!(omega_range(1.0 / 3.0).unwrap(), (0.0, 1.5));
        let (lo, hi) = omega_range(5.0 / 12.0).unwrap();
        assert_eq!(lo, 0.0);
        assert_relative_eq!(hi, 24.0 / 17.0, max_relative = 1e-15);
        assert!(matches!(
            omega_range(1.0),
            Err(CoreError::NotContractive { .. })
        ));
    }

    #[test]
    fn residual_history_length_invariant() {
        let report = multisplit_run(&scalar_demo(), &vecr(&[2.0]), &SolveConfig::default()).unwrap();
        assert_eq!(report.residual_history.len(), report.iterates_used + 1);
        assert!(report.residual_history.last().unwrap() <= &1e-10);
    }
}
