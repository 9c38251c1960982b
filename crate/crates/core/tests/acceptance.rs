//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success (run with `--nocapture` to see them; the harness result line
//! mirrors the verdict either way). Every tolerance is pinned in the
//! assertions below.

mod common;

use std::time::Instant;

use common::*;
use multisplit_core::certificates::{
    at_family_pd, block_comparison, bracket, certify_multisplitting, extended_h_matrix,
    generalized_m_matrix, lemma_identity_check, BlockMatrix, MultisplitCondition, Verdict,
};
use multisplit_core::iteration::{
    iteration_matrix, lifted_spectral_radius, multisplit_run, omega_range, pss_iteration_matrix,
    pss_run, relaxed_matrix, SolveConfig,
};
use multisplit_core::linalg::{
    hermitian_eigenvalues, hermitian_part, solve_dense, solve_dense_mat, spectral_radius,
    unit_phase,
};
use multisplit_core::problems::{convection_diffusion_1d, random_npd, random_unitary, Lcg64};
use multisplit_core::pss_params::optimal_alpha;
use multisplit_core::splittings::{
    bts_split, hadjidimos_multisplitting, make_multisplitting, make_scalar_multisplitting,
    ts_split, TrianglePart,
};
use multisplit_core::{C64, CMatrix, HermitianMatrix, Multisplitting};

fn suite1_instances() -> Vec<(HypothesisClass, Multisplitting)> {
    let sizes = [4usize, 8, 16];
    let part_counts = [2usize, 3];
    let mut out = Vec::new();
    for class in HypothesisClass::all() {
        let mut rng = Lcg64::new(0xACC1 ^ class as u64);
        for i in 0..30 {
            let n = sizes[i % sizes.len()];
            let m = part_counts[i % part_counts.len()];
            out.push((class, hypothesis_true_instance(class, n, m, rng.next_u64())));
        }
    }
    out
}

#[test]
fn criterion_01_theorem_implication_suite() {
    let start = Instant::now();
    for (class, ms) in suite1_instances() {
        let cert = certify_multisplitting(&ms, class.condition()).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified, "hypothesis not true: {class:?}");
        let t = iteration_matrix(&ms).unwrap();
        let rho = spectral_radius(&t).unwrap();
        assert!(
            rho <= 1.0 - 1e-8,
            "{class:?}: rho = {rho} violates the strict contraction margin"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "suite took {elapsed:?}");
    println!("criterion 01 theorem-implication suite: PASS ({elapsed:?})");
}

#[test]
fn criterion_02_lifted_identity() {
    let start = Instant::now();
    let mut rng = Lcg64::new(0xACC2);
    for trial in 0..50 {
        let n = 2 + (rng.next_u64() % 15) as usize;
        let m = 2 + (rng.next_u64() % 2) as usize;
        let a = random_npd(n, rng.next_range(0.0, 1.0), rng.next_u64());
        let mut parts = Vec::with_capacity(m);
        for _ in 0..m {
            let g = random_complex(n, &mut rng);
            let nk = g.scale_re(rng.next_range(0.05, 0.6) / g.frobenius_norm());
            parts.push((&a + &nk, nk));
        }
        // Half scalar, half general diagonal weights.
        let ms = if trial % 2 == 0 {
            let betas = random_scalar_weights(m, &mut rng);
            make_scalar_multisplitting(a, parts, &betas).unwrap()
        } else {
            let weights = random_diagonal_weights(m, n, &mut rng);
            make_multisplitting(a, parts, weights).unwrap()
        };
        let rho_t = spectral_radius(&iteration_matrix(&ms).unwrap()).unwrap();
        let rho_lifted = lifted_spectral_radius(&ms).unwrap();
        let gap = (rho_t - rho_lifted).abs();
        assert!(
            gap <= 1e-10 * rho_t.max(1.0),
            "trial {trial}: |rho(T) - rho(B^-1 C)| = {gap}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "suite took {elapsed:?}");
    println!("criterion 02 lifted identity: PASS ({elapsed:?})");
}

#[test]
fn criterion_03_congruence_identity_residual() {
    let start = Instant::now();
    let mut rng = Lcg64::new(0xACC3);
    // Entries on a dyadic grid make A = M - N exact in floating point.
    let mut dyadic = |scale: f64| -> f64 {
        let raw = (rng.next_f64() * 2.0 - 1.0) * scale;
        (raw * 1024.0).round() / 1024.0
    };
    for trial in 0..50 {
        let n = 2 + (trial % 7);
        let mut a_entries = Vec::with_capacity(n * n);
        let mut n_entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let diag_boost = if i == j { 6.0 } else { 0.0 };
                a_entries.push(c(diag_boost + dyadic(1.0), dyadic(1.0)));
                n_entries.push(c(dyadic(0.25), dyadic(0.25)));
            }
        }
        let a = CMatrix::from_rows(n, &a_entries).unwrap();
        let nk = CMatrix::from_rows(n, &n_entries).unwrap();
        let mk = &a + &nk;
        let residual = lemma_identity_check(&a, &mk, &nk).unwrap();
        assert!(residual <= 1e-11, "trial {trial}: residual {residual}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "suite took {elapsed:?}");
    println!("criterion 03 congruence identity residual: PASS ({elapsed:?})");
}

#[test]
fn criterion_04_relaxation_ranges() {
    let start = Instant::now();
    for (class, ms) in suite1_instances() {
        let t = iteration_matrix(&ms).unwrap();
        let rho = spectral_radius(&t).unwrap();
        let (_, hi) = omega_range(rho).unwrap();
        for j in 1..=10 {
            let omega = hi * j as f64 / 11.0;
            let rho_w = spectral_radius(&relaxed_matrix(&t, omega)).unwrap();
            assert!(
                rho_w < 1.0,
                "{class:?}: omega = {omega} gives rho(T_w) = {rho_w}"
            );
        }
        // omega = 1 recovers T bitwise.
        assert_eq!(relaxed_matrix(&t, 1.0), t);
    }
    let elapsed = start.elapsed();
    println!("criterion 04 relaxation ranges: PASS ({elapsed:?})");
}

#[test]
fn criterion_05_pss_chain() {
    let start = Instant::now();
    let grid = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let mut rng = Lcg64::new(0xACC5);
    let mut middle_link_violations: Vec<String> = Vec::new();
    for trial in 0..20 {
        let n = 4 + (rng.next_u64() % 9) as usize;
        let a = random_npd(n, rng.next_range(0.1, 1.2), rng.next_u64());
        let base = match trial % 3 {
            0 => ts_split(&a, TrianglePart::StrictUpper, 1.0).unwrap(),
            1 => ts_split(&a, TrianglePart::StrictLower, 1.0).unwrap(),
            _ => bts_split(&a, &[n / 2, n - n / 2], 1.0).unwrap(),
        };
        // The sweep hard-asserts the provable links per row with 1e-12
        // slack: rho(M) <= ||M||, rho(M) <= ||V||, ||V|| < 1.
        let rows = multisplit_core::pss_params::rho_vs_bound_sweep(&base, &grid).unwrap();
        for row in &rows {
            assert!(row.rho_m <= row.norm_m + 1e-12);
            assert!(row.rho_m <= row.norm_v + 1e-12);
            assert!(row.norm_v < 1.0 + 1e-12);
            if row.norm_m > row.norm_v + 1e-12 {
                middle_link_violations.push(format!(
                    "trial {trial}, alpha {}: ||M|| = {:.6} > ||V|| = {:.6} (rho = {:.6})",
                    row.alpha, row.norm_m, row.norm_v, row.rho_m
                ));
            }
        }
        // m = 2 scalar-weight combination stays contractive.
        let other = ts_split(
            &a,
            if trial % 3 == 0 {
                TrianglePart::StrictLower
            } else {
                TrianglePart::StrictUpper
            },
            2.0,
        )
        .unwrap();
        let pair = [base.with_alpha(rng.next_range(0.3, 4.0)).unwrap(), other];
        let m_combined = pss_iteration_matrix(&pair, &[0.5, 0.5]).unwrap();
        let rho = spectral_radius(&m_combined).unwrap();
        assert!(rho < 1.0, "trial {trial}: rho(M(alpha)) = {rho}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "suite took {elapsed:?}");

    // The criterion's literal chain also demands ||M(alpha)|| <= ||V(alpha)||.
    // That inequality is not a theorem: M = W^{-1} V W* with W = alpha I + S,
    // so only the spectral radius transfers through the similarity, and
    // ||M||_2 can exceed ||V||_2 by up to cond(W). It is asserted here as
    // stated; the failure below is expected and documents the counterexamples.
    assert!(
        middle_link_violations.is_empty(),
        "criterion 05 pss chain: middle link ||M|| <= ||V|| violated on honest \
         instances (expected; only rho(M) <= ||V|| is provable):\n{}",
        middle_link_violations.join("\n")
    );
    println!("criterion 05 pss chain: PASS ({elapsed:?})");
}

#[test]
fn criterion_06_optimal_alpha() {
    let start = Instant::now();

    // Fixed fixture.
    let p = CMatrix::from_real_diagonal(&[1.0, 4.0]);
    let r = optimal_alpha(&p).unwrap();
    assert!((r.alpha_star - 2.0).abs() <= 1e-6, "alpha* = {}", r.alpha_star);
    assert!(
        (r.bound_at_star - 1.0 / 3.0).abs() <= 1e-6,
        "bound = {}",
        r.bound_at_star
    );

    // Hermitian instances against the per-eigenvalue oracle.
    let mut rng = Lcg64::new(0xACC6);
    for trial in 0..20 {
        let n = 2 + (rng.next_u64() % 7) as usize;
        let p = random_npd(n, 0.0, rng.next_u64());
        let eigs = hermitian_eigenvalues(&HermitianMatrix::new(&p).unwrap()).unwrap();
        let (lmin, lmax) = (eigs[0], eigs[eigs.len() - 1]);
        let expect_alpha = (lmin * lmax).sqrt();
        let kappa = lmax / lmin;
        let expect_bound = (kappa.sqrt() - 1.0) / (kappa.sqrt() + 1.0);
        let r = optimal_alpha(&p).unwrap();
        assert!(
            (r.alpha_star - expect_alpha).abs() <= 1e-6,
            "trial {trial}: alpha {} vs {expect_alpha}",
            r.alpha_star
        );
        assert!(
            (r.bound_at_star - expect_bound).abs() <= 1e-6,
            "trial {trial}: bound {} vs {expect_bound}",
            r.bound_at_star
        );
    }

    // Non-Hermitian instances against a dense grid.
    for trial in 0..10 {
        let n = 2 + (rng.next_u64() % 5) as usize;
        let p = random_npd(n, rng.next_range(0.2, 1.0), rng.next_u64());
        let r = optimal_alpha(&p).unwrap();
        let mut best = (f64::NAN, f64::INFINITY);
        for i in 0..1000 {
            let a = r.sigma_min + (r.sigma_max - r.sigma_min) * i as f64 / 999.0;
            let v = multisplit_core::pss_params::v_alpha_norm(&p, a).unwrap();
            if v < best.1 {
                best = (a, v);
            }
        }
        assert!(
            (r.alpha_star - best.0).abs() <= 1e-2,
            "trial {trial}: alpha {} vs grid {}",
            r.alpha_star,
            best.0
        );
        assert!(
            r.fixed_point_residual <= 1e-6 * r.alpha_star.max(1.0),
            "trial {trial}: fixed point residual {}",
            r.fixed_point_residual
        );
    }

    let elapsed = start.elapsed();
    println!("criterion 06 optimal alpha: PASS ({elapsed:?})");
}

#[test]
fn criterion_07_solver_end_to_end() {
    let start = Instant::now();

    // Scalar demo: observed contraction 5/12 +/- 0.02.
    let demo = make_scalar_multisplitting(
        CMatrix::from_real_rows(1, &[2.0]).unwrap(),
        vec![
            (
                CMatrix::from_real_rows(1, &[3.0]).unwrap(),
                CMatrix::from_real_rows(1, &[1.0]).unwrap(),
            ),
            (
                CMatrix::from_real_rows(1, &[4.0]).unwrap(),
                CMatrix::from_real_rows(1, &[2.0]).unwrap(),
            ),
        ],
        &[0.5, 0.5],
    )
    .unwrap();
    let report = multisplit_run(&demo, &rvec(&[2.0]), &SolveConfig::default()).unwrap();
    assert!(report.converged);
    assert!((report.rho_estimate - 5.0 / 12.0).abs() <= 0.02);

    // Convection-diffusion, certified splitting, iteration-count bound.
    let n = 64;
    let a = convection_diffusion_1d(n, 10.0).unwrap();
    let (ms, _) = hadjidimos_multisplitting(&a, &[1.0, 1.0], None).unwrap();
    let cert = certify_multisplitting(&ms, MultisplitCondition::Contraction).unwrap();
    assert_eq!(cert.verdict, Verdict::Certified, "splitting not certified");

    let cfg = SolveConfig {
        tol: 1e-10,
        max_iter: 30_000,
        exact_rho: true,
        ..Default::default()
    };
    let b = rvec(&vec![1.0; n]);
    let report = multisplit_run(&ms, &b, &cfg).unwrap();
    assert!(report.converged, "solver did not reach 1e-10");
    let rho_exact = report.rho_exact.unwrap();
    assert!(rho_exact < 1.0);
    let bound = (1.2 * (1e-10f64).ln() / rho_exact.ln()).ceil() as usize;
    assert!(
        report.iterates_used <= bound,
        "used {} iterations, bound {bound} (rho = {rho_exact})",
        report.iterates_used
    );

    let direct = solve_dense(&a, &b).unwrap();
    let err = (&report.final_x - &direct).norm() / direct.norm();
    assert!(err <= 1e-8, "final error {err}");

    let elapsed = start.elapsed();
    println!("criterion 07 solver end-to-end: PASS ({elapsed:?})");
}

#[test]
fn criterion_08_one_step_exactness() {
    let a = CMatrix::from_real_rows(2, &[2.0, 1.0, -1.0, 2.0]).unwrap();
    let pss = ts_split(&a, TrianglePart::StrictUpper, 2.0).unwrap();
    let b = rvec(&[1.0, -2.0]);
    let report = pss_run(&[pss], &[1.0], &b, &SolveConfig::default()).unwrap();
    assert!(report.converged);
    assert_eq!(report.iterates_used, 1, "M(2) = 0 must solve in one step");
    let direct = solve_dense(&a, &b).unwrap();
    assert!((&report.final_x - &direct).norm() <= 1e-12);
    println!("criterion 08 one-step exactness: PASS");
}

#[test]
fn criterion_09_comparison_machinery() {
    let start = Instant::now();

    // Fixed examples.
    let br = bracket(&CMatrix::from_real_diagonal(&[-2.0, 3.0])).unwrap();
    assert!(
        (&br.to_cmatrix() - &CMatrix::from_real_diagonal(&[2.0, 3.0])).frobenius_norm() <= 1e-12
    );
    let skew = CMatrix::from_real_rows(2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
    assert!(
        (&bracket(&skew).unwrap().to_cmatrix() - &CMatrix::identity(2)).frobenius_norm() <= 1e-10
    );

    let scalar_blocks = |vals: &[f64]| -> BlockMatrix {
        let blocks = vals
            .iter()
            .map(|&x| CMatrix::from_real_rows(1, &[x]).unwrap())
            .collect();
        BlockMatrix::from_blocks(2, 1, blocks).unwrap()
    };
    let good = scalar_blocks(&[2.0, -1.0, -1.0, 2.0]);
    let mu = block_comparison(&good).unwrap();
    assert!((&mu.flatten() - &good.flatten()).frobenius_norm() <= 1e-12);
    assert_eq!(
        generalized_m_matrix(&good).unwrap().certificate.verdict,
        Verdict::Certified
    );
    assert_eq!(
        generalized_m_matrix(&scalar_blocks(&[1.0, -2.0, -2.0, 1.0]))
            .unwrap()
            .certificate
            .verdict,
        Verdict::NotCertified
    );
    assert_eq!(
        extended_h_matrix(&good).unwrap().verdict,
        Verdict::Certified
    );

    // Paired-bracket block PSD property: 20 normal B, 16 t samples.
    let mut rng = Lcg64::new(0xACC9);
    for _ in 0..20 {
        let n = 2 + (rng.next_u64() % 4) as usize;
        let q = random_unitary(n, &mut rng);
        let d: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.next_range(-2.0, 2.0), rng.next_range(-2.0, 2.0)))
            .collect();
        let b = &(&q * &CMatrix::from_diagonal(&d)) * &q.adjoint();
        let br = bracket(&b).unwrap().to_cmatrix();
        let norm_b = multisplit_core::linalg::spectral_norm(&b).unwrap();
        for s in 0..16 {
            let t = 2.0 * std::f64::consts::PI * s as f64 / 16.0;
            let ph = b.scale(unit_phase(t));
            let big = CMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
                (true, true) => br.get(i, j),
                (true, false) => ph.get(i, j - n),
                (false, true) => ph.adjoint().get(i - n, j),
                (false, false) => br.get(i - n, j - n),
            })
            .unwrap();
            let lmin =
                multisplit_core::linalg::lambda_min(&hermitian_part(&big)).unwrap();
            assert!(lmin >= -1e-10 * norm_b.max(1.0), "lambda_min {lmin}");
        }
    }

    // Definiteness family implies contraction of B^{-1}C: 20 instances.
    let mut certified = 0;
    for trial in 0..20 {
        let n = 2 + (rng.next_u64() % 5) as usize;
        let b = random_npd(n, rng.next_range(0.0, 0.5), rng.next_u64());
        let g = random_complex(n, &mut rng);
        // Mix certifiable (small C) and failing (large C) instances.
        let scale = if trial % 3 == 0 { 2.0 } else { 0.3 };
        let cmat = g.scale_re(
            scale / multisplit_core::linalg::spectral_norm(&g).unwrap(),
        );
        let verdict = at_family_pd(&b, &cmat, 64).unwrap();
        if verdict.verdict == Verdict::Certified {
            certified += 1;
            let t = solve_dense_mat(&b, &cmat).unwrap();
            let rho = spectral_radius(&t).unwrap();
            assert!(rho < 1.0 + 1e-8, "trial {trial}: rho = {rho}");
        }
    }
    assert!(certified >= 8, "only {certified} certified instances");

    let elapsed = start.elapsed();
    println!("criterion 09 comparison machinery: PASS ({elapsed:?})");
}

#[test]
fn criterion_10_worker_determinism() {
    let start = Instant::now();
    type ConfigRunner = Box<dyn Fn(usize) -> Vec<Vec<u64>>>;
    let mut configs: Vec<(String, ConfigRunner)> = Vec::new();

    // Three multisplitting configurations.
    for (idx, seed) in [11u64, 23, 37].into_iter().enumerate() {
        let ms = hypothesis_true_instance(HypothesisClass::NPsd, 8, 3, seed);
        let b = rvec(&(0..8).map(|i| 1.0 + i as f64).collect::<Vec<_>>());
        configs.push((
            format!("multisplit-{idx}"),
            Box::new(move |workers| {
                let cfg = SolveConfig {
                    workers,
                    max_iter: 300,
                    tol: 1e-12,
                    trace_iterates: true,
                    ..Default::default()
                };
                let report = multisplit_run(&ms, &b, &cfg).unwrap();
                trace_bits(&report)
            }),
        ));
    }

    // Two PSS configurations.
    for (idx, seed) in [41u64, 53].into_iter().enumerate() {
        let a = random_npd(8, 0.6, seed);
        let parts = vec![
            ts_split(&a, TrianglePart::StrictUpper, 1.0).unwrap(),
            ts_split(&a, TrianglePart::StrictLower, 2.0).unwrap(),
        ];
        let b = rvec(&(0..8).map(|i| (i as f64).cos()).collect::<Vec<_>>());
        configs.push((
            format!("pss-{idx}"),
            Box::new(move |workers| {
                let cfg = SolveConfig {
                    workers,
                    max_iter: 200,
                    tol: 1e-12,
                    trace_iterates: true,
                    ..Default::default()
                };
                let report = pss_run(&parts, &[0.5, 0.5], &b, &cfg).unwrap();
                trace_bits(&report)
            }),
        ));
    }

    for (name, run) in &configs {
        let baseline = run(1);
        for workers in [2usize, 8] {
            let other = run(workers);
            assert_eq!(
                baseline, other,
                "{name}: iterate sequence differs between 1 and {workers} workers"
            );
        }
    }

    let elapsed = start.elapsed();
    println!("criterion 10 worker determinism: PASS ({elapsed:?})");
}

fn trace_bits(report: &multisplit_core::IterationReport) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for x in report.iterate_trace.as_ref().expect("trace requested") {
        out.push(
            x.iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect(),
        );
    }
    out.push(
        report
            .residual_history
            .iter()
            .map(|r| r.to_bits())
            .collect(),
    );
    out
}
