//! Whole-solver properties: equivariance, descent, the correlation-matrix
//! contract, pruning persistence and the B = I reductions.

mod common;

use common::*;
use mmv_core::metrics::{is_failure, top_k_support};
use mmv_core::solvers::{
    reweighted_l2_step, solve_iter_l2, solve_iter_l2_observed, solve_mfocuss, solve_mfocuss_observed,
    solve_resbl_qm, solve_resbl_qm_observed, solve_titer_l2_observed, solve_tmfocuss_observed, Iterate,
    Observer, WeightVector,
};
use mmv_core::synth::{gen_instance, InstanceSpec, Snr};
use mmv_core::{Algorithm, MmvProblem, RecoveryError, RecoveryResult, SolverConfig};
use nalgebra::{DMatrix, DVector};

type Observed = fn(&MmvProblem, &SolverConfig, &mut Observer<'_>) -> mmv_core::Result<RecoveryResult>;

#[derive(Debug, Clone)]
struct Snapshot {
    x: DMatrix<f64>,
    weights: WeightVector,
    b: DMatrix<f64>,
    epsilon: f64,
}

fn record(solve: Observed, p: &MmvProblem, config: &SolverConfig) -> (RecoveryResult, Vec<Snapshot>) {
    let mut snaps = Vec::new();
    let r = solve(p, config, &mut |it: &Iterate<'_>| {
        snaps.push(Snapshot { x: it.x.clone(), weights: it.weights.clone(), b: it.b.clone(), epsilon: it.epsilon })
    })
    .unwrap();
    (r, snaps)
}

fn spec(k: usize, snr: Snr, beta_low: f64, beta_high: f64) -> InstanceSpec {
    InstanceSpec { n: 25, m: 100, l: 3, k, beta_low, beta_high, snr }
}

#[test]
fn recovered_rows_follow_a_column_permutation() {
    let s = InstanceSpec { n: 12, m: 30, l: 3, k: 4, beta_low: 0.5, beta_high: 1.0, snr: Snr::Db(25.0) };
    let (p, _) = gen_instance(&s, 17).unwrap();
    let m = p.m();
    // Reverse-and-rotate permutation.
    let perm: Vec<usize> = (0..m).map(|j| (m - 1 - j + 7) % m).collect();
    let phi_perm = DMatrix::from_fn(p.n(), m, |i, j| p.phi()[(i, perm[j])]);
    let q = MmvProblem::new(phi_perm, p.y().clone(), p.noise_level()).unwrap();
    let config = SolverConfig { max_iter: 200, ..Default::default() };
    for alg in Algorithm::ALL {
        let a = alg.solve(&p, &config).unwrap();
        let b = alg.solve(&q, &config).unwrap();
        let a_perm = DMatrix::from_fn(m, p.l(), |i, j| a.x_hat[(perm[i], j)]);
        let scale = a.x_hat.norm().max(1.0);
        let diff = (&a_perm - &b.x_hat).abs().max();
        assert!(diff <= 1e-10 * scale, "{alg}: {diff:e}");
    }
}

#[test]
fn mfocuss_objective_descends() {
    for seed in 0..20u64 {
        let snr = if seed % 2 == 0 { Snr::Db(25.0) } else { Snr::Db(10.0) };
        let (p, _) = gen_instance(&spec(8 + (seed % 5) as usize, snr, 0.0, 1.0), 500 + seed).unwrap();
        let r = solve_mfocuss(&p, &SolverConfig::default()).unwrap();
        for (k, w) in r.objective_trace.windows(2).enumerate() {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "seed {seed} iteration {k}: {} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn learned_b_is_symmetric_unit_norm_and_positive_definite() {
    let (p, _) = gen_instance(&spec(10, Snr::Db(25.0), 0.5, 1.0), 3).unwrap();
    let config = SolverConfig { max_iter: 100, ..Default::default() };
    for solve in [solve_resbl_qm_observed as Observed, solve_tmfocuss_observed, solve_titer_l2_observed] {
        let (_, snaps) = record(solve, &p, &config);
        for s in snaps.iter().skip(1) {
            assert_eq!(s.b, s.b.transpose());
            assert!((s.b.norm() - 1.0).abs() <= 1e-12);
            assert!(s.b.symmetric_eigenvalues().min() > 0.0);
        }
    }
}

#[test]
fn pruned_rows_stay_pruned() {
    let (p, _) = gen_instance(&spec(6, Snr::Noiseless, 0.5, 1.0), 9).unwrap();
    let config = SolverConfig::default();
    // SBL variances decay slowly, so the tolerance is tightened to let
    // ReSBL-QM run long enough to prune.
    let long = SolverConfig { tol: 1e-14, ..config.clone() };
    for (solve, config) in [
        (solve_resbl_qm_observed as Observed, &long),
        (solve_mfocuss_observed, &config),
        (solve_tmfocuss_observed, &config),
        (solve_iter_l2_observed, &config),
        (solve_titer_l2_observed, &config),
    ] {
        let (r, snaps) = record(solve, &p, config);
        let mut ever_pruned = vec![false; p.m()];
        for s in &snaps {
            for i in 0..p.m() {
                if ever_pruned[i] {
                    assert!(s.weights.is_pruned(i));
                    assert!(s.x.row(i).iter().all(|&v| v == 0.0));
                }
                ever_pruned[i] |= s.weights.is_pruned(i);
            }
        }
        assert!(ever_pruned.iter().any(|&p| p), "nothing was pruned ({} iterations)", r.iterations);
        for i in 0..p.m() {
            if r.hyper.gamma()[i] == 0.0 {
                assert!(r.x_hat.row(i).iter().all(|&v| v == 0.0));
            }
        }
        assert!(r.iterations <= config.max_iter);
    }
}

#[test]
fn pinned_identity_b_reduces_to_the_plain_solvers() {
    let (p, _) = gen_instance(&spec(10, Snr::Db(25.0), 0.5, 1.0), 21).unwrap();
    let config = SolverConfig { learn_b: false, ..Default::default() };
    let pairs: [(Observed, Observed); 2] = [
        (solve_mfocuss_observed, solve_tmfocuss_observed),
        (solve_iter_l2_observed, solve_titer_l2_observed),
    ];
    for (plain, temporal) in pairs {
        let (_, a) = record(plain, &p, &config);
        let (_, b) = record(temporal, &p, &config);
        assert_eq!(a.len(), b.len());
        for (s, t) in a.iter().zip(&b) {
            assert!((&s.x - &t.x).abs().max() <= 1e-12);
            assert_eq!(s.weights.active_count(), t.weights.active_count());
        }
        // Second iterate is produced by the first reweighting.
        for i in 0..p.m() {
            assert_eq!(a[1].weights.is_pruned(i), b[1].weights.is_pruned(i));
            if !a[1].weights.is_pruned(i) {
                assert!((a[1].weights.weight(i) - b[1].weights.weight(i)).abs() <= 1e-12 * a[1].weights.weight(i));
            }
        }
    }
}

/// Plain M-FOCUSS written out with explicit inverses.
fn mfocuss_replay(p: &MmvProblem, config: &SolverConfig, iterations: usize) -> DMatrix<f64> {
    let (n, m) = (p.n(), p.m());
    let lambda = p.noise_level().unwrap().max(config.min_lambda);
    let mut gamma = DVector::from_element(m, 1.0);
    let mut x = DMatrix::zeros(m, p.l());
    for it in 0..iterations {
        let w = DMatrix::from_diagonal(&gamma);
        let s = DMatrix::<f64>::identity(n, n) * lambda + p.phi() * &w * p.phi().transpose();
        x = &w * p.phi().transpose() * s.lu().solve(p.y()).unwrap();
        if it + 1 == iterations {
            break;
        }
        let energy: Vec<f64> = (0..m).map(|i| x.row(i).norm_squared()).collect();
        let cutoff = config.prune_threshold * energy.iter().cloned().fold(0.0, f64::max);
        for i in 0..m {
            gamma[i] = if gamma[i] == 0.0 || energy[i] < cutoff {
                0.0
            } else {
                energy[i].powf(1.0 - config.p / 2.0)
            };
        }
    }
    x
}

#[test]
fn mfocuss_matches_step_by_step_replay() {
    let (p, truth) = gen_instance(&spec(6, Snr::Noiseless, 0.0, 0.0), 31).unwrap();
    let config = SolverConfig::default();
    let r = solve_mfocuss(&p, &config).unwrap();
    assert!(!is_failure(&r.x_hat, &truth));
    let replay = mfocuss_replay(&p, &config, r.iterations);
    let diff = (&r.x_hat - &replay).abs().max();
    assert!(diff <= 1e-10, "{diff:e}");
}

#[test]
fn iter_l2_reaches_the_epsilon_floor_and_recovers() {
    let (p, truth) = gen_instance(&spec(6, Snr::Noiseless, 0.0, 0.5), 41).unwrap();
    let config = SolverConfig::default();
    let (r, snaps) = record(solve_iter_l2_observed, &p, &config);
    assert!(r.converged);
    assert!(snaps.last().unwrap().epsilon <= 1e-8);
    assert!(snaps.windows(2).all(|w| w[1].epsilon <= w[0].epsilon));
    assert!(!is_failure(&r.x_hat, &truth));
    assert_eq!(r.x_hat, solve_iter_l2(&p, &config).unwrap().x_hat);
}

#[test]
fn resbl_recovers_support_with_identity_dictionary() {
    let m = 8;
    let mut x_gen = DMatrix::zeros(m, 3);
    x_gen.row_mut(2).copy_from_slice(&[0.6, 0.8, 0.0]);
    x_gen.row_mut(5).copy_from_slice(&[0.0, 0.6, -0.8]);
    let p = MmvProblem::new(DMatrix::identity(m, m), x_gen.clone(), Some(0.0)).unwrap();
    let r = solve_resbl_qm(&p, &SolverConfig::default()).unwrap();
    assert_eq!(top_k_support(&r.x_hat, 2), vec![2, 5]);
    let gamma = r.hyper.gamma();
    let max = gamma.max();
    for i in [0, 1, 3, 4, 6, 7] {
        assert!(gamma[i] <= 1e-6 * max, "gamma[{i}] = {:e}", gamma[i]);
        assert!(r.x_hat.row(i).norm() <= 1e-6);
    }
    assert!((&r.x_hat - &x_gen).abs().max() <= 1e-6);
}

#[test]
fn resbl_recovers_noiseless_correlated_sources() {
    let s = InstanceSpec { n: 25, m: 100, l: 4, k: 8, beta_low: 0.5, beta_high: 1.0, snr: Snr::Noiseless };
    let failures = (0..10u64)
        .filter(|&seed| {
            let (p, truth) = gen_instance(&s, 7000 + seed).unwrap();
            is_failure(&solve_resbl_qm(&p, &SolverConfig::default()).unwrap().x_hat, &truth)
        })
        .count();
    assert!(failures <= 1, "{failures} of 10 failed");
}

#[test]
fn learned_lambda_stays_above_floor() {
    let (p, truth) = gen_instance(&spec(8, Snr::Db(25.0), 0.5, 1.0), 51).unwrap();
    let config = SolverConfig { lambda_mode: mmv_core::LambdaMode::Learned, ..Default::default() };
    let r = solve_resbl_qm(&p, &config).unwrap();
    assert!(r.hyper.lambda() >= mmv_core::solvers::LAMBDA_FLOOR);
    assert!(!is_failure(&r.x_hat, &truth));
    let frozen = SolverConfig { lambda_learn_iters: Some(3), ..config };
    assert!(solve_resbl_qm(&p, &frozen).is_ok());
}

#[test]
fn invalid_config_is_rejected_before_solving() {
    let p = random_problem(1, 4, 6, 2);
    let config = SolverConfig { p: 3.0, ..Default::default() };
    for alg in Algorithm::ALL {
        assert!(matches!(alg.solve(&p, &config), Err(RecoveryError::InvalidConfig(_))));
    }
}

#[test]
fn overflowing_data_is_reported() {
    let p = random_problem(2, 4, 6, 2);
    let huge = MmvProblem::new(p.phi().clone(), p.y() * 1e300, Some(1.0)).unwrap();
    for alg in [Algorithm::ResblQm, Algorithm::Mfocuss, Algorithm::TiterL2] {
        let err = alg.solve(&huge, &SolverConfig::default()).unwrap_err();
        assert!(
            matches!(err, RecoveryError::NonFinite { .. } | RecoveryError::SingularSystem { .. }),
            "{alg}: {err}"
        );
    }
}

#[test]
fn step_with_all_rows_pruned_is_zero() {
    let p = random_problem(3, 4, 6, 2);
    let w = WeightVector::from_gamma(&DVector::zeros(6)).unwrap();
    assert!(reweighted_l2_step(&p, &w, 0.0).unwrap().iter().all(|&v| v == 0.0));
}

