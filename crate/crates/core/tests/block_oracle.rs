//! Exact block-space algorithm: vectorization, the B = I equality with the
//! fast step, the dual-gradient identity for z, and descent.

mod common;

use common::*;
use mmv_core::block_oracle::{
    build_block_model, exact_b_update, exact_gamma_update, exact_x_update, exact_z_update, solve_exact,
    unvec_rows, vec_rows,
};
use mmv_core::solvers::{reweighted_l2_step, solve_resbl_qm_observed, update_b, WeightVector};
use mmv_core::synth::{gen_instance, InstanceSpec, Snr};
use mmv_core::{Hyperparameters, MmvProblem, SolverConfig};
use nalgebra::{DMatrix, DVector};

fn ln_det(a: DMatrix<f64>) -> f64 {
    a.cholesky().expect("positive definite").ln_determinant()
}

#[test]
fn kronecker_vectorization_identity() {
    let p = random_problem(1, 3, 4, 3);
    let hyper = Hyperparameters::initial(4, 3, 1.0);
    let model = build_block_model(&p, &hyper).unwrap();
    let mut r = rng(2);
    let x = gaussian(&mut r, 4, 3);
    let lhs = &model.d * vec_rows(&x);
    let rhs = vec_rows(&(p.phi() * &x));
    assert!((lhs - rhs).abs().max() <= 1e-13);
}

#[test]
fn identity_b_block_step_equals_fast_step() {
    for seed in 0..20u64 {
        let (n, m, l) = (3 + (seed % 4) as usize, 6 + (seed % 5) as usize, 1 + (seed % 3) as usize);
        let p = random_problem(50 + seed, n, m, l);
        let mut r = rng(90 + seed);
        let gamma = positive(&mut r, m, 0.05, 3.0);
        for lambda in [0.1, 1.0] {
            let hyper = Hyperparameters::new(gamma.clone(), DMatrix::identity(l, l), lambda).unwrap();
            let model = build_block_model(&p, &hyper).unwrap();
            let block = unvec_rows(&exact_x_update(&model, lambda).unwrap(), m, l);
            let fast = reweighted_l2_step(&p, &WeightVector::from_gamma(&gamma).unwrap(), lambda).unwrap();
            assert!(rel_err(&block, &fast) <= 1e-8, "seed {seed} lambda {lambda}");
        }
    }
}

#[test]
fn kronecker_inverse_approximation_is_exact_at_identity_b() {
    for seed in 0..10u64 {
        let (n, m, l) = (4, 7, 3);
        let p = random_problem(700 + seed, n, m, l);
        let mut r = rng(800 + seed);
        let gamma = positive(&mut r, m, 0.05, 3.0);
        let lambda = 0.3 + 0.1 * seed as f64;
        let hyper = Hyperparameters::new(gamma.clone(), DMatrix::identity(l, l), lambda).unwrap();
        let model = build_block_model(&p, &hyper).unwrap();
        let block = (DMatrix::<f64>::identity(n * l, n * l) * lambda
            + &model.d * &model.sigma0 * model.d.transpose())
            .try_inverse()
            .unwrap();
        let small = (DMatrix::<f64>::identity(n, n) * lambda
            + p.phi() * DMatrix::from_diagonal(&gamma) * p.phi().transpose())
            .try_inverse()
            .unwrap()
            .kronecker(&DMatrix::<f64>::identity(l, l));
        let diff = (&block - &small).svd(false, false).singular_values.max();
        let scale = block.svd(false, false).singular_values.max();
        assert!(diff <= 1e-10 * scale, "seed {seed}: {diff:e}");
    }
}

/// `∂/∂(1/γ_i) ln|DᵀD/λ + Γ⁻¹ ⊗ B⁻¹|` by central differences.
fn z_by_finite_differences(p: &MmvProblem, gamma: &DVector<f64>, b: &DMatrix<f64>, lambda: f64) -> DVector<f64> {
    let l = b.nrows();
    let d = p.phi().kronecker(&DMatrix::<f64>::identity(l, l));
    let dtd = d.transpose() * &d / lambda;
    let b_inv = b.clone().try_inverse().unwrap();
    let f = |u: &DVector<f64>| ln_det(&dtd + DMatrix::from_diagonal(u).kronecker(&b_inv));
    let u0 = gamma.map(|g| 1.0 / g);
    DVector::from_fn(gamma.len(), |i, _| {
        let h = 1e-5 * u0[i];
        let mut up = u0.clone();
        up[i] += h;
        let mut dn = u0.clone();
        dn[i] -= h;
        (f(&up) - f(&dn)) / (2.0 * h)
    })
}

#[test]
fn z_update_is_the_log_det_gradient() {
    for seed in 0..10u64 {
        let (n, m, l) = (3 + (seed % 4) as usize, 5 + (seed % 6) as usize, 2);
        let p = random_problem(900 + seed, n, m, l);
        let mut r = rng(950 + seed);
        let gamma = positive(&mut r, m, 0.2, 2.0);
        let b = random_spd(990 + seed, l);
        let lambda = 0.5;
        let hyper = Hyperparameters::new(gamma.clone(), b.clone(), lambda).unwrap();
        let z = exact_z_update(&build_block_model(&p, &hyper).unwrap(), lambda).unwrap();
        let fd = z_by_finite_differences(&p, &gamma, &b, lambda);
        for i in 0..m {
            assert!((z[i] - fd[i]).abs() <= 1e-5 * fd[i].abs(), "seed {seed} i {i}: {} vs {}", z[i], fd[i]);
        }
    }
}

#[test]
fn b_update_agrees_with_fast_parameterization() {
    let mut r = rng(31);
    let x = gaussian(&mut r, 5, 3);
    let gamma = positive(&mut r, 5, 0.1, 2.0);
    let block = exact_b_update(&vec_rows(&x), &gamma, 1e-4).unwrap();
    let fast = update_b(&x, &WeightVector::from_gamma(&gamma).unwrap(), 1e-4).unwrap();
    assert!((&block - &fast).abs().max() <= 1e-12);

    let mut direct = DMatrix::<f64>::identity(3, 3) * 1e-4;
    for i in 0..5 {
        let row = x.row(i).transpose();
        direct += &row * row.transpose() / gamma[i];
    }
    let direct = &direct / direct.norm();
    assert!((&block - &direct).abs().max() <= 1e-12);
}

#[test]
fn gamma_reaches_a_fixed_point() {
    // Overdetermined instances keep every γ positive, so the cycle converges
    // linearly instead of creeping towards pruning.
    for (seed, learn_b) in [(2u64, false), (4, true)] {
        let phi = mmv_core::synth::gen_dictionary(8, 4, seed);
        let y = DMatrix::from_fn(8, 2, |i, j| (((i * 7 + j * 3 + seed as usize) as f64) * 1.3).sin());
        let p = MmvProblem::new(phi, y, Some(0.05)).unwrap();
        let config = SolverConfig { max_iter: 5_000, tol: 1e-13, learn_b, ..Default::default() };
        let r = solve_exact(&p, &config).unwrap();
        assert!(r.converged, "seed {seed}");
        let lambda = r.hyper.lambda();
        let model = build_block_model(&p, &r.hyper).unwrap();
        let x = exact_x_update(&model, lambda).unwrap();
        let z = exact_z_update(&model, lambda).unwrap();
        let gamma = exact_gamma_update(&x, &z, &model.b).unwrap();
        let change = (&gamma - r.hyper.gamma()).abs().max();
        assert!(change < 1e-10, "seed {seed}: gamma moved by {change:e}");
    }
}

fn small_instances() -> Vec<MmvProblem> {
    (0..20u64)
        .map(|seed| {
            let n = 5 + (seed % 6) as usize;
            let m = 12 + (seed % 9) as usize;
            let l = 1 + (seed % 3) as usize;
            let k = 1 + (seed % 3) as usize;
            let snr = if seed % 4 == 0 { Snr::Db(10.0) } else { Snr::Db(25.0) };
            let spec = InstanceSpec { n, m, l, k, beta_low: 0.0, beta_high: 1.0, snr };
            gen_instance(&spec, 1000 + seed).unwrap().0
        })
        .collect()
}

// With B pinned the cycle is expectation-maximization in γ and the
// evidence cannot increase. The learned-B cycle is checked by the
// acceptance suite.
#[test]
fn exact_objective_is_non_increasing_with_identity_b() {
    let config = SolverConfig { max_iter: 200, learn_b: false, ..Default::default() };
    for (idx, p) in small_instances().iter().enumerate() {
        let r = solve_exact(p, &config).unwrap();
        for (k, w) in r.objective_trace.windows(2).enumerate() {
            let slack = 1e-9 * w[0].abs().max(1.0);
            assert!(w[1] <= w[0] + slack, "instance {idx} cycle {k}: {} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn identity_b_oracle_tracks_fast_solver() {
    let spec = InstanceSpec { n: 8, m: 16, l: 3, k: 3, beta_low: 0.5, beta_high: 1.0, snr: Snr::Db(20.0) };
    let config = SolverConfig { max_iter: 30, tol: 1e-300, learn_b: false, ..Default::default() };
    for seed in 0..3 {
        let (p, _) = gen_instance(&spec, 60 + seed).unwrap();
        let mut fast_iterates = Vec::new();
        solve_resbl_qm_observed(&p, &config, &mut |it| fast_iterates.push(it.x.clone())).unwrap();
        let exact = solve_exact(&p, &config).unwrap();
        assert_eq!(exact.iterations, fast_iterates.len());
        let last = fast_iterates.last().unwrap();
        assert!(rel_err(&exact.x_hat, last) <= 1e-6, "seed {seed}: {:e}", rel_err(&exact.x_hat, last));
    }
}

#[test]
fn exact_solver_recovers_small_noiseless_support() {
    let spec = InstanceSpec { n: 10, m: 20, l: 3, k: 3, beta_low: 0.5, beta_high: 1.0, snr: Snr::Noiseless };
    for seed in 0..5 {
        let (p, truth) = gen_instance(&spec, 70 + seed).unwrap();
        let r = solve_exact(&p, &SolverConfig::default()).unwrap();
        assert!(!mmv_core::metrics::is_failure(&r.x_hat, &truth), "seed {seed}");
        assert!(rel_err(&r.x_hat, &truth.x_gen) < 1e-3, "seed {seed}");
    }
}
