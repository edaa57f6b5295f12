#![allow(dead_code)]

use mmv_core::MmvProblem;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn positive(rng: &mut ChaCha8Rng, len: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(lo..hi))
}

/// Random dense problem with unit-norm dictionary columns.
pub fn random_problem(seed: u64, n: usize, m: usize, l: usize) -> MmvProblem {
    let mut r = rng(seed);
    let mut phi = gaussian(&mut r, n, m);
    for mut c in phi.column_iter_mut() {
        let norm = c.norm();
        c /= norm;
    }
    let y = gaussian(&mut r, n, l);
    MmvProblem::new(phi, y, None).unwrap()
}

/// Random unit-Frobenius SPD matrix.
pub fn random_spd(seed: u64, l: usize) -> DMatrix<f64> {
    let mut r = rng(seed);
    let a = gaussian(&mut r, l, l);
    let b = &a * a.transpose() + DMatrix::identity(l, l) * 0.5;
    let b = (&b + b.transpose()) * 0.5;
    let norm = b.norm();
    b / norm
}

pub fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}
