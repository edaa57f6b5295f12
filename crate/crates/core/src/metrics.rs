//! Support-recovery failure metrics.

use std::time::Duration;

use nalgebra::DMatrix;

use crate::error::{RecoveryError, Result};
use crate::synth::GroundTruth;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub algorithm: String,
    pub failed: bool,
    pub iterations: usize,
    pub runtime: Duration,
    /// `‖X̂ − X_gen‖_F² / ‖X_gen‖_F²`; diagnostic only.
    pub mse: f64,
}

/// Indices of the `k` largest row ℓ2 norms, ascending. Ties go to the lower
/// index.
pub fn top_k_support(x_hat: &DMatrix<f64>, k: usize) -> Vec<usize> {
    let norms: Vec<f64> = x_hat.row_iter().map(|r| r.norm()).collect();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    // Stable sort keeps lower indices first among equal norms.
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let mut top: Vec<usize> = order.into_iter().take(k).collect();
    top.sort_unstable();
    top
}

/// True when the `K` largest estimated rows are not exactly the true support.
pub fn is_failure(x_hat: &DMatrix<f64>, truth: &GroundTruth) -> bool {
    top_k_support(x_hat, truth.support.len()) != truth.support
}

pub fn failure_rate(outcomes: &[TrialOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(RecoveryError::EmptySet);
    }
    let failures = outcomes.iter().filter(|o| o.failed).count();
    Ok(failures as f64 / outcomes.len() as f64)
}

pub fn relative_mse(x_hat: &DMatrix<f64>, x_gen: &DMatrix<f64>) -> f64 {
    let denom = x_gen.norm_squared();
    let err = (x_hat - x_gen).norm_squared();
    if denom == 0.0 {
        err
    } else {
        err / denom
    }
}
