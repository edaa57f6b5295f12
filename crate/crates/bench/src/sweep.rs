//! Seeded Monte-Carlo trials and their aggregation.

use std::time::{Duration, Instant};

use mmv_core::metrics::{is_failure, relative_mse, TrialOutcome};
use mmv_core::synth::{derive_seed, gen_instance};
use rayon::prelude::*;

use crate::error::{BenchError, Result};
use crate::spec::{Axis, ExperimentSpec};

/// Seed of trial `trial`. It does not depend on the axis value, so every
/// point of a sweep reuses the same random streams.
pub fn trial_seed(spec: &ExperimentSpec, trial: usize) -> u64 {
    derive_seed(spec.base_seed, trial as u64)
}

/// Runs every requested algorithm on one generated instance. Solver errors
/// become failed trials.
pub fn run_trial(spec: &ExperimentSpec, axis_value: f64, trial: usize) -> Result<Vec<TrialOutcome>> {
    let instance = spec.instance_spec(axis_value)?;
    let (problem, truth) = gen_instance(&instance, trial_seed(spec, trial))?;
    let outcomes = spec
        .algorithms
        .iter()
        .map(|&alg| {
            let start = Instant::now();
            let result = alg.solve(&problem, &spec.solver);
            let runtime = if spec.timing { start.elapsed() } else { Duration::ZERO };
            match result {
                Ok(r) => TrialOutcome {
                    algorithm: alg.name().to_string(),
                    failed: is_failure(&r.x_hat, &truth),
                    iterations: r.iterations,
                    runtime,
                    mse: relative_mse(&r.x_hat, &truth.x_gen),
                },
                Err(e) => {
                    eprintln!("warning: {alg} failed at {} = {axis_value}, trial {trial}: {e}", spec.axis);
                    TrialOutcome {
                        algorithm: alg.name().to_string(),
                        failed: true,
                        iterations: 0,
                        runtime,
                        mse: 1.0,
                    }
                }
            }
        })
        .collect();
    Ok(outcomes)
}

/// Aggregate over all trials of one (axis value, algorithm) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub axis_value: f64,
    pub algorithm: String,
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub mean_iterations: f64,
    pub mean_runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: ExperimentSpec,
    pub axis: Axis,
    pub base_seed: u64,
    /// Ordered by axis value, then by the spec's algorithm order.
    pub cells: Vec<Cell>,
}

impl SweepResult {
    pub fn cell(&self, axis_value: f64, algorithm: &str) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.axis_value == axis_value && c.algorithm == algorithm)
    }

    /// Failure rates of one algorithm in axis order.
    pub fn curve(&self, algorithm: &str) -> Vec<(f64, f64)> {
        self.cells
            .iter()
            .filter(|c| c.algorithm == algorithm)
            .map(|c| (c.axis_value, c.failure_rate))
            .collect()
    }
}

fn aggregate(axis_value: f64, algorithm: &str, outcomes: &[&TrialOutcome]) -> Cell {
    let trials = outcomes.len();
    let failures = outcomes.iter().filter(|o| o.failed).count();
    let iterations: usize = outcomes.iter().map(|o| o.iterations).sum();
    let runtime: f64 = outcomes.iter().map(|o| o.runtime.as_secs_f64() * 1e3).sum();
    Cell {
        axis_value,
        algorithm: algorithm.to_string(),
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
        mean_iterations: iterations as f64 / trials as f64,
        mean_runtime_ms: runtime / trials as f64,
    }
}

/// Runs all trials of the sweep on a pool of `threads` workers (0 picks
/// the machine's parallelism). Results are gathered in (axis, trial) order,
/// so the outcome does not depend on the worker count.
pub fn run_sweep(spec: &ExperimentSpec, threads: usize) -> Result<SweepResult> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| BenchError::InvalidSpec(format!("cannot start worker pool: {e}")))?;
    let jobs: Vec<(f64, usize)> = spec
        .values
        .iter()
        .flat_map(|&v| (0..spec.trials).map(move |t| (v, t)))
        .collect();
    let outcomes: Vec<Vec<TrialOutcome>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(v, t)| run_trial(spec, v, t))
            .collect::<Result<_>>()
    })?;

    let mut cells = Vec::with_capacity(spec.values.len() * spec.algorithms.len());
    for (vi, &v) in spec.values.iter().enumerate() {
        let block = &outcomes[vi * spec.trials..(vi + 1) * spec.trials];
        for (ai, alg) in spec.algorithms.iter().enumerate() {
            let column: Vec<&TrialOutcome> = block.iter().map(|trial| &trial[ai]).collect();
            cells.push(aggregate(v, alg.name(), &column));
        }
    }
    Ok(SweepResult { spec: spec.clone(), axis: spec.axis, base_seed: spec.base_seed, cells })
}
