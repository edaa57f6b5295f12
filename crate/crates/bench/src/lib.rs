//! Monte-Carlo failure-rate sweeps over the MMV recovery solvers, with CSV
//! and SVG output. The `mmvbench` binary wraps this library.

pub mod error;
pub mod output;
pub mod spec;
pub mod sweep;

use std::path::Path;

use mmv_core::{matio, MmvProblem};

pub use error::{BenchError, Result};
pub use output::{emit_csv, emit_plot, format_csv, format_plot, parse_csv, CsvTable};
pub use spec::{parse_solver_config, Axis, ExperimentSpec};
pub use sweep::{run_sweep, run_trial, trial_seed, Cell, SweepResult};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| BenchError::io(path, e))
}

/// Reads Φ and Y from headered CSV matrix files.
pub fn load_problem(phi: &Path, y: &Path, noise_level: Option<f64>) -> Result<MmvProblem> {
    let phi = matio::parse_matrix(&read_text(phi)?)?;
    let y = matio::parse_matrix(&read_text(y)?)?;
    Ok(MmvProblem::new(phi, y, noise_level)?)
}
