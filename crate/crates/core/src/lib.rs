//! Sparse recovery for the multiple-measurement-vector model
//! `Y = Φ X + V` with temporally correlated sources.
//!
//! The solvers share one reweighted-ℓ2 step and differ in their weight
//! rules; [`block_oracle`] holds the exact block-space algorithm used to
//! check them, and [`synth`] / [`metrics`] implement the Monte-Carlo
//! failure-rate protocol.

pub mod block_oracle;
pub mod error;
mod linalg;
pub mod matio;
pub mod metrics;
pub mod problem;
pub mod solvers;
pub mod synth;

use std::fmt;
use std::str::FromStr;

pub use error::{RecoveryError, Result};
pub use problem::{Hyperparameters, LambdaMode, MmvProblem, RecoveryResult, SolverConfig};

/// Every recovery algorithm the crate implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    ResblQm,
    Mfocuss,
    Tmfocuss,
    IterL2,
    TiterL2,
    ExactOracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::ResblQm,
        Algorithm::Mfocuss,
        Algorithm::Tmfocuss,
        Algorithm::IterL2,
        Algorithm::TiterL2,
        Algorithm::ExactOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ResblQm => "resbl_qm",
            Algorithm::Mfocuss => "mfocuss",
            Algorithm::Tmfocuss => "tmfocuss",
            Algorithm::IterL2 => "iter_l2",
            Algorithm::TiterL2 => "titer_l2",
            Algorithm::ExactOracle => "exact_oracle",
        }
    }

    pub fn solve(self, problem: &MmvProblem, config: &SolverConfig) -> Result<RecoveryResult> {
        match self {
            Algorithm::ResblQm => solvers::solve_resbl_qm(problem, config),
            Algorithm::Mfocuss => solvers::solve_mfocuss(problem, config),
            Algorithm::Tmfocuss => solvers::solve_tmfocuss(problem, config),
            Algorithm::IterL2 => solvers::solve_iter_l2(problem, config),
            Algorithm::TiterL2 => solvers::solve_titer_l2(problem, config),
            Algorithm::ExactOracle => block_oracle::solve_exact(problem, config),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = RecoveryError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| RecoveryError::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}
