//! Shared data types: the measurement model, hyperparameters, solver
//! configuration and recovery results.

use nalgebra::{DMatrix, DVector};

use crate::error::{RecoveryError, Result};

/// Tolerance on the unit Frobenius norm of a learned correlation matrix.
pub const B_NORM_TOL: f64 = 1e-12;

/// A multiple-measurement-vector problem `Y = Φ X + V`.
#[derive(Debug, Clone, PartialEq)]
pub struct MmvProblem {
    phi: DMatrix<f64>,
    y: DMatrix<f64>,
    noise_level: Option<f64>,
}

impl MmvProblem {
    pub fn new(phi: DMatrix<f64>, y: DMatrix<f64>, noise_level: Option<f64>) -> Result<Self> {
        let (n, m) = phi.shape();
        if n == 0 || m == 0 || y.ncols() == 0 {
            return Err(RecoveryError::InvalidProblem(format!(
                "empty dimensions: phi {}x{}, y {}x{}",
                n,
                m,
                y.nrows(),
                y.ncols()
            )));
        }
        if y.nrows() != n {
            return Err(RecoveryError::InvalidProblem(format!(
                "phi has {} rows but y has {}",
                n,
                y.nrows()
            )));
        }
        if phi.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(RecoveryError::InvalidProblem("non-finite entry".into()));
        }
        if let Some(j) = (0..m).find(|&j| phi.column(j).norm() == 0.0) {
            return Err(RecoveryError::InvalidProblem(format!(
                "dictionary column {j} has zero norm"
            )));
        }
        if let Some(lambda) = noise_level {
            if !(lambda.is_finite() && lambda >= 0.0) {
                return Err(RecoveryError::InvalidProblem(format!(
                    "noise level must be finite and nonnegative, got {lambda}"
                )));
            }
        }
        Ok(Self { phi, y, noise_level })
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn noise_level(&self) -> Option<f64> {
        self.noise_level
    }

    /// Number of measurements per snapshot (N).
    pub fn n(&self) -> usize {
        self.phi.nrows()
    }

    /// Number of candidate sources (M).
    pub fn m(&self) -> usize {
        self.phi.ncols()
    }

    /// Number of snapshots (L).
    pub fn l(&self) -> usize {
        self.y.ncols()
    }
}

/// Prior variances `γ`, the shared temporal correlation matrix `B` and the
/// noise variance `λ`.
///
/// `B` is either the identity (the uninformative starting point, also used
/// when correlation learning is disabled) or a learned matrix normalized to
/// unit Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparameters {
    gamma: DVector<f64>,
    b: DMatrix<f64>,
    lambda: f64,
}

impl Hyperparameters {
    pub fn new(gamma: DVector<f64>, b: DMatrix<f64>, lambda: f64) -> Result<Self> {
        let bad = |msg: String| Err(RecoveryError::InvalidHyperparameters(msg));
        if let Some(g) = gamma.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
            return bad(format!("gamma entries must be finite and nonnegative, got {g}"));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return bad(format!("lambda must be finite and nonnegative, got {lambda}"));
        }
        if !b.is_square() || b.nrows() == 0 {
            return bad(format!("b must be square, got {}x{}", b.nrows(), b.ncols()));
        }
        if b != b.transpose() {
            return bad("b is not symmetric".into());
        }
        if b.clone().cholesky().is_none() {
            return bad("b is not positive definite".into());
        }
        let identity = DMatrix::identity(b.nrows(), b.ncols());
        if b != identity && (b.norm() - 1.0).abs() > B_NORM_TOL {
            return bad(format!("b has Frobenius norm {}, expected 1", b.norm()));
        }
        Ok(Self { gamma, b, lambda })
    }

    /// `γ = 1`, `B = I`.
    pub fn initial(m: usize, l: usize, lambda: f64) -> Self {
        Self {
            gamma: DVector::from_element(m, 1.0),
            b: DMatrix::identity(l, l),
            lambda,
        }
    }

    pub(crate) fn from_parts_unchecked(gamma: DVector<f64>, b: DMatrix<f64>, lambda: f64) -> Self {
        Self { gamma, b, lambda }
    }

    pub fn gamma(&self) -> &DVector<f64> {
        &self.gamma
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Output of every solver.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub x_hat: DMatrix<f64>,
    pub hyper: Hyperparameters,
    pub iterations: usize,
    pub converged: bool,
    /// Solver-specific surrogate objective, one value per iteration.
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    /// `λ` stays at its initial value.
    Fixed,
    /// `λ` follows the evidence-maximizing update each iteration.
    Learned,
}

impl std::str::FromStr for LambdaMode {
    type Err = RecoveryError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Self::Fixed),
            "learned" => Ok(Self::Learned),
            other => Err(RecoveryError::InvalidConfig(format!(
                "lambda_mode must be `fixed` or `learned`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Relative Frobenius change of `X̂` below which an iteration is converged.
    pub tol: f64,
    /// Rows whose prior variance falls below this fraction of the largest
    /// one are pruned.
    pub prune_threshold: f64,
    /// Exponent of the FOCUSS-family penalty.
    pub p: f64,
    pub epsilon_initial: f64,
    pub epsilon_floor: f64,
    pub epsilon_factor: f64,
    /// Ridge added to the correlation estimate before normalization.
    pub b_ridge: f64,
    pub lambda_mode: LambdaMode,
    /// In learned mode, stop updating `λ` after this many iterations.
    pub lambda_learn_iters: Option<usize>,
    /// Smallest `λ` a solver iterates with; keeps noiseless problems solvable
    /// once fewer than N rows remain active.
    pub min_lambda: f64,
    /// Learn the temporal correlation matrix. When false, `B` stays `I`.
    pub learn_b: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 500,
            tol: 1e-6,
            prune_threshold: 1e-10,
            p: 0.8,
            epsilon_initial: 1.0,
            epsilon_floor: 1e-8,
            epsilon_factor: 10.0,
            b_ridge: 1e-4,
            lambda_mode: LambdaMode::Fixed,
            lambda_learn_iters: None,
            min_lambda: 1e-10,
            learn_b: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(RecoveryError::InvalidConfig(msg.into()));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.max_iter < 1 {
            return bad("max_iter must be at least 1");
        }
        if !positive(self.tol) {
            return bad("tol must be positive");
        }
        if !positive(self.prune_threshold) {
            return bad("prune_threshold must be positive");
        }
        if !(0.0..=2.0).contains(&self.p) {
            return bad("p must lie in [0, 2]");
        }
        if !positive(self.epsilon_initial) || !positive(self.epsilon_floor) {
            return bad("epsilon schedule values must be positive");
        }
        if self.epsilon_floor >= self.epsilon_initial {
            return bad("epsilon_floor must be below epsilon_initial");
        }
        if !(self.epsilon_factor.is_finite() && self.epsilon_factor > 1.0) {
            return bad("epsilon_factor must exceed 1");
        }
        if !positive(self.b_ridge) {
            return bad("b_ridge must be positive");
        }
        if !(self.min_lambda.is_finite() && self.min_lambda >= 0.0) {
            return bad("min_lambda must be nonnegative");
        }
        Ok(())
    }
}
