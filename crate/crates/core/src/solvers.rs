//! Reweighted-ℓ2 solvers for the MMV problem.
//!
//! Every solver alternates the same weighted ridge step
//! `X = W Φᵀ (λI + Φ W Φᵀ)⁻¹ Y` (with `W = diag(1/w_i)`) with a solver
//! specific weight rule:
//!
//! | solver      | weight `w_i`                                        |
//! |-------------|-----------------------------------------------------|
//! | ReSBL-QM    | `[X_i B⁻¹ X_iᵀ / L + Σ_ii]⁻¹` (posterior variance)   |
//! | M-FOCUSS    | `(‖X_i‖²)^{p/2−1}`                                  |
//! | tMFOCUSS    | `(X_i B⁻¹ X_iᵀ)^{p/2−1}`                            |
//! | Iter-L2     | `(‖X_i‖² + ε)^{p/2−1}`, ε shrinking                 |
//! | tIter-L2    | `(X_i B⁻¹ X_iᵀ + ε)^{p/2−1}`, ε shrinking           |
//!
//! The temporally-aware variants learn one shared correlation matrix `B`
//! from the weighted row outer products.

use nalgebra::{DMatrix, DVector};

use crate::error::{RecoveryError, Result};
use crate::linalg::{relative_change, SpdFactor, Whitener};
use crate::problem::{Hyperparameters, LambdaMode, MmvProblem, RecoveryResult, SolverConfig};

/// Lower bound applied by the noise-variance update.
pub const LAMBDA_FLOOR: f64 = 1e-12;

/// Per-row weights of the reweighted-ℓ2 penalty `λ Σ w_i ‖X_i‖²`.
///
/// The step's diagonal scaling is `W = diag(1/w_i)`, so `1/w_i` is the
/// row's prior variance `γ_i`. Pruned rows are removed from the problem and
/// their estimates are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: DVector<f64>,
    pruned: Vec<bool>,
}

impl WeightVector {
    /// All weights one, nothing pruned.
    pub fn uniform(m: usize) -> Self {
        Self {
            w: DVector::from_element(m, 1.0),
            pruned: vec![false; m],
        }
    }

    pub fn new(w: DVector<f64>, pruned: Vec<bool>) -> Result<Self> {
        if w.len() != pruned.len() {
            return Err(RecoveryError::InvalidHyperparameters(format!(
                "{} weights but {} pruning flags",
                w.len(),
                pruned.len()
            )));
        }
        for (i, (&wi, &p)) in w.iter().zip(&pruned).enumerate() {
            if !p && !(wi.is_finite() && wi > 0.0) {
                return Err(RecoveryError::InvalidHyperparameters(format!(
                    "weight {i} must be finite and positive, got {wi}"
                )));
            }
        }
        Ok(Self { w, pruned })
    }

    /// Weights `w_i = 1/γ_i`; rows with `γ_i = 0` are pruned.
    pub fn from_gamma(gamma: &DVector<f64>) -> Result<Self> {
        let pruned: Vec<bool> = gamma.iter().map(|&g| g <= 0.0).collect();
        let w = gamma.map(|g| if g > 0.0 { 1.0 / g } else { f64::INFINITY });
        Self::new(w, pruned)
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.w[i]
    }

    pub fn is_pruned(&self, i: usize) -> bool {
        self.pruned[i]
    }

    /// `γ_i = 1/w_i`, exactly zero for pruned rows.
    pub fn gamma(&self, i: usize) -> f64 {
        if self.pruned[i] {
            0.0
        } else {
            1.0 / self.w[i]
        }
    }

    pub fn gammas(&self) -> DVector<f64> {
        DVector::from_fn(self.len(), |i, _| self.gamma(i))
    }

    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.pruned.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i)
    }

    pub fn active_count(&self) -> usize {
        self.pruned.iter().filter(|&&p| !p).count()
    }
}

/// The factored `N×N` system `λI + Φ_A W_A Φ_Aᵀ` over the active rows `A`.
/// Shared by the ridge step, the posterior-variance weight rule and the
/// noise update so each iteration factors once.
struct ActiveSystem<'a> {
    problem: &'a MmvProblem,
    active: Vec<usize>,
    /// `Φ_A W_A`, N × |A|.
    phi_w: DMatrix<f64>,
    gamma: Vec<f64>,
    lambda: f64,
    factor: Option<SpdFactor>,
}

impl<'a> ActiveSystem<'a> {
    fn new(problem: &'a MmvProblem, weights: &WeightVector, lambda: f64) -> Result<Self> {
        if weights.len() != problem.m() {
            return Err(RecoveryError::InvalidHyperparameters(format!(
                "{} weights for {} dictionary columns",
                weights.len(),
                problem.m()
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(RecoveryError::InvalidHyperparameters(format!(
                "lambda must be finite and nonnegative, got {lambda}"
            )));
        }
        let n = problem.n();
        let active: Vec<usize> = weights.active().collect();
        let gamma: Vec<f64> = active.iter().map(|&i| weights.gamma(i)).collect();
        let phi_a = problem.phi().select_columns(&active);
        let mut phi_w = phi_a.clone();
        for (mut col, &g) in phi_w.column_iter_mut().zip(&gamma) {
            col *= g;
        }
        let factor = if active.is_empty() {
            None
        } else {
            let mut s = &phi_w * phi_a.transpose();
            symmetrize(&mut s);
            for i in 0..n {
                s[(i, i)] += lambda;
            }
            Some(SpdFactor::new(s)?)
        };
        Ok(Self {
            problem,
            active,
            phi_w,
            gamma,
            lambda,
            factor,
        })
    }

    /// `(λI + G)⁻¹ Y`.
    fn solve_y(&self) -> DMatrix<f64> {
        match &self.factor {
            Some(f) => f.solve(self.problem.y()),
            None => self.problem.y() / self.lambda,
        }
    }

    fn x_hat(&self) -> DMatrix<f64> {
        let mut x = DMatrix::zeros(self.problem.m(), self.problem.l());
        if self.active.is_empty() {
            return x;
        }
        let xa = self.phi_w.transpose() * self.solve_y();
        for (r, &i) in self.active.iter().enumerate() {
            x.row_mut(i).copy_from(&xa.row(r));
        }
        x
    }

    /// Diagonal of `W − WΦᵀ(λI + ΦWΦᵀ)⁻¹ΦW` on the active rows, which is
    /// `{(W⁻¹ + ΦᵀΦ/λ)⁻¹}_ii` without forming an M×M inverse.
    fn posterior_variances(&self) -> Vec<f64> {
        let Some(f) = &self.factor else {
            return Vec::new();
        };
        let sinv_phi_w = f.solve(&self.phi_w);
        self.gamma
            .iter()
            .enumerate()
            .map(|(r, &g)| {
                let quad = self.phi_w.column(r).dot(&sinv_phi_w.column(r));
                (g - quad).max(0.0)
            })
            .collect()
    }

    /// `Tr[G (λI + G)⁻¹]` with `G = Φ W Φᵀ`.
    fn fit_trace(&self) -> f64 {
        let Some(f) = &self.factor else {
            return 0.0;
        };
        // Tr[G S⁻¹] = Tr[S⁻¹ Φ_A W_A Φ_Aᵀ] = Σ_r (Φ_A)_rᵀ S⁻¹ (Φ_A W_A)_r
        let sinv_phi_w = f.solve(&self.phi_w);
        self.active
            .iter()
            .enumerate()
            .map(|(r, &i)| self.problem.phi().column(i).dot(&sinv_phi_w.column(r)))
            .sum()
    }

    /// `L · ln|λI + G|`, the log-determinant term of the evidence.
    fn ln_det_term(&self) -> f64 {
        let l = self.problem.l() as f64;
        match &self.factor {
            Some(f) => l * f.ln_determinant(),
            None => l * self.problem.n() as f64 * self.lambda.ln(),
        }
    }
}

fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// One weighted ridge step: the minimizer of
/// `‖Y − ΦX‖_F² + λ Σ_i w_i ‖X_i‖²` over the active rows.
pub fn reweighted_l2_step(
    problem: &MmvProblem,
    weights: &WeightVector,
    lambda: f64,
) -> Result<DMatrix<f64>> {
    Ok(ActiveSystem::new(problem, weights, lambda)?.x_hat())
}

/// Quadratic Mahalanobis form `x B⁻¹ xᵀ`.
pub fn mahalanobis_row(x_row: &[f64], b: &DMatrix<f64>) -> Result<f64> {
    if !b.is_square() || b.nrows() != x_row.len() {
        return Err(RecoveryError::InvalidHyperparameters(format!(
            "row of length {} against {}x{} correlation matrix",
            x_row.len(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(Whitener::new(b)?.quadratic(x_row))
}

/// `B̄ = Σ_active w_i X_iᵀ X_i + ridge·I`, returned as `B̄ / ‖B̄‖_F`.
pub fn update_b(x_hat: &DMatrix<f64>, weights: &WeightVector, ridge: f64) -> Result<DMatrix<f64>> {
    if weights.len() != x_hat.nrows() {
        return Err(RecoveryError::InvalidHyperparameters(format!(
            "{} weights for {} rows",
            weights.len(),
            x_hat.nrows()
        )));
    }
    if weights.active_count() == 0 {
        return Err(RecoveryError::InvalidHyperparameters(
            "correlation update needs at least one active row".into(),
        ));
    }
    if !(ridge.is_finite() && ridge > 0.0) {
        return Err(RecoveryError::InvalidConfig("b_ridge must be positive".into()));
    }
    let l = x_hat.ncols();
    let mut b_bar = DMatrix::<f64>::identity(l, l) * ridge;
    for i in weights.active() {
        let row = x_hat.row(i);
        let w = weights.weight(i);
        for r in 0..l {
            for c in r..l {
                b_bar[(r, c)] += w * row[r] * row[c];
            }
        }
    }
    Ok(normalize_upper(b_bar))
}

/// Mirrors the upper triangle and scales to unit Frobenius norm.
pub(crate) fn normalize_upper(mut b_bar: DMatrix<f64>) -> DMatrix<f64> {
    let l = b_bar.nrows();
    for r in 0..l {
        for c in (r + 1)..l {
            b_bar[(c, r)] = b_bar[(r, c)];
        }
    }
    let norm = b_bar.norm();
    b_bar / norm
}

/// Posterior-variance weight rule of the reweighted SBL solver:
/// `w_i ← [X_i B⁻¹ X_iᵀ / L + {(W⁻¹ + ΦᵀΦ/λ)⁻¹}_ii]⁻¹`.
///
/// Rows whose new `γ_i = 1/w_i` falls below `prune_threshold · max γ` are
/// pruned.
pub fn update_weights_resbl(
    problem: &MmvProblem,
    x_hat: &DMatrix<f64>,
    weights: &WeightVector,
    b: &DMatrix<f64>,
    lambda: f64,
    prune_threshold: f64,
) -> Result<WeightVector> {
    let system = ActiveSystem::new(problem, weights, lambda)?;
    let whitener = Whitener::new(b)?;
    Ok(resbl_weights(&system, x_hat, &whitener, prune_threshold))
}

fn resbl_weights(
    system: &ActiveSystem<'_>,
    x_hat: &DMatrix<f64>,
    whitener: &Whitener,
    prune_threshold: f64,
) -> WeightVector {
    let m = x_hat.nrows();
    let l = x_hat.ncols() as f64;
    let mut gamma = DVector::zeros(m);
    for (&i, sigma) in system.active.iter().zip(system.posterior_variances()) {
        gamma[i] = whitener.quadratic(x_hat.row(i).iter()) / l + sigma;
    }
    prune_relative(&gamma, prune_threshold)
}

/// Builds weights `1/γ_i`, pruning entries below `threshold · max γ`.
fn prune_relative(gamma: &DVector<f64>, threshold: f64) -> WeightVector {
    let cutoff = threshold * gamma.max();
    let pruned: Vec<bool> = gamma.iter().map(|&g| g.is_nan() || g <= 0.0 || g < cutoff).collect();
    let w = DVector::from_fn(gamma.len(), |i, _| {
        if pruned[i] {
            f64::INFINITY
        } else {
            1.0 / gamma[i]
        }
    });
    WeightVector { w, pruned }
}

/// Noise-variance update
/// `λ ← ‖Y − ΦX‖_F² / (NL) + (λ/N) Tr[G (λI + G)⁻¹]`, floored at
/// [`LAMBDA_FLOOR`].
pub fn update_lambda(
    problem: &MmvProblem,
    x_hat: &DMatrix<f64>,
    weights: &WeightVector,
    lambda: f64,
) -> Result<f64> {
    let system = ActiveSystem::new(problem, weights, lambda)?;
    Ok(lambda_rule(&system, x_hat))
}

fn lambda_rule(system: &ActiveSystem<'_>, x_hat: &DMatrix<f64>) -> f64 {
    let p = system.problem;
    let (n, l) = (p.n() as f64, p.l() as f64);
    let resid = residual_sq(p, x_hat);
    let next = resid / (n * l) + system.lambda / n * system.fit_trace();
    next.max(LAMBDA_FLOOR)
}

fn residual_sq(problem: &MmvProblem, x_hat: &DMatrix<f64>) -> f64 {
    (problem.y() - problem.phi() * x_hat).norm_squared()
}

/// Starting noise variance: the problem's known level, otherwise 1% of the
/// mean per-column variance of `Y`.
pub fn initial_lambda(problem: &MmvProblem) -> f64 {
    if let Some(lambda) = problem.noise_level() {
        return lambda;
    }
    let y = problem.y();
    let n = y.nrows() as f64;
    let mean_var = y
        .column_iter()
        .map(|c| {
            let mu = c.sum() / n;
            c.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n
        })
        .sum::<f64>()
        / y.ncols() as f64;
    1e-2 * mean_var
}

/// Snapshot handed to an observer after each ridge step: the estimate and
/// the hyperparameters that produced it.
#[derive(Debug)]
pub struct Iterate<'a> {
    pub iteration: usize,
    pub x: &'a DMatrix<f64>,
    pub weights: &'a WeightVector,
    pub b: &'a DMatrix<f64>,
    pub lambda: f64,
    /// Weight regularizer of the Iter-L2 family; zero elsewhere.
    pub epsilon: f64,
}

pub type Observer<'o> = dyn FnMut(&Iterate<'_>) + 'o;

fn ensure_finite(x: &DMatrix<f64>, iteration: usize) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(RecoveryError::NonFinite { iteration })
    }
}

/// An overflowing objective means row energies overflowed even though the
/// iterate itself is finite.
fn ensure_finite_objective(value: f64, iteration: usize) -> Result<()> {
    if value.is_nan() || value == f64::INFINITY {
        Err(RecoveryError::NonFinite { iteration })
    } else {
        Ok(())
    }
}

/// Reweighted sparse Bayesian learning with a quadratic Mahalanobis penalty
/// (ReSBL-QM).
///
/// Each iteration runs the ridge step, the posterior-variance weight rule,
/// the correlation update and, in learned mode, the noise update. The
/// objective trace holds the MMV evidence
/// `L ln|λI + G| + ‖Y − ΦX‖²/λ + Σ w_i ‖X_i‖²` at each iterate.
pub fn solve_resbl_qm(problem: &MmvProblem, config: &SolverConfig) -> Result<RecoveryResult> {
    solve_resbl_qm_observed(problem, config, &mut |_| {})
}

/// [`solve_resbl_qm`], reporting every iterate to `observer`.
pub fn solve_resbl_qm_observed(
    problem: &MmvProblem,
    config: &SolverConfig,
    observer: &mut Observer<'_>,
) -> Result<RecoveryResult> {
    config.validate()?;
    let (m, l) = (problem.m(), problem.l());
    let mut weights = WeightVector::uniform(m);
    let mut b = DMatrix::<f64>::identity(l, l);
    let mut lambda = initial_lambda(problem);
    let mut x_prev = DMatrix::zeros(m, l);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=config.max_iter {
        iterations = it;
        let lambda_eff = lambda.max(config.min_lambda);
        let system = ActiveSystem::new(problem, &weights, lambda_eff)?;
        let x = system.x_hat();
        ensure_finite(&x, it)?;
        observer(&Iterate { iteration: it, x: &x, weights: &weights, b: &b, lambda: lambda_eff, epsilon: 0.0 });
        let resid = residual_sq(problem, &x);
        let penalty: f64 = weights
            .active()
            .map(|i| weights.weight(i) * x.row(i).norm_squared())
            .sum();
        let objective = system.ln_det_term() + resid / lambda_eff + penalty;
        ensure_finite_objective(objective, it)?;
        trace.push(objective);

        let change = relative_change(&x, &x_prev);
        x_prev = x;
        if change < config.tol {
            converged = true;
            break;
        }
        if it == config.max_iter {
            break;
        }

        let whitener = Whitener::new(&b)?;
        let next = resbl_weights(&system, &x_prev, &whitener, config.prune_threshold);
        if config.learn_b && next.active_count() > 0 {
            b = update_b(&x_prev, &next, config.b_ridge)?;
        }
        let learn_lambda = config.lambda_mode == LambdaMode::Learned
            && config.lambda_learn_iters.is_none_or(|n| it <= n);
        if learn_lambda {
            lambda = lambda_rule(&system, &x_prev);
        }
        weights = next;
    }

    let lambda_final = lambda.max(config.min_lambda);
    Ok(RecoveryResult {
        x_hat: x_prev,
        hyper: Hyperparameters::from_parts_unchecked(weights.gammas(), b, lambda_final),
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// Which penalty family a FOCUSS-style solve uses.
#[derive(Debug, Clone, Copy)]
struct FocussVariant {
    /// Whiten rows by the learned `B` before measuring them.
    temporal: bool,
    /// Run the shrinking-ε schedule (Iter-L2 family).
    smoothed: bool,
}

/// Row energy used by the FOCUSS-family weight rules: `‖X_i‖²`, or the
/// Mahalanobis form when a whitener is given.
fn row_energy(x: &DMatrix<f64>, i: usize, whitener: Option<&Whitener>) -> f64 {
    match whitener {
        Some(wh) => wh.quadratic(x.row(i).iter()),
        None => x.row(i).norm_squared(),
    }
}

/// FOCUSS weight `(u + ε)^{p/2 − 1}`.
pub fn focuss_weight(energy: f64, epsilon: f64, p: f64) -> f64 {
    (energy + epsilon).powf(p / 2.0 - 1.0)
}

/// Penalty whose majorization yields the weight rule above: for `p > 0`
/// `(2/p)(u + ε)^{p/2}`, for `p = 0` `ln(u + ε)`.
fn focuss_penalty(energy: f64, epsilon: f64, p: f64) -> f64 {
    if p == 0.0 {
        (energy + epsilon).ln()
    } else {
        2.0 / p * (energy + epsilon).powf(p / 2.0)
    }
}

fn solve_focuss_family(
    problem: &MmvProblem,
    config: &SolverConfig,
    variant: FocussVariant,
    observer: &mut Observer<'_>,
) -> Result<RecoveryResult> {
    config.validate()?;
    let (m, l) = (problem.m(), problem.l());
    let lambda = initial_lambda(problem).max(config.min_lambda);
    let mut weights = WeightVector::uniform(m);
    let mut b = DMatrix::<f64>::identity(l, l);
    let mut epsilon = if variant.smoothed { config.epsilon_initial } else { 0.0 };
    let mut x_prev = DMatrix::zeros(m, l);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let p = config.p;

    for it in 1..=config.max_iter {
        iterations = it;
        let x = reweighted_l2_step(problem, &weights, lambda)?;
        ensure_finite(&x, it)?;
        observer(&Iterate { iteration: it, x: &x, weights: &weights, b: &b, lambda, epsilon });

        let whitener = if variant.temporal { Some(Whitener::new(&b)?) } else { None };
        let penalty: f64 = weights
            .active()
            .map(|i| focuss_penalty(row_energy(&x, i, whitener.as_ref()), epsilon, p))
            .sum();
        let objective = residual_sq(problem, &x) + lambda * penalty;
        ensure_finite_objective(objective, it)?;
        trace.push(objective);

        let change = relative_change(&x, &x_prev);
        x_prev = x;
        let at_floor = !variant.smoothed || epsilon <= config.epsilon_floor;
        let inner_tol = if variant.smoothed {
            config.tol.max(epsilon.sqrt() / 100.0)
        } else {
            config.tol
        };
        if change < inner_tol {
            if at_floor {
                converged = true;
                break;
            }
            epsilon = (epsilon / config.epsilon_factor).max(config.epsilon_floor);
        }
        if it == config.max_iter {
            break;
        }

        if variant.temporal && config.learn_b && weights.active_count() > 0 {
            b = update_b(&x_prev, &weights, config.b_ridge)?;
        }
        let whitener = if variant.temporal { Some(Whitener::new(&b)?) } else { None };
        weights = focuss_weights(&x_prev, &weights, whitener.as_ref(), epsilon, config, variant);
    }

    let mut gamma = weights.gammas();
    // Rows the final step left at zero carry no variance.
    for i in 0..m {
        if x_prev.row(i).iter().all(|&v| v == 0.0) {
            gamma[i] = 0.0;
        }
    }
    Ok(RecoveryResult {
        x_hat: x_prev,
        hyper: Hyperparameters::from_parts_unchecked(gamma, b, lambda),
        iterations,
        converged,
        objective_trace: trace,
    })
}

fn focuss_weights(
    x: &DMatrix<f64>,
    previous: &WeightVector,
    whitener: Option<&Whitener>,
    epsilon: f64,
    config: &SolverConfig,
    variant: FocussVariant,
) -> WeightVector {
    let m = x.nrows();
    let p = config.p;
    let energy = DVector::from_fn(m, |i, _| {
        if previous.is_pruned(i) {
            0.0
        } else {
            row_energy(x, i, whitener)
        }
    });
    // ε keeps weights bounded; prune only once it has reached its floor.
    let may_prune = p < 2.0 && (!variant.smoothed || epsilon <= config.epsilon_floor);
    let cutoff = config.prune_threshold * energy.max();
    let mut w = DVector::from_element(m, f64::INFINITY);
    let mut pruned = vec![true; m];
    for i in 0..m {
        if previous.is_pruned(i) {
            continue;
        }
        let u = energy[i];
        if may_prune && (u < cutoff || u + epsilon == 0.0) {
            continue;
        }
        let wi = focuss_weight(u, epsilon, p);
        if !(wi.is_finite() && wi > 0.0) {
            continue;
        }
        w[i] = wi;
        pruned[i] = false;
    }
    WeightVector { w, pruned }
}

/// Regularized M-FOCUSS: weights `(‖X_i‖²)^{p/2−1}`.
///
/// The objective trace holds `‖Y − ΦX‖² + λ Σ (2/p)(‖X_i‖²)^{p/2}` over the
/// active rows, the function each step majorizes.
pub fn solve_mfocuss(problem: &MmvProblem, config: &SolverConfig) -> Result<RecoveryResult> {
    solve_mfocuss_observed(problem, config, &mut |_| {})
}

pub fn solve_mfocuss_observed(
    problem: &MmvProblem,
    config: &SolverConfig,
    observer: &mut Observer<'_>,
) -> Result<RecoveryResult> {
    solve_focuss_family(problem, config, FocussVariant { temporal: false, smoothed: false }, observer)
}

/// M-FOCUSS with rows measured in the Mahalanobis metric of the learned `B`.
pub fn solve_tmfocuss(problem: &MmvProblem, config: &SolverConfig) -> Result<RecoveryResult> {
    solve_tmfocuss_observed(problem, config, &mut |_| {})
}

pub fn solve_tmfocuss_observed(
    problem: &MmvProblem,
    config: &SolverConfig,
    observer: &mut Observer<'_>,
) -> Result<RecoveryResult> {
    solve_focuss_family(problem, config, FocussVariant { temporal: true, smoothed: false }, observer)
}

/// ε-regularized reweighted ℓ2 (Iter-L2) with a shrinking-ε schedule.
pub fn solve_iter_l2(problem: &MmvProblem, config: &SolverConfig) -> Result<RecoveryResult> {
    solve_iter_l2_observed(problem, config, &mut |_| {})
}

pub fn solve_iter_l2_observed(
    problem: &MmvProblem,
    config: &SolverConfig,
    observer: &mut Observer<'_>,
) -> Result<RecoveryResult> {
    solve_focuss_family(problem, config, FocussVariant { temporal: false, smoothed: true }, observer)
}

/// Iter-L2 with rows measured in the Mahalanobis metric of the learned `B`.
pub fn solve_titer_l2(problem: &MmvProblem, config: &SolverConfig) -> Result<RecoveryResult> {
    solve_titer_l2_observed(problem, config, &mut |_| {})
}

pub fn solve_titer_l2_observed(
    problem: &MmvProblem,
    config: &SolverConfig,
    observer: &mut Observer<'_>,
) -> Result<RecoveryResult> {
    solve_focuss_family(problem, config, FocussVariant { temporal: true, smoothed: true }, observer)
}
