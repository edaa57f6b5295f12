//! Exact block-space sparse Bayesian learning.
//!
//! The MMV model is vectorized as `y = D x + v` with `y = vec(Yᵀ)`,
//! `D = Φ ⊗ I_L` and `x = vec(Xᵀ)`, so block `i` of `x` (entries
//! `iL .. (i+1)L`) is row `i` of `X`. The prior covariance is
//! `Σ₀ = Γ ⊗ B`. Everything here is dense `NL × NL` / `ML × ML` algebra and
//! meant for verifying the fast solvers, not for benchmarks.

use nalgebra::{DMatrix, DVector};

use crate::error::{RecoveryError, Result};
use crate::linalg::{relative_change, SpdFactor, Whitener};
use crate::problem::{Hyperparameters, MmvProblem, RecoveryResult, SolverConfig};
use crate::solvers::{initial_lambda, normalize_upper};

#[derive(Debug, Clone)]
pub struct BlockModel {
    /// `Φ ⊗ I_L`, NL × ML.
    pub d: DMatrix<f64>,
    /// `Γ ⊗ B`, ML × ML.
    pub sigma0: DMatrix<f64>,
    /// `vec(Yᵀ)`.
    pub y_vec: DVector<f64>,
    pub gamma: DVector<f64>,
    pub b: DMatrix<f64>,
    l: usize,
}

impl BlockModel {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.gamma.len()
    }

    /// Columns `iL .. (i+1)L` of `D`.
    pub fn sub_dictionary(&self, i: usize) -> DMatrix<f64> {
        self.d.columns(i * self.l, self.l).into_owned()
    }

    fn system(&self, lambda: f64) -> Result<SpdFactor> {
        let mut c = &self.d * &self.sigma0 * self.d.transpose();
        for i in 0..c.nrows() {
            c[(i, i)] += lambda;
        }
        SpdFactor::new(c)
    }
}

/// `vec(Xᵀ)`: the rows of `x` concatenated.
pub fn vec_rows(x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(x.len(), x.row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()))
}

/// Inverse of [`vec_rows`].
pub fn unvec_rows(v: &DVector<f64>, rows: usize, cols: usize) -> DMatrix<f64> {
    assert_eq!(v.len(), rows * cols, "vector length does not match {rows}x{cols}");
    DMatrix::from_row_slice(rows, cols, v.as_slice())
}

pub fn build_block_model(problem: &MmvProblem, hyper: &Hyperparameters) -> Result<BlockModel> {
    let (m, l) = (problem.m(), problem.l());
    if hyper.gamma().len() != m || hyper.b().nrows() != l {
        return Err(RecoveryError::InvalidHyperparameters(format!(
            "hyperparameters sized for M={}, L={} but problem has M={m}, L={l}",
            hyper.gamma().len(),
            hyper.b().nrows()
        )));
    }
    let d = problem.phi().kronecker(&DMatrix::<f64>::identity(l, l));
    let gamma_mat = DMatrix::from_diagonal(hyper.gamma());
    let sigma0 = gamma_mat.kronecker(hyper.b());
    Ok(BlockModel {
        d,
        sigma0,
        y_vec: vec_rows(problem.y()),
        gamma: hyper.gamma().clone(),
        b: hyper.b().clone(),
        l,
    })
}

/// Posterior mean `x = Σ₀ Dᵀ (λI + D Σ₀ Dᵀ)⁻¹ y`.
pub fn exact_x_update(model: &BlockModel, lambda: f64) -> Result<DVector<f64>> {
    let factor = model.system(lambda)?;
    Ok(&model.sigma0 * model.d.transpose() * factor.solve_vec(&model.y_vec))
}

/// `z_i = Lγ_i − γ_i² Tr[B D_iᵀ (λI + D Σ₀ Dᵀ)⁻¹ D_i]`, clamped at zero.
pub fn exact_z_update(model: &BlockModel, lambda: f64) -> Result<DVector<f64>> {
    let factor = model.system(lambda)?;
    let l = model.l as f64;
    let mut z = DVector::zeros(model.m());
    for i in 0..model.m() {
        let g = model.gamma[i];
        if g == 0.0 {
            continue;
        }
        let di = model.sub_dictionary(i);
        let inner = di.transpose() * factor.solve(&di);
        let tr = (&model.b * inner).trace();
        z[i] = (l * g - g * g * tr).max(0.0);
    }
    Ok(z)
}

/// `γ_i = (x_iᵀ B⁻¹ x_i + z_i) / L`.
pub fn exact_gamma_update(x_vec: &DVector<f64>, z: &DVector<f64>, b: &DMatrix<f64>) -> Result<DVector<f64>> {
    let l = b.nrows();
    if x_vec.len() != z.len() * l {
        return Err(RecoveryError::InvalidHyperparameters(format!(
            "block vector of length {} does not hold {} blocks of {l}",
            x_vec.len(),
            z.len()
        )));
    }
    let whitener = Whitener::new(b)?;
    Ok(DVector::from_fn(z.len(), |i, _| {
        let block = x_vec.rows(i * l, l);
        ((whitener.quadratic(block.iter()) + z[i]) / l as f64).max(0.0)
    }))
}

/// `B̄ = Σ_{γ_i > 0} x_i x_iᵀ / γ_i + ridge·I`, returned as `B̄ / ‖B̄‖_F`.
pub fn exact_b_update(x_vec: &DVector<f64>, gamma: &DVector<f64>, ridge: f64) -> Result<DMatrix<f64>> {
    let m = gamma.len();
    if m == 0 || !x_vec.len().is_multiple_of(m) {
        return Err(RecoveryError::InvalidHyperparameters(format!(
            "block vector of length {} does not split into {m} blocks",
            x_vec.len()
        )));
    }
    if !gamma.iter().any(|&g| g > 0.0) {
        return Err(RecoveryError::InvalidHyperparameters(
            "correlation update needs at least one active block".into(),
        ));
    }
    if !(ridge.is_finite() && ridge > 0.0) {
        return Err(RecoveryError::InvalidConfig("b_ridge must be positive".into()));
    }
    let l = x_vec.len() / m;
    let mut b_bar = DMatrix::<f64>::identity(l, l) * ridge;
    for (i, &g) in gamma.iter().enumerate() {
        if g <= 0.0 {
            continue;
        }
        let block = x_vec.rows(i * l, l);
        let w = 1.0 / g;
        for r in 0..l {
            for c in r..l {
                b_bar[(r, c)] += w * block[r] * block[c];
            }
        }
    }
    Ok(normalize_upper(b_bar))
}

/// `ln|λI + D Σ₀ Dᵀ| + ‖y − D x‖² / λ + xᵀ Σ₀⁻¹ x`, the last term over
/// active blocks only.
pub fn block_objective(model: &BlockModel, x_vec: &DVector<f64>, lambda: f64) -> Result<f64> {
    let factor = model.system(lambda)?;
    let resid = (&model.y_vec - &model.d * x_vec).norm_squared();
    let whitener = Whitener::new(&model.b)?;
    let l = model.l;
    let prior: f64 = (0..model.m())
        .filter(|&i| model.gamma[i] > 0.0)
        .map(|i| whitener.quadratic(x_vec.rows(i * l, l).iter()) / model.gamma[i])
        .sum();
    Ok(factor.ln_determinant() + resid / lambda + prior)
}

/// Coordinate descent over `x`, `z`, `γ` and `B` in block space.
pub fn solve_exact(problem: &MmvProblem, config: &SolverConfig) -> Result<RecoveryResult> {
    config.validate()?;
    let (m, l) = (problem.m(), problem.l());
    let lambda = initial_lambda(problem).max(config.min_lambda);
    let mut hyper = Hyperparameters::initial(m, l, lambda);
    let mut x_prev = DMatrix::zeros(m, l);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=config.max_iter {
        iterations = it;
        let model = build_block_model(problem, &hyper)?;
        let x_vec = exact_x_update(&model, lambda)?;
        let x = unvec_rows(&x_vec, m, l);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(RecoveryError::NonFinite { iteration: it });
        }
        trace.push(block_objective(&model, &x_vec, lambda)?);

        let change = relative_change(&x, &x_prev);
        x_prev = x;
        if change < config.tol {
            converged = true;
            break;
        }
        if it == config.max_iter {
            break;
        }

        let z = exact_z_update(&model, lambda)?;
        let mut gamma = exact_gamma_update(&x_vec, &z, &model.b)?;
        let cutoff = config.prune_threshold * gamma.max();
        gamma.apply(|g| {
            if *g < cutoff {
                *g = 0.0
            }
        });
        let b = if config.learn_b && gamma.iter().any(|&g| g > 0.0) {
            exact_b_update(&x_vec, &gamma, config.b_ridge)?
        } else {
            model.b.clone()
        };
        hyper = Hyperparameters::from_parts_unchecked(gamma, b, lambda);
    }

    Ok(RecoveryResult {
        x_hat: x_prev,
        hyper,
        iterations,
        converged,
        objective_trace: trace,
    })
}
