//! Seeded generation of synthetic MMV instances: unit-norm Gaussian
//! dictionaries, AR(1) sources with unit-norm rows and noise scaled to an
//! exact SNR.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{RecoveryError, Result};
use crate::problem::MmvProblem;

/// Signal-to-noise ratio of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Noiseless,
    Db(f64),
}

impl std::fmt::Display for Snr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Snr::Noiseless => write!(f, "noiseless"),
            Snr::Db(db) => write!(f, "{db}"),
        }
    }
}

impl std::str::FromStr for Snr {
    type Err = RecoveryError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("noiseless") {
            return Ok(Snr::Noiseless);
        }
        match s.parse::<f64>() {
            Ok(db) if db.is_finite() => Ok(Snr::Db(db)),
            _ => Err(RecoveryError::InvalidSpec(format!(
                "snr must be a number of dB or `noiseless`, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub x_gen: DMatrix<f64>,
    /// Nonzero rows, strictly increasing.
    pub support: Vec<usize>,
    /// AR coefficient of each support row, in support order.
    pub betas: Vec<f64>,
    pub snr: Snr,
}

/// Bijective 64-bit mixer (splitmix64 finalizer).
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `base`. Injective in `index` for a fixed
/// base, so distinct trials never share a generator.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(mix64(base) ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dictionary_from(rng: &mut impl Rng, n: usize, m: usize) -> DMatrix<f64> {
    let mut phi = DMatrix::zeros(n, m);
    for mut col in phi.column_iter_mut() {
        loop {
            for v in col.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let norm = col.norm();
            if norm > 0.0 {
                col /= norm;
                break;
            }
        }
    }
    phi
}

/// `n × m` dictionary whose columns are uniform on the unit sphere.
pub fn gen_dictionary(n: usize, m: usize, seed: u64) -> DMatrix<f64> {
    dictionary_from(&mut rng_for(seed), n, m)
}

fn ar1_from(rng: &mut impl Rng, len: usize, beta: f64) -> DVector<f64> {
    let innovation = (1.0 - beta * beta).sqrt();
    let mut s = DVector::zeros(len);
    if len == 0 {
        return s;
    }
    s[0] = rng.sample(StandardNormal);
    for t in 1..len {
        let e: f64 = rng.sample(StandardNormal);
        s[t] = beta * s[t - 1] + innovation * e;
    }
    s
}

/// Stationary unit-variance AR(1) series of length `len` (not normalized).
pub fn ar1_series(len: usize, beta: f64, seed: u64) -> Result<DVector<f64>> {
    check_beta(beta)?;
    Ok(ar1_from(&mut rng_for(seed), len, beta))
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..1.0).contains(&beta) {
        Ok(())
    } else {
        Err(RecoveryError::InvalidSpec(format!("AR coefficient must lie in [0, 1), got {beta}")))
    }
}

/// One AR(1) source row normalized to unit ℓ2 norm.
pub fn gen_ar1_row(l: usize, beta: f64, seed: u64) -> Result<DVector<f64>> {
    let mut rng = rng_for(seed);
    check_beta(beta)?;
    Ok(unit_ar1_row(&mut rng, l, beta))
}

fn unit_ar1_row(rng: &mut impl Rng, l: usize, beta: f64) -> DVector<f64> {
    loop {
        let s = ar1_from(rng, l, beta);
        let norm = s.norm();
        if norm > 0.0 {
            return s / norm;
        }
    }
}

/// Parameters of one synthetic instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub beta_low: f64,
    pub beta_high: f64,
    pub snr: Snr,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RecoveryError::InvalidSpec(msg));
        if self.n == 0 || self.m == 0 || self.l == 0 {
            return bad(format!("dimensions must be positive: n={}, m={}, l={}", self.n, self.m, self.l));
        }
        if self.k == 0 || self.k > self.m.min(self.n * self.l) {
            return bad(format!(
                "k={} must lie in [1, min(n·l, m)] = [1, {}]",
                self.k,
                self.m.min(self.n * self.l)
            ));
        }
        // [low, high) is half-open, so high = 1 is fine unless the range is a point.
        let ordered = 0.0 <= self.beta_low && self.beta_low <= self.beta_high;
        let below_one = self.beta_high < 1.0 || (self.beta_high == 1.0 && self.beta_low < 1.0);
        if !(ordered && below_one) {
            return bad(format!(
                "need 0 <= beta_low <= beta_high <= 1 with beta < 1, got [{}, {})",
                self.beta_low, self.beta_high
            ));
        }
        Ok(())
    }
}

/// Draws a dictionary, a row-sparse AR(1) source matrix and noise at the
/// requested SNR. The noise is rescaled so the realized SNR
/// `20 log10(‖ΦX‖_F / ‖V‖_F)` equals the request exactly; the problem's
/// noise level is the realized per-entry noise variance.
pub fn gen_instance(spec: &InstanceSpec, seed: u64) -> Result<(MmvProblem, GroundTruth)> {
    spec.validate()?;
    let InstanceSpec { n, m, l, k, beta_low, beta_high, snr } = *spec;

    let phi = gen_dictionary(n, m, derive_seed(seed, 0));

    let mut rng = rng_for(derive_seed(seed, 1));
    let mut support = index::sample(&mut rng, m, k).into_vec();
    support.sort_unstable();
    let mut x_gen = DMatrix::zeros(m, l);
    let mut betas = Vec::with_capacity(k);
    for &row in &support {
        let beta = if beta_high > beta_low {
            loop {
                let b = rng.random_range(beta_low..beta_high);
                if b < 1.0 {
                    break b;
                }
            }
        } else {
            beta_low
        };
        betas.push(beta);
        let src = unit_ar1_row(&mut rng, l, beta);
        x_gen.row_mut(row).copy_from(&src.transpose());
    }

    let clean = &phi * &x_gen;
    let (y, noise_level) = match snr {
        Snr::Noiseless => (clean, 0.0),
        Snr::Db(db) => {
            let mut rng = rng_for(derive_seed(seed, 2));
            let mut v = DMatrix::from_fn(n, l, |_, _| rng.sample::<f64, _>(StandardNormal));
            let target = clean.norm() / 10f64.powf(db / 20.0);
            let scale = target / v.norm();
            v *= scale;
            let level = v.norm_squared() / (n * l) as f64;
            (clean + v, level)
        }
    };
    let problem = MmvProblem::new(phi, y, Some(noise_level))?;
    Ok((problem, GroundTruth { x_gen, support, betas, snr }))
}
