//! Experiment specifications in a flat `key = value` text format.
//!
//! ```text
//! # Failure rate against K
//! n = 25
//! m = 100
//! l = 3
//! snr = 25            # dB, or `noiseless`
//! beta_low = 0.5
//! beta_high = 1
//! axis = k            # or `m_over_n` (then `k` is fixed and M = round(value * n))
//! values = 10, 12, 14, 16
//! algorithms = resbl_qm, mfocuss, tmfocuss, iter_l2, titer_l2
//! trials = 100
//! base_seed = 1
//! solver.max_iter = 500
//! ```
//!
//! Optional keys: `trials` (100), `base_seed` (0), `timing` (false; when
//! off the runtime column is written as 0 so output is reproducible),
//! `csv` and `plot` (output file names) and any `solver.<field>` of
//! [`SolverConfig`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use mmv_core::synth::{InstanceSpec, Snr};
use mmv_core::{Algorithm, LambdaMode, SolverConfig};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    K,
    MOverN,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::K => "k",
            Axis::MOverN => "m_over_n",
        }
    }

    /// Axis label used in plots.
    pub fn label(self) -> &'static str {
        match self {
            Axis::K => "K",
            Axis::MOverN => "M/N",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" => Ok(Axis::K),
            "m_over_n" => Ok(Axis::MOverN),
            _ => Err(invalid(format!("unknown axis `{s}` (expected k or m_over_n)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub n: usize,
    /// Fixed dictionary width; unused on the `m_over_n` axis.
    pub m: Option<usize>,
    pub l: usize,
    /// Fixed sparsity; unused on the `k` axis.
    pub k: Option<usize>,
    pub snr: Snr,
    pub beta_low: f64,
    pub beta_high: f64,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub base_seed: u64,
    pub solver: SolverConfig,
    pub timing: bool,
    pub csv_name: String,
    pub plot_name: String,
}

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_CSV: &str = "failure_rates.csv";
pub const DEFAULT_PLOT: &str = "failure_rates.svg";

fn invalid(msg: impl Into<String>) -> BenchError {
    BenchError::InvalidSpec(msg.into())
}

/// Splits `key = value` lines, dropping comments and blank lines.
/// Duplicate keys are rejected.
fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("line {}: expected `key = value`", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(invalid(format!("line {}: empty key or value", lineno + 1)));
        }
        if pairs.insert(key.to_string(), value.to_string()).is_some() {
            return Err(invalid(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(pairs)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| invalid(format!("`{key}`: cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(invalid(format!("`{key}`: expected true or false, got `{value}`"))),
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value.split(',').map(|v| parse_value(key, v.trim())).collect()
}

/// Applies one `solver.<field>` override. `field` excludes the prefix.
fn set_solver_field(config: &mut SolverConfig, field: &str, value: &str) -> Result<()> {
    let key = format!("solver.{field}");
    match field {
        "max_iter" => config.max_iter = parse_value(&key, value)?,
        "tol" => config.tol = parse_value(&key, value)?,
        "prune_threshold" => config.prune_threshold = parse_value(&key, value)?,
        "p" => config.p = parse_value(&key, value)?,
        "epsilon_initial" => config.epsilon_initial = parse_value(&key, value)?,
        "epsilon_floor" => config.epsilon_floor = parse_value(&key, value)?,
        "epsilon_factor" => config.epsilon_factor = parse_value(&key, value)?,
        "b_ridge" => config.b_ridge = parse_value(&key, value)?,
        "min_lambda" => config.min_lambda = parse_value(&key, value)?,
        "learn_b" => config.learn_b = parse_bool(&key, value)?,
        "lambda_mode" => {
            config.lambda_mode = value.parse::<LambdaMode>().map_err(|e| invalid(format!("`{key}`: {e}")))?
        }
        "lambda_learn_iters" => {
            config.lambda_learn_iters = if value == "none" { None } else { Some(parse_value(&key, value)?) }
        }
        _ => return Err(invalid(format!("unknown key `{key}`"))),
    }
    Ok(())
}

/// Parses a file holding only `solver.<field>` keys.
pub fn parse_solver_config(text: &str) -> Result<SolverConfig> {
    let mut config = SolverConfig::default();
    for (key, value) in parse_pairs(text)? {
        let field = key
            .strip_prefix("solver.")
            .ok_or_else(|| invalid(format!("unknown key `{key}` (solver keys start with `solver.`)")))?;
        set_solver_field(&mut config, field, &value)?;
    }
    config.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(config)
}

fn render_solver(out: &mut String, c: &SolverConfig) {
    let lambda_mode = match c.lambda_mode {
        LambdaMode::Fixed => "fixed",
        LambdaMode::Learned => "learned",
    };
    let learn_iters = c.lambda_learn_iters.map_or("none".to_string(), |n| n.to_string());
    let fields: [(&str, String); 12] = [
        ("max_iter", c.max_iter.to_string()),
        ("tol", c.tol.to_string()),
        ("prune_threshold", c.prune_threshold.to_string()),
        ("p", c.p.to_string()),
        ("epsilon_initial", c.epsilon_initial.to_string()),
        ("epsilon_floor", c.epsilon_floor.to_string()),
        ("epsilon_factor", c.epsilon_factor.to_string()),
        ("b_ridge", c.b_ridge.to_string()),
        ("lambda_mode", lambda_mode.to_string()),
        ("lambda_learn_iters", learn_iters),
        ("min_lambda", c.min_lambda.to_string()),
        ("learn_b", c.learn_b.to_string()),
    ];
    for (k, v) in fields {
        writeln!(out, "solver.{k} = {v}").unwrap();
    }
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = parse_pairs(text)?;
        let mut take = |key: &str| pairs.remove(key);
        let require = |v: Option<String>, key: &str| v.ok_or_else(|| invalid(format!("missing key `{key}`")));

        let n = parse_value("n", &require(take("n"), "n")?)?;
        let l = parse_value("l", &require(take("l"), "l")?)?;
        let m = take("m").map(|v| parse_value("m", &v)).transpose()?;
        let k = take("k").map(|v| parse_value("k", &v)).transpose()?;
        let snr = require(take("snr"), "snr")?
            .parse::<Snr>()
            .map_err(|e| invalid(format!("`snr`: {e}")))?;
        let beta_low = parse_value("beta_low", &require(take("beta_low"), "beta_low")?)?;
        let beta_high = parse_value("beta_high", &require(take("beta_high"), "beta_high")?)?;
        let axis = require(take("axis"), "axis")?.parse()?;
        let values = parse_list("values", &require(take("values"), "values")?)?;
        let algorithms = parse_list::<String>("algorithms", &require(take("algorithms"), "algorithms")?)?
            .iter()
            .map(|a| a.parse::<Algorithm>().map_err(|e| invalid(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let trials = take("trials").map_or(Ok(DEFAULT_TRIALS), |v| parse_value("trials", &v))?;
        let base_seed = take("base_seed").map_or(Ok(0), |v| parse_value("base_seed", &v))?;
        let timing = take("timing").map_or(Ok(false), |v| parse_bool("timing", &v))?;
        let csv_name = take("csv").unwrap_or_else(|| DEFAULT_CSV.into());
        let plot_name = take("plot").unwrap_or_else(|| DEFAULT_PLOT.into());

        let mut solver = SolverConfig::default();
        for (key, value) in pairs {
            match key.strip_prefix("solver.") {
                Some(field) => set_solver_field(&mut solver, field, &value)?,
                None => return Err(invalid(format!("unknown key `{key}`"))),
            }
        }

        let spec = ExperimentSpec {
            n,
            m,
            l,
            k,
            snr,
            beta_low,
            beta_high,
            axis,
            values,
            algorithms,
            trials,
            base_seed,
            solver,
            timing,
            csv_name,
            plot_name,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.values.is_empty() {
            return Err(invalid("values must not be empty"));
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("values must be strictly increasing"));
        }
        if self.algorithms.is_empty() {
            return Err(invalid("algorithms must not be empty"));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return Err(invalid(format!("algorithm `{a}` listed twice")));
            }
        }
        match self.axis {
            Axis::K if self.m.is_none() => return Err(invalid("axis k needs a fixed `m`")),
            Axis::MOverN if self.k.is_none() => return Err(invalid("axis m_over_n needs a fixed `k`")),
            _ => {}
        }
        for name in [&self.csv_name, &self.plot_name] {
            if name.contains(['/', '\\']) || name == "." || name == ".." {
                return Err(invalid(format!("output name `{name}` must be a plain file name")));
            }
        }
        self.solver.validate().map_err(|e| invalid(e.to_string()))?;
        for &v in &self.values {
            self.instance_spec(v)?;
        }
        Ok(())
    }

    /// Instance parameters at one point of the sweep axis.
    pub fn instance_spec(&self, axis_value: f64) -> Result<InstanceSpec> {
        let as_count = |v: f64, what: &str| -> Result<usize> {
            if v.is_finite() && v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(invalid(format!("{what} value {v} is not a positive integer")))
            }
        };
        let (m, k) = match self.axis {
            Axis::K => (self.m.unwrap_or(0), as_count(axis_value, "k")?),
            Axis::MOverN => {
                if !(axis_value.is_finite() && axis_value > 0.0) {
                    return Err(invalid(format!("m_over_n value {axis_value} must be positive")));
                }
                let m = (axis_value * self.n as f64).round();
                (as_count(m, "m")?, self.k.unwrap_or(0))
            }
        };
        let spec = InstanceSpec {
            n: self.n,
            m,
            l: self.l,
            k,
            beta_low: self.beta_low,
            beta_high: self.beta_high,
            snr: self.snr,
        };
        spec.validate()
            .map_err(|e| invalid(format!("{} = {axis_value}: {e}", self.axis)))?;
        Ok(spec)
    }

    /// Canonical text form; parsing it gives back an equal spec.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let join = |items: Vec<String>| items.join(", ");
        writeln!(out, "n = {}", self.n).unwrap();
        if let Some(m) = self.m {
            writeln!(out, "m = {m}").unwrap();
        }
        writeln!(out, "l = {}", self.l).unwrap();
        if let Some(k) = self.k {
            writeln!(out, "k = {k}").unwrap();
        }
        writeln!(out, "snr = {}", self.snr).unwrap();
        writeln!(out, "beta_low = {}", self.beta_low).unwrap();
        writeln!(out, "beta_high = {}", self.beta_high).unwrap();
        writeln!(out, "axis = {}", self.axis).unwrap();
        writeln!(out, "values = {}", join(self.values.iter().map(|v| v.to_string()).collect())).unwrap();
        writeln!(out, "algorithms = {}", join(self.algorithms.iter().map(|a| a.to_string()).collect())).unwrap();
        writeln!(out, "trials = {}", self.trials).unwrap();
        writeln!(out, "base_seed = {}", self.base_seed).unwrap();
        writeln!(out, "timing = {}", self.timing).unwrap();
        writeln!(out, "csv = {}", self.csv_name).unwrap();
        writeln!(out, "plot = {}", self.plot_name).unwrap();
        render_solver(&mut out, &self.solver);
        out
    }
}
