use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmv_core::synth::{gen_instance, InstanceSpec, Snr};
use mmv_core::{block_oracle, matio, Algorithm, SolverConfig};
use mmv_bench::{
    emit_csv, emit_plot, load_problem, parse_solver_config, read_text, run_sweep, write_text, BenchError,
    ExperimentSpec, Result,
};

#[derive(Parser)]
#[command(name = "mmvbench", version, about = "Failure-rate sweeps for MMV sparse recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the number of trials per axis value.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Also write an SVG plot.
        #[arg(long)]
        plot: bool,
    },
    /// Recover X from Φ and Y stored as headered CSV matrices.
    Solve {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        algorithm: Algorithm,
        /// File of `solver.<field> = value` overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Known noise variance; estimated from Y when absent.
        #[arg(long)]
        noise_level: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate one synthetic instance into a directory.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        beta_low: f64,
        #[arg(long, default_value_t = 1.0)]
        beta_high: f64,
        /// SNR in dB, or `noiseless`.
        #[arg(long, default_value = "noiseless")]
        snr: Snr,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the exact block-space solver and print its objective trace.
    #[command(hide = true)]
    Oracle {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        noise_level: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))
}

fn solver_config(path: Option<&Path>) -> Result<SolverConfig> {
    match path {
        Some(p) => parse_solver_config(&read_text(p)?),
        None => Ok(SolverConfig::default()),
    }
}

fn write_matrix(path: &Path, a: &nalgebra::DMatrix<f64>) -> Result<()> {
    write_text(path, &matio::format_matrix(a))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { config, out, trials, seed, threads, plot } => {
            let mut spec = ExperimentSpec::parse(&read_text(&config)?)?;
            if let Some(t) = trials {
                spec.trials = t;
            }
            if let Some(s) = seed {
                spec.base_seed = s;
            }
            spec.validate()?;
            let result = run_sweep(&spec, threads)?;
            create_dir(&out)?;
            write_text(&out.join("spec.txt"), &spec.render())?;
            emit_csv(&result, &out.join(&spec.csv_name))?;
            if plot {
                emit_plot(&result, &out.join(&spec.plot_name))?;
            }
            for c in &result.cells {
                println!(
                    "{}={:<6} {:<12} failure_rate={:.3} ({}/{}) mean_iterations={:.1}",
                    result.axis, c.axis_value, c.algorithm, c.failure_rate, c.failures, c.trials, c.mean_iterations
                );
            }
        }
        Command::Solve { phi, y, algorithm, config, noise_level, out } => {
            let config = solver_config(config.as_deref())?;
            let problem = load_problem(&phi, &y, noise_level)?;
            let r = algorithm.solve(&problem, &config)?;
            write_matrix(&out, &r.x_hat)?;
            println!("{algorithm}: iterations={} converged={} lambda={}", r.iterations, r.converged, r.hyper.lambda());
        }
        Command::Gen { n, m, l, k, beta_low, beta_high, snr, seed, out } => {
            let spec = InstanceSpec { n, m, l, k, beta_low, beta_high, snr };
            let (problem, truth) = gen_instance(&spec, seed)?;
            create_dir(&out)?;
            write_matrix(&out.join("phi.csv"), problem.phi())?;
            write_matrix(&out.join("y.csv"), problem.y())?;
            write_matrix(&out.join("x_gen.csv"), &truth.x_gen)?;
            let join = |v: Vec<String>| v.join(", ");
            let mut meta = String::new();
            writeln!(meta, "n = {n}\nm = {m}\nl = {l}\nk = {k}").unwrap();
            writeln!(meta, "support = {}", join(truth.support.iter().map(|i| i.to_string()).collect())).unwrap();
            writeln!(meta, "betas = {}", join(truth.betas.iter().map(|b| b.to_string()).collect())).unwrap();
            writeln!(meta, "snr = {}", truth.snr).unwrap();
            writeln!(meta, "noise_level = {}", problem.noise_level().unwrap_or(0.0)).unwrap();
            writeln!(meta, "seed = {seed}").unwrap();
            write_text(&out.join("meta.txt"), &meta)?;
        }
        Command::Oracle { phi, y, config, noise_level, out } => {
            let config = solver_config(config.as_deref())?;
            let problem = load_problem(&phi, &y, noise_level)?;
            let r = block_oracle::solve_exact(&problem, &config)?;
            write_matrix(&out, &r.x_hat)?;
            for (cycle, value) in r.objective_trace.iter().enumerate() {
                println!("{} {value:?}", cycle + 1);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are invalid specs; help and version are not errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
