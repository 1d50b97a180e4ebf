//! Command-line front end: generate ground-truth networks, simulate
//! oscillator experiments, reconstruct influence matrices from traces,
//! evaluate against a known topology, calibrate thresholds, and run the
//! bundled benchmark suites.

mod commands;
mod manifest;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "redraw",
    version,
    about = "Simulate networks of nonuniform Kuramoto oscillators and reconstruct their directed, weighted topology from phase time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LockPolicyArg {
    /// Fail on any experiment that did not phase-lock.
    Strict,
    /// Include unlocked experiments and report them.
    Warn,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Output directory (created if missing).
    #[arg(long, short, env = "REDRAW_OUT_DIR", default_value = ".")]
    out: PathBuf,
    /// Restrict emitted formats; defaults to everything applicable.
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
}

#[derive(Args)]
pub struct SimArgs {
    /// Experiment duration T in seconds.
    #[arg(long, default_value_t = 30.0)]
    duration: f64,
    /// Integration and sampling step in seconds.
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Global coupling strength c.
    #[arg(long, default_value_t = 10.0)]
    coupling: f64,
    /// Base phase shift phi (rad); per edge the shift is phi/a_ij.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    phi: f64,
    /// Number of experiments K.
    #[arg(long, short = 'k', default_value_t = 50)]
    experiments: usize,
    /// Master seed; per-experiment seeds are derived from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Lock bound chi on the coefficient of variation.
    #[arg(long, default_value_t = 0.35)]
    chi: f64,
    /// Settle time t-hat before lock statistics are collected (s).
    #[arg(long, default_value_t = 20.0)]
    settle_time: f64,
}

#[derive(Args)]
pub struct ReconArgs {
    /// DPI threshold nu in [0, 1).
    #[arg(long, default_value_t = 0.9)]
    nu: f64,
    /// Cut threshold mu in [0, nu].
    #[arg(long, default_value_t = 0.8)]
    mu: f64,
    /// Window length in seconds; runs the windowed pipeline when set.
    #[arg(long)]
    window: Option<f64>,
    /// Unlocked-experiment policy.
    #[arg(long, value_enum, default_value_t = LockPolicyArg::Strict)]
    lock_policy: LockPolicyArg,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ground-truth network and write it as JSON + DOT.
    Generate {
        #[command(subcommand)]
        recipe: commands::RecipeCmd,
    },
    /// Simulate K experiments over a network, writing one trace CSV per
    /// experiment plus a lock-report summary.
    Simulate {
        /// Ground-truth network JSON.
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Lock policy deciding the exit code on unlocked experiments.
        #[arg(long, value_enum, default_value_t = LockPolicyArg::Strict)]
        lock_policy: LockPolicyArg,
    },
    /// Reconstruct an influence matrix from stored trace CSVs.
    Reconstruct {
        /// Directory containing trace_*.csv files.
        #[arg(long)]
        traces: PathBuf,
        #[command(flatten)]
        recon: ReconArgs,
        /// Lock bound chi for re-checking the traces.
        #[arg(long, default_value_t = 0.35)]
        chi: f64,
        /// Settle time t-hat for re-checking the traces (s).
        #[arg(long, default_value_t = 20.0)]
        settle_time: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare an inferred influence matrix against a ground truth.
    Evaluate {
        /// Ground-truth network JSON.
        #[arg(long)]
        truth: PathBuf,
        /// Inferred matrix CSV (post-threshold adjacency).
        #[arg(long)]
        inferred: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulate, reconstruct and evaluate in one run.
    Pipeline {
        /// Ground-truth network JSON.
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        recon: ReconArgs,
        /// Also write the per-experiment trace CSVs.
        #[arg(long)]
        write_traces: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Grid-calibrate the thresholds (nu, mu) on random test graphs.
    Calibrate {
        /// Size of the unknown network of interest.
        #[arg(long)]
        n: usize,
        /// Number of random test graphs N.
        #[arg(long, default_value_t = 100)]
        graphs: usize,
        /// Experiments per test graph K.
        #[arg(long, short = 'k', default_value_t = 10)]
        k: usize,
        /// Grid step for both thresholds over [0, 0.99].
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
        /// Metric bounds, e.g. ppv=40,acc=70,tpr=40,fpr=30.
        #[arg(long, value_parser = commands::parse_bounds)]
        bounds: Option<redraw::calibrate::MetricBounds>,
        /// Coupling strength; defaults to 2.5 * n.
        #[arg(long)]
        coupling: Option<f64>,
        /// Master seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a bundled benchmark suite and emit a metrics CSV.
    Benchmark {
        #[command(subcommand)]
        suite: commands::SuiteCmd,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate { recipe } => commands::generate(recipe),
        Command::Simulate {
            spec,
            sim,
            output,
            lock_policy,
        } => commands::simulate(&spec, &sim, &output, lock_policy),
        Command::Reconstruct {
            traces,
            recon,
            chi,
            settle_time,
            output,
        } => commands::reconstruct(&traces, &recon, chi, settle_time, &output),
        Command::Evaluate {
            truth,
            inferred,
            output,
        } => commands::evaluate(&truth, &inferred, &output),
        Command::Pipeline {
            spec,
            sim,
            recon,
            write_traces,
            output,
        } => commands::pipeline(&spec, &sim, &recon, write_traces, &output),
        Command::Calibrate {
            n,
            graphs,
            k,
            grid_step,
            bounds,
            coupling,
            seed,
            output,
        } => commands::calibrate(n, graphs, k, grid_step, bounds, coupling, seed, &output),
        Command::Benchmark { suite } => commands::benchmark(suite),
    }
}
