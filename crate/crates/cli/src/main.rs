//! `torus` — invariant attractors of the dissipative spin-orbit problem.
//!
//! Computes rotational invariant tori of the 2π return map, continues them
//! in the perturbation parameter toward breakdown, and emits plot-ready CSV
//! data.  The working precision is selected at runtime: `--prec 53` (the
//! default) runs on hardware doubles, anything higher on MPFR floats; all
//! real-valued flags are parsed at that precision, so high-precision runs
//! never truncate inputs through a double.
//!
//! Exit status: 0 on success, 1 on a numerical failure (a JSON failure
//! record goes to stderr), 2 on usage errors.

mod io;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spinorbit_core::arith::parallel::install_thread_pool;
use spinorbit_core::{MpFloat, Result, ScalarContext};

#[derive(Parser)]
#[command(name = "torus", version, about = "Invariant attractors of the spin-orbit problem")]
pub struct Cli {
    /// Mantissa bits of the working precision (53 = hardware doubles).
    #[arg(long, global = true, env = "SPINORBIT_PREC")]
    prec: Option<u32>,

    /// Worker threads; 0 or absent means machine parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized diagnostics (jet-test probe points).
    #[arg(long, global = true, default_value_t = 7)]
    rng_seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Solve for one invariant attractor at fixed (ω, ε, η).
    Compute(ComputeArgs),
    /// Continue a stored solution in ε with adaptive steps.
    Continue(ContinueArgs),
    /// Build a starting torus from a dissipative transient orbit.
    Seed(SeedArgs),
    /// Weighted Birkhoff rotation number of a transient orbit.
    Rotnum(RotnumArgs),
    /// Tabulate rotation number against eccentricity (rotation CSV).
    SweepDrift(SweepArgs),
    /// Full-vs-averaged drift comparison (avgdiff CSV).
    CompareAveraged(CompareArgs),
    /// Print the conformal factor λ and the period integral behind it.
    ConformalFactor(ConformalArgs),
    /// Check first-order jet transport against finite differences.
    JetTest(JetTestArgs),
    /// Re-measure the error certificates stored in a torus file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Full,
    Averaged,
}

#[derive(Args)]
pub struct ComputeArgs {
    /// Target frequency: `golden`, `silver`, or a decimal.
    #[arg(long)]
    pub omega: String,
    /// Dissipation strength η.
    #[arg(long)]
    pub eta: String,
    /// Perturbation amplitude ε.
    #[arg(long)]
    pub eps: String,
    /// Starting drift e; defaults to the averaged-model prediction for ω.
    #[arg(long)]
    pub ecc: Option<String>,
    /// Fourier mesh size (power of two). Defaults to 128, or the mesh of
    /// `--from` when resuming.
    #[arg(long)]
    pub n: Option<usize>,
    /// Newton stopping tolerance δ; defaults to the precision-matched value.
    #[arg(long)]
    pub delta: Option<String>,
    /// Integrator tolerance; defaults to δ/100.
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long, default_value_t = 12)]
    pub max_iter: usize,
    /// Start from a stored torus or seed file instead of a flat guess.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[arg(long, default_value = "torus.txt")]
    pub out: PathBuf,
    /// Also write (θ, x/π, y) rows of the solution curve.
    #[arg(long)]
    pub plot_curve: Option<PathBuf>,
}

#[derive(Args)]
pub struct ContinueArgs {
    /// Converged torus file to continue from.
    #[arg(long)]
    pub from: PathBuf,
    #[arg(long)]
    pub eps_target: String,
    /// Directory for per-step torus files and continuation.csv.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Double the mesh when the interlaced check fails.
    #[arg(long)]
    pub adapt_modes: bool,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    /// Initial (and maximal) ε step.
    #[arg(long, default_value = "1e-3")]
    pub delta_eps0: String,
    #[arg(long, default_value_t = 12)]
    pub max_halvings: u32,
    #[arg(long, default_value_t = 12)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 4096)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_steps: usize,
    /// Comma-separated ε checkpoints the schedule must land on exactly.
    #[arg(long)]
    pub targets: Option<String>,
}

#[derive(Args)]
pub struct SeedArgs {
    #[arg(long)]
    pub omega: String,
    #[arg(long)]
    pub eta: String,
    #[arg(long)]
    pub eps: String,
    /// Drift to run the transient at; defaults to the prediction for ω.
    #[arg(long)]
    pub ecc: Option<String>,
    /// Transient length; defaults to ⌈5/η⌉ capped at 10⁷.
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub keep: usize,
    #[arg(long, default_value_t = 128)]
    pub n_theta: usize,
    /// Half-width of the Lagrange interpolation stencil.
    #[arg(long, default_value_t = 4)]
    pub stencil: usize,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long, default_value = "seed.txt")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct RotnumArgs {
    #[arg(long)]
    pub eps: String,
    #[arg(long)]
    pub eta: String,
    #[arg(long)]
    pub ecc: String,
    #[arg(long, value_enum, default_value_t = ModelArg::Full)]
    pub model: ModelArg,
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub keep: usize,
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("grid").required(true).args(["e_list", "e_range"])))]
pub struct SweepArgs {
    #[arg(long)]
    pub eta: String,
    #[arg(long)]
    pub eps: String,
    /// Comma-separated eccentricities.
    #[arg(long)]
    pub e_list: Option<String>,
    /// Eccentricity grid start:step:stop.
    #[arg(long)]
    pub e_range: Option<String>,
    #[arg(long, value_enum, default_value_t = ModelArg::Full)]
    pub model: ModelArg,
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub keep: usize,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long, default_value = "rotation.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub omega: String,
    #[arg(long)]
    pub eta: String,
    /// Comma-separated ε values to compare at.
    #[arg(long)]
    pub eps_list: String,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub n0: usize,
    #[arg(long, default_value_t = 4096)]
    pub n_max: usize,
    #[arg(long, default_value = "avg_vs_full.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ConformalArgs {
    #[arg(long)]
    pub ecc: String,
    #[arg(long)]
    pub eta: String,
}

#[derive(Args)]
pub struct JetTestArgs {
    #[arg(long, default_value = "1e-4")]
    pub eps: String,
    #[arg(long, default_value = "1e-3")]
    pub eta: String,
    #[arg(long, default_value = "0.25")]
    pub ecc: String,
    /// Baseline displacement; the defect at h/2 must be ≈4× smaller.
    #[arg(long, default_value = "1e-7")]
    pub h: String,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub points: usize,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub torus: PathBuf,
    /// Match tolerance is 10·δ; defaults to the precision-matched δ.
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub plot_curve: Option<PathBuf>,
}

fn real_main(cli: &Cli) -> Result<()> {
    let bits = cli.prec.unwrap_or(ScalarContext::HARDWARE_BITS);
    let ctx = ScalarContext::new(bits)?;
    install_thread_pool(cli.threads.unwrap_or(0));
    if ctx.is_hardware() {
        run::dispatch::<f64>(cli, &ctx)
    } else {
        ctx.activate();
        run::dispatch::<MpFloat>(cli, &ctx)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::json!({
                "status": "error",
                "kind": e.kind(),
                "message": e.to_string(),
            });
            eprintln!("{record}");
            ExitCode::from(1)
        }
    }
}
