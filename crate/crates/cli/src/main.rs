mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rip-lab", version, about = "Sparse and low-rank recovery laboratory")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a point of T(alpha, s) as a convex combination of s-sparse vectors.
    Decompose(DecomposeArgs),
    /// Restricted isometry constant, exact or sampled.
    Ric(RicArgs),
    /// Restricted orthogonality constant.
    Roc(RocArgs),
    /// Null space property of order k.
    Nsp(NspArgs),
    /// l1 minimization.
    Recover(RecoverArgs),
    /// Nuclear-norm minimization.
    Lowrank(LowrankArgs),
    /// Build a counterexample instance.
    Adversary(AdversaryArgs),
    /// Evaluate a closed-form error bound.
    Bounds(BoundsArgs),
    /// Basis-pursuit phase diagram over an (n, k) grid.
    Phase(PhaseArgs),
    /// delta_star and n_star on a grid of t.
    Thresholds(ThresholdsArgs),
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// CSV file holding the vector as one row or one column.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub s: usize,
}

#[derive(Args, Debug)]
pub struct RicArgs {
    /// CSV matrix; for `--sampled`, the q x (rows * cols) matrix of the map.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Sparsity order (or rank, with `--sampled`).
    #[arg(long)]
    pub order: f64,
    /// Sampled lower bound over rank-`order` matrices of shape rows x cols.
    #[arg(long, requires_all = ["rows", "cols"])]
    pub sampled: bool,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

#[derive(Args, Debug)]
pub struct RocArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub k1: usize,
    #[arg(long)]
    pub k2: usize,
}

#[derive(Args, Debug)]
pub struct NspArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub k: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstraintKind {
    Zero,
    L2,
    Ds,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value_t = ConstraintKind::Zero)]
    pub constraint: ConstraintKind,
    /// Constraint radius for `l2` and `ds`.
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 20_000)]
    pub max_iter: usize,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    /// JSON problem `{"matrix": [[...]], "observations": [...], "constraint": {...}}`.
    #[arg(long, conflicts_with_all = ["matrix", "observations"])]
    pub problem: Option<PathBuf>,
    #[arg(long, requires = "observations")]
    pub matrix: Option<PathBuf>,
    #[arg(long, requires = "matrix")]
    pub observations: Option<PathBuf>,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Args, Debug)]
pub struct LowrankArgs {
    /// JSON problem `{"map": {"matrix": [[...]], "shape": [m, n]}, "observations": [...], "constraint": {...}}`.
    #[arg(long, conflicts_with_all = ["map", "observations"])]
    pub problem: Option<PathBuf>,
    /// CSV q x (rows * cols) matrix acting on column-major vectorizations.
    #[arg(long, requires_all = ["observations", "rows", "cols"])]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub observations: Option<PathBuf>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    High,
    Low,
}

#[derive(Args, Debug)]
pub struct AdversaryArgs {
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// Also run basis pursuit on the instance and report the outcome.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKindArg {
    L2,
    Ds,
    MatrixL2,
    MatrixDs,
    GaussianL2,
    GaussianDs,
    Oracle,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub kind: BoundKindArg,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    /// l1 norm of the k-sparse tail (nuclear norm of the rank-r tail).
    #[arg(long, default_value_t = 0.0)]
    pub tail: f64,
    /// Sparsity k, or rank r for the matrix bounds.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 2)]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// Comma-separated coefficients for `oracle`.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    Gaussian,
    Rademacher,
    Ternary,
}

#[derive(Args, Debug)]
pub struct PhaseArgs {
    #[arg(long, value_enum, default_value_t = EnsembleArg::Gaussian)]
    pub ensemble: EnsembleArg,
    #[arg(long)]
    pub p: usize,
    /// Comma-separated measurement counts.
    #[arg(long = "n-values", value_delimiter = ',', required = true)]
    pub n_values: Vec<usize>,
    /// Comma-separated sparsity levels.
    #[arg(long = "k-values", value_delimiter = ',', required = true)]
    pub k_values: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Relative l2 error counted as success.
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
}

#[derive(Args, Debug)]
pub struct ThresholdsArgs {
    #[arg(long = "t-min")]
    pub t_min: f64,
    #[arg(long = "t-max")]
    pub t_max: f64,
    #[arg(long)]
    pub step: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = commands::emit(&cli, &outcome.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.converged {
                ExitCode::SUCCESS
            } else {
                eprintln!("warning: solver did not reach the requested tolerance");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
