use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "csrkn",
    version,
    about = "Energy-preserving csRKN integrators: catalog, verification, runs and convergence studies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the benchmark methods, builtin families, problems and presets.
    List,
    /// Check the energy-preservation conditions of a tableau.
    Verify(VerifyArgs),
    /// Integrate a problem and write invariant errors and the trajectory.
    Integrate(IntegrateArgs),
    /// Measure the global order of convergence.
    Convergence(ConvergenceArgs),
    /// Induce a csRKN tableau from a csPRK family.
    Induce(InduceArgs),
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    /// Benchmark id (I..VI, GLRK2, GLRK4) or builtin family name.
    #[arg(long, conflicts_with = "tableau")]
    pub method: Option<String>,
    /// Family parameter as `name=value`; repeatable. On a benchmark id it
    /// overrides that parameter of the default.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Load the tableau from a file instead.
    #[arg(long, value_name = "PATH")]
    pub tableau: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long, default_value_t = csrkn::tableau::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Fixed,
    Newton,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Stage iteration stopping tolerance (max-norm increment).
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = Solver::Fixed)]
    pub solver: Solver,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub method: MethodArgs,
    /// cubic, pendulum, kepler or harmonic; defaults to the preset's problem.
    #[arg(long)]
    pub problem: Option<String>,
    /// Step size; defaults to 0.1.
    #[arg(long)]
    pub h: Option<f64>,
    /// Number of steps; defaults to 10000.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Gauss points for continuous-stage methods.
    #[arg(long)]
    pub quad_points: Option<usize>,
    /// paper-fig1, paper-fig2 or paper-fig3.
    #[arg(long)]
    pub preset: Option<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long)]
    pub problem: String,
    #[arg(long, default_value_t = 5.0)]
    pub t_end: f64,
    /// Comma-separated step sizes.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025,0.0125")]
    pub h_list: Vec<f64>,
    #[arg(long)]
    pub quad_points: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InduceArgs {
    #[command(flatten)]
    pub method: MethodArgs,
    /// Interchange the roles of the two coefficient pairs first.
    #[arg(long)]
    pub swap: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
