mod commands;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Solvers for monotone submodular maximization under a submodular
/// knapsack constraint, on weighted coverage instances.
#[derive(Parser)]
#[command(name = "submax", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver at a fixed budget and report the outcome.
    Solve(SolveArgs),
    /// Run solvers across a list of budgets and emit one CSV row per cell.
    ///
    /// Cells run in parallel; cap the thread count with SUBMAX_THREADS.
    Sweep(SweepArgs),
    /// Emit the per-iteration CSV trace of a variational solver.
    Trace(TraceArgs),
    /// Generate a seeded random coverage instance file.
    Gen(GenArgs),
    /// Validate an instance file and verify its oracles are monotone
    /// submodular (exhaustively up to --limit items, sampled above).
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Em,
    Sem,
    Greedy,
    Exact,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SolverKind::Em => "em",
            SolverKind::Sem => "sem",
            SolverKind::Greedy => "greedy",
            SolverKind::Exact => "exact",
        };
        write!(out, "{name}")
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file to solve.
    #[arg(long)]
    instance: PathBuf,
    /// Knapsack budget.
    #[arg(long)]
    budget: f64,
    #[arg(long, value_enum, default_value_t = SolverKind::Em)]
    solver: SolverKind,
    /// Iteration cap for the variational solvers.
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Instance file to sweep over.
    #[arg(long, conflicts_with_all = ["items", "elements", "seed"])]
    instance: Option<PathBuf>,
    /// Generate the instance instead: number of items.
    #[arg(long)]
    items: Option<usize>,
    /// Generate the instance instead: number of elements.
    #[arg(long)]
    elements: Option<usize>,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generator coverage degree range, as LO:HI.
    #[arg(long, value_parser = commands::parse_usize_range)]
    degree: Option<(usize, usize)>,
    /// Generator element value range, as LO:HI.
    #[arg(long, value_parser = commands::parse_u64_range)]
    value_range: Option<(u64, u64)>,
    /// Budgets: a comma list "2,5,8" or a range "40:90:5" (inclusive).
    /// Defaults to 11 budgets evenly spaced over [0.4, 0.9] of the element
    /// count.
    #[arg(long)]
    bounds: Option<String>,
    /// Solvers to run in each cell.
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [SolverKind::Em, SolverKind::Sem, SolverKind::Greedy])]
    solvers: Vec<SolverKind>,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    /// Append an exact-optimum column (requires at most 25 items).
    #[arg(long)]
    with_opt: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    budget: f64,
    /// Variational solver to trace (em or sem).
    #[arg(long, value_enum, default_value_t = SolverKind::Em)]
    solver: SolverKind,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    items: usize,
    #[arg(long)]
    elements: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coverage degree range, as LO:HI. Defaults to 1:4.
    #[arg(long, value_parser = commands::parse_usize_range)]
    degree: Option<(usize, usize)>,
    /// Element value range, as LO:HI. Defaults to 1:100.
    #[arg(long, value_parser = commands::parse_u64_range)]
    value_range: Option<(u64, u64)>,
    /// Instance file to write.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Largest item count checked exhaustively.
    #[arg(long, default_value_t = 12)]
    limit: usize,
    /// Sample count per property when past the exhaustive limit.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Trace(args) => commands::trace(args),
        Command::Gen(args) => commands::gen(args),
        Command::Check(args) => commands::check(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}
