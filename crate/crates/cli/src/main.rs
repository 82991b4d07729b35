//! `multifrac`: region maps, weight checks, weight constructions, identity
//! suites and experiments from the command line.
//!
//! Exit codes: 0 pass, 1 experiment FAIL, 2 usage or configuration error,
//! 3 infinite class quantity, 4 trivial region, 5 degenerate run.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(multifrac::Error),
    Infinite(String),
    Degenerate(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(multifrac::Error::Region { .. }) => 4,
            CliError::Core(_) => 2,
            CliError::Infinite(_) => 3,
            CliError::Degenerate(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Infinite(m) => write!(f, "infinite class quantity: {m}"),
            CliError::Degenerate(m) => write!(f, "degenerate run: {m}"),
            CliError::Failed(m) => write!(f, "FAIL: {m}"),
        }
    }
}

impl From<multifrac::Error> for CliError {
    fn from(e: multifrac::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "multifrac", version, about = "Numerical laboratory for multilinear fractional integrals and their two-weight classes")]
struct Cli {
    /// Cap on worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PanelArg {
    #[value(name = "beta_gt")]
    BetaGt,
    #[value(name = "beta_eq")]
    BetaEq,
    #[value(name = "beta_lt")]
    BetaLt,
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Difference of products, commutator representations, A_p transform.
    Identities,
    /// Power-integral asymptotics for alpha in {-0.5, 0, 1}.
    Asymptotic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a grid of (1/p, delta_tilde) cells for one panel.
    Region {
        #[arg(long, value_enum)]
        panel: PanelArg,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, default_value = "multifrac-out")]
        out: PathBuf,
    },
    /// Sweep class quantities of a weight vector over a ball family.
    CheckWeights {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "multifrac-out")]
        out: PathBuf,
    },
    /// Build explicit nontrivial weights for a parameter point.
    Construct {
        /// TOML file with `point` and `p`; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        delta_tilde: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Comma-separated exponents, `inf` allowed.
        #[arg(long)]
        p: Option<String>,
        /// Written as a `check-weights` config.
        #[arg(long, default_value = "constructed.toml")]
        out: PathBuf,
    },
    /// Run a fixed verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Optional TOML with `seed` and suite `sizes`.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "multifrac-out")]
        out: PathBuf,
    },
    /// Run one configured experiment.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "multifrac-out")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size the worker pool: {e}")))?;
    }
    match cli.command {
        Command::Region { panel, resolution, out } => commands::region(panel, resolution, &out),
        Command::CheckWeights { config, seed, out } => commands::check_weights(&config, seed, &out),
        Command::Construct { config, n, m, beta, delta, delta_tilde, gamma, p, out } => {
            let flags = commands::PointFlags { n, m, beta, delta, delta_tilde, gamma, p };
            commands::construct(config.as_deref(), flags, &out)
        }
        Command::Verify { suite, config, seed, out } => commands::verify(suite, config.as_deref(), seed, &out),
        Command::Experiment { config, seed, out } => commands::experiment(&config, seed, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("multifrac: {e}");
            ExitCode::from(e.code())
        }
    }
}
