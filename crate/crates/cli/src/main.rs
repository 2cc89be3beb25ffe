//! Command-line front end: runs sweeps, emits table/class/catalog/surface
//! files with reproduction manifests, and runs protocol simulations.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimgames_core::RoundingMode;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "dimgames",
    version,
    about = "Analysis tools for two-player nonlocal games on maximally entangled \
             states in dimensions 2 and 3: exact winning probabilities, angle-grid \
             sweeps, equivalence catalogs, and a seeded protocol simulator."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Decimal places for presented probabilities.
    #[arg(long, global = true, default_value_t = 2)]
    precision: u8,
    /// Directory for generated files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// RNG seed for commands that sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Minimum probability gap for the D3 catalog.
    #[arg(long, global = true, default_value_t = 0.44)]
    threshold: f64,
    /// Rounding convention used when grouping probabilities.
    #[arg(long, global = true, value_enum, default_value_t = RoundingArg::Truncate)]
    rounding: RoundingArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoundingArg {
    /// Keep the leading digits unchanged (matches the reference dataset).
    Truncate,
    /// Round half away from zero.
    HalfAwayFromZero,
}

impl From<RoundingArg> for RoundingMode {
    fn from(arg: RoundingArg) -> Self {
        match arg {
            RoundingArg::Truncate => RoundingMode::Truncate,
            RoundingArg::HalfAwayFromZero => RoundingMode::HalfAwayFromZero,
        }
    }
}

impl RoundingArg {
    fn label(self) -> &'static str {
        match self {
            RoundingArg::Truncate => "truncate",
            RoundingArg::HalfAwayFromZero => "half-away-from-zero",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the CHSH game's closed-form and grid-sweep maxima with argmax sets.
    Chsh,
    /// Reproduce one published reference table (1-5) with a concordance report.
    Table {
        /// Which table to reproduce.
        number: u8,
    },
    /// Write one game's 64x64 winning-probability surface as CSV plus a JSON summary.
    Surface(SurfaceArgs),
    /// Group grid points (kind 1), function pairs (kind 2), or (pair, point)
    /// tuples (kind 3) into equal-rounded-probability classes.
    Classes(ClassesArgs),
    /// Export a distinguisher catalog.
    Distinguishers {
        /// Which catalog: d1 (dim-2 optima), d2 (dim-3 optima), d3 (gap list).
        catalog: CatalogArg,
    },
    /// Run the seeded dimension-distinguishing protocol and report the decision.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct SurfaceArgs {
    /// Hilbert-space dimension of the game (2 or 3).
    #[arg(long)]
    dim: usize,
    /// Referee function as a bracketed truth table, e.g. "[0,0,0,1]".
    #[arg(long)]
    f: Option<String>,
    /// Scoring function: 4 cells for dim 2, 9 cells for dim 3 (defaults to
    /// XOR or its dim-3 embedding).
    #[arg(long)]
    g: Option<String>,
}

#[derive(Args)]
struct ClassesArgs {
    /// 1 = grid points of one game, 2 = function pairs at one grid point,
    /// 3 = (pair, point) tuples.
    kind: u8,
    /// Hilbert-space dimension (2 or 3).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Referee function for kind 1 (bracketed truth table).
    #[arg(long)]
    f: Option<String>,
    /// Scoring function for kind 1.
    #[arg(long)]
    g: Option<String>,
    /// First angle for kind 2, as a multiple of pi/32 (e.g. "pi/8").
    #[arg(long)]
    theta0: Option<String>,
    /// Second angle for kind 2 (e.g. "15pi/8").
    #[arg(long)]
    theta1: Option<String>,
    /// Tuple domain for kind 3.
    #[arg(long, value_enum, default_value_t = DomainArg::Full)]
    domain: DomainArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    /// Every (game, grid point) tuple of the dimension.
    Full,
    /// Only games whose maximum reaches the dimension's top rounded level.
    MaxStratum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CatalogArg {
    D1,
    D2,
    D3,
}

#[derive(Args)]
struct SimulateArgs {
    /// Dimension of the state actually generating the data (2 or 3).
    #[arg(long)]
    true_dim: usize,
    /// Number of protocol rounds.
    #[arg(long)]
    rounds: u64,
    /// First measurement angle (multiple of pi/32; default "pi/8").
    #[arg(long)]
    theta0: Option<String>,
    /// Second measurement angle (default "15pi/8").
    #[arg(long)]
    theta1: Option<String>,
    /// Referee function (default AND).
    #[arg(long)]
    f: Option<String>,
    /// Dim-2 scoring table (default XOR).
    #[arg(long)]
    g2: Option<String>,
    /// Dim-3 scoring table (default the XOR embedding).
    #[arg(long)]
    g3: Option<String>,
    /// Also write the per-round CSV log (i,x,y,a,b,Y).
    #[arg(long)]
    log: bool,
}

/// Errors carry the exit-code category: 2 usage, 3 I/O, 4 engine.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Engine(dimgames_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(fmt, "usage error: {msg}"),
            CliError::Io { path, source } => {
                write!(fmt, "i/o error on {}: {source}", path.display())
            }
            CliError::Engine(err) => write!(fmt, "engine error: {err}"),
        }
    }
}

impl From<dimgames_core::Error> for CliError {
    fn from(err: dimgames_core::Error) -> Self {
        CliError::Engine(err)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Engine(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            return Err(CliError::Usage(
                "invalid value `0` for --threads: need at least one thread".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|err| CliError::Usage(format!("--threads rejected: {err}")))?;
    }
    let started = Instant::now();
    let draft = match &cli.command {
        Command::Chsh => commands::chsh(&cli.global)?,
        Command::Table { number } => commands::table(&cli.global, *number)?,
        Command::Surface(args) => commands::surface(&cli.global, args)?,
        Command::Classes(args) => commands::classes(&cli.global, args)?,
        Command::Distinguishers { catalog } => commands::distinguishers(&cli.global, *catalog)?,
        Command::Simulate(args) => commands::simulate(&cli.global, args)?,
    };
    if let Some(draft) = draft {
        output::write_manifest(draft, started.elapsed())?;
    }
    Ok(())
}
