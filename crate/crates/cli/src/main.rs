mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Winner determination and coalitional manipulation for ℓ-Bloc
/// shortlisting elections.
#[derive(Parser, Debug)]
#[command(name = "shortlist-strat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scores, candidate partition and winning egroup.
    Winners(WinnersArgs),
    /// Best manipulation for a coalition of manipulators.
    Manipulate(ManipulateArgs),
    /// Compares the fast solvers with exhaustive search on random instances.
    Check(CheckArgs),
    /// Generates instances.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TieKind {
    Lex,
    Opt,
    Pess,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EvalArg {
    Util,
    Egal,
    Candegal,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Fast,
    Oracle,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Election file.
    #[arg(long)]
    election: PathBuf,
    /// Number of candidates each vote approves.
    #[arg(long)]
    ell: usize,
    /// Size of the winning egroup.
    #[arg(long)]
    k: usize,
    /// Tie-breaking rule.
    #[arg(long)]
    tie: TieKind,
    /// Evaluation of an egroup; also the objective of optimistic and
    /// pessimistic tie-breaking.
    #[arg(long = "eval")]
    eval: Option<EvalArg>,
    /// Lexicographic order, best first; defaults to the election's
    /// candidate order.
    #[arg(long, value_delimiter = ',')]
    lex_order: Option<Vec<String>>,
    /// Manipulators' utility file.
    #[arg(long)]
    utilities: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WinnersArgs {
    #[command(flatten)]
    instance: InstanceArgs,
}

#[derive(Args, Debug)]
struct ManipulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Exit with status 1 unless the coalition reaches this value.
    #[arg(long)]
    threshold: Option<u64>,
    #[arg(long, default_value = "fast")]
    solver: SolverKind,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_m: usize,
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_r: usize,
    #[arg(long, default_value_t = 3)]
    max_util: u64,
    #[arg(long, default_value_t = 3)]
    max_ell: usize,
    #[arg(long, default_value_t = 4)]
    max_k: usize,
    /// Reports every fast value off by one, to exercise the mismatch path.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Random election and utility profile.
    Random(GenRandomArgs),
    /// Tie-breaking instance from a set cover instance, and the
    /// manipulation instance it reduces to.
    Setcover(GenSetcoverArgs),
}

#[derive(Args, Debug)]
struct GenRandomArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    max_util: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the election to this file.
    #[arg(long)]
    election_out: Option<PathBuf>,
    /// Also write the utilities to this file.
    #[arg(long)]
    utilities_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenSetcoverArgs {
    /// Elements are numbered 1..=N.
    #[arg(long)]
    universe: usize,
    /// Sets separated by ';', elements by ',', e.g. "1,2;2,3".
    #[arg(long)]
    sets: String,
    /// Number of sets allowed in a cover.
    #[arg(long)]
    budget: usize,
    /// Approvals per vote in the manipulation instance.
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Tie-breaking rule of the manipulation instance.
    #[arg(long, default_value = "opt")]
    tie: TieKind,
}

/// Exit statuses.
pub const EXIT_THRESHOLD_UNMET: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
/// A solver certificate failed re-simulation.
pub const EXIT_INTERNAL: u8 = 4;

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("SHORTLIST_STRAT_THREADS") else { return Ok(()) };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| anyhow::anyhow!("SHORTLIST_STRAT_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Winners(args) => commands::winners(&args),
        Command::Manipulate(args) => commands::manipulate(&args),
        Command::Check(args) => commands::check(&args),
        Command::Gen(GenCommand::Random(args)) => commands::gen_random(&args),
        Command::Gen(GenCommand::Setcover(args)) => commands::gen_setcover(&args),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let internal = err
                .chain()
                .any(|e| matches!(e.downcast_ref::<shortlist_core::Error>(), Some(shortlist_core::Error::Internal(_))));
            ExitCode::from(if internal { EXIT_INTERNAL } else { EXIT_INPUT })
        }
    }
}
