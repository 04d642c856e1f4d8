mod iso;
mod output;
mod screen;
mod search;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use designforge::group::DEFAULT_CAP;
use designforge::Error;

#[derive(Parser)]
#[command(name = "designforge", version, about = "Screen, construct and classify block-transitive 2-(k²,k,λ) designs")]
struct Cli {
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Arithmetic screening of point-primitive actions of PSL(n,q).
    Screen(ScreenArgs),
    /// Exhaustive search for block-transitive 2-(k²,k,λ) designs.
    Search(SearchArgs),
    /// Check a design given by a file or a base block.
    Verify(VerifyArgs),
    /// Partition design files into isomorphism classes.
    Iso(IsoArgs),
}

#[derive(Args)]
pub struct ScreenArgs {
    /// `all`, or a comma-separated list such as `C1,C3,S`.
    #[arg(long, default_value = "all")]
    family: String,
    /// Use the built-in scan ranges of every family.
    #[arg(long, conflicts_with_all = ["n", "q"])]
    defaults: bool,
    /// Dimensions: `3..12`, `4` or `3,5,7`.
    #[arg(long)]
    n: Option<String>,
    /// Field orders: `2..1024` (prime powers only are kept), `9` or `2,3,4`.
    #[arg(long)]
    q: Option<String>,
    /// Directory for reports.json, summary.json and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SearchArgs {
    /// Generator file of the group acting on k² points.
    #[arg(long)]
    gens: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    lambda: Option<usize>,
    /// Every divisor λ ≥ 2 of k.
    #[arg(long)]
    all: bool,
    /// Also search λ = 1 with --all.
    #[arg(long, requires = "all")]
    include_lambda_one: bool,
    /// Generators of an overgroup G.2, in any labeling; designs are then
    /// also counted up to its action.
    #[arg(long)]
    aut_gens: Option<PathBuf>,
    /// Skip isomorphism classification.
    #[arg(long)]
    no_classify: bool,
    /// Output directory for design files, summary.json and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    gens: PathBuf,
    /// Design file written by `search`.
    #[arg(long, required_unless_present = "block", conflicts_with = "block")]
    design: Option<PathBuf>,
    /// Base block, 1-based, comma-separated.
    #[arg(long)]
    block: Option<String>,
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Write the report as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct IsoArgs {
    #[arg(long = "in", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Directory for partition.json and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome that maps to a process exit status.
pub enum Status {
    Ok,
    /// The input was checked and found not to have the claimed property.
    Negative,
}

pub fn group_cap() -> anyhow::Result<usize> {
    match std::env::var("DESIGNFORGE_CAP") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("DESIGNFORGE_CAP={s:?} is not a number")).into()),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. } | Error::Unsupported(_)) => 3,
        Some(Error::Inconsistent(_)) => 4,
        Some(_) => 2,
        None if err.downcast_ref::<std::io::Error>().is_some() => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool configured once");
    }
    let result = match &cli.command {
        Command::Screen(a) => screen::run(a),
        Command::Search(a) => search::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Iso(a) => iso::run(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
