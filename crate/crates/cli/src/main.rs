//! `forkred`: mutate, classify, redden and explore quivers from the shell.
//!
//! Exit codes: 0 success, 1 a violation or counterexample was found,
//! 2 usage, parse or input error.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use forkred_core::explore::DEFAULT_MAX_NODES;
use forkred_core::generate::WeightRange;
use forkred_core::signs::ConditionReading;

use commands::{ExploreArgs, GenKind, Mode, Outcome, VerifyArgs};
use input::{InputArgs, OutputArgs};

const FALLBACK_DEPTH: usize = 6;

#[derive(Parser, Debug)]
#[command(
    name = "forkred",
    version,
    about = "Quiver mutation, forks and reddening sequences"
)]
struct Cli {
    /// Depth bound for searches; commands fall back to their own default.
    #[arg(long, global = true, env = "FORKRED_DEPTH_DEFAULT")]
    depth: Option<usize>,

    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Reading {
    NeighboursOnly,
    AllVertices,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply a mutation sequence and print `[B | C]` with vertex colors.
    Mutate {
        #[command(flatten)]
        input: InputArgs,
        /// 1-based labels, e.g. "1,2,3".
        #[arg(long)]
        seq: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Report whether the quiver is acyclic, abundant, a fork or none of these.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Search the mutation class for a fork.
    FindFork {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a reddening sequence; falls back to uRed for other quivers.
    Redden {
        #[command(flatten)]
        input: InputArgs,
        /// Force a construction instead of picking one from the input shape.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Per-component reddening status and the unrestricted red size.
    Ured {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the sign statements along trajectories, or run a BFS check.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Mode::Fork)]
        mode: Mode,
        /// Trajectory to check; random trajectories are used without it.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Random trajectory length (default 2n).
        #[arg(long)]
        length: Option<usize>,
        /// Breadth-first check instead: sign-coherence, or no all-red state
        /// in rank3 mode.
        #[arg(long)]
        bfs: bool,
        /// Reading of the base condition on the pivot row.
        #[arg(long, value_enum, default_value_t = Reading::NeighboursOnly)]
        reading: Reading,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Breadth-first exploration of the mutation class.
    Explore {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
        /// Snapshot file (JSONL) written after the run.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        /// Continue from the snapshot instead of reading an input.
        #[arg(long, requires = "snapshot")]
        resume: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Graphviz rendering.
    Dot {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Seeded random quiver.
    Gen {
        #[arg(long, value_enum, default_value_t = GenKind::Abundant)]
        kind: GenKind,
        #[arg(short, long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "2..5")]
        weights: WeightRange,
        /// Fork kind: random steps after reaching the fork.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let depth = |fallback: usize| cli.depth.unwrap_or(fallback);
    match &cli.command {
        Command::Mutate { input, seq, out } => commands::mutate(input, seq.as_deref(), out.format),
        Command::Classify { input, out } => commands::classify_cmd(input, out.format),
        Command::FindFork { input, out } => commands::find_fork_cmd(input, cli.seed, out.format),
        Command::Redden { input, mode, out } => commands::redden(
            input,
            *mode,
            depth(forkred_core::reddening::DEFAULT_URED_DEPTH),
            out.format,
        ),
        Command::Ured { input, out } => commands::ured(
            input,
            depth(forkred_core::reddening::DEFAULT_URED_DEPTH),
            out.format,
        ),
        Command::Verify {
            input,
            mode,
            seq,
            count,
            length,
            bfs,
            reading,
            out,
        } => commands::verify(
            input,
            VerifyArgs {
                seq: seq.as_deref(),
                mode: *mode,
                count: *count,
                length: *length,
                seed: cli.seed,
                bfs: *bfs,
                depth: depth(FALLBACK_DEPTH),
                reading: match reading {
                    Reading::NeighboursOnly => ConditionReading::NeighboursOnly,
                    Reading::AllVertices => ConditionReading::AllVertices,
                },
            },
            out.format,
        ),
        Command::Explore {
            input,
            max_nodes,
            snapshot,
            resume,
            out,
        } => commands::explore(
            input,
            ExploreArgs {
                depth: depth(FALLBACK_DEPTH),
                max_nodes: *max_nodes,
                snapshot: snapshot.clone(),
                resume: *resume,
            },
            out.format,
        ),
        Command::Dot { input } => commands::dot(input),
        Command::Gen {
            kind,
            n,
            weights,
            extra,
            out,
        } => commands::gen(*kind, *n, *weights, cli.seed, *extra, out.format),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
