//! `adequacy` — analyze modular representations of small finite groups,
//! build obstruction counterexamples, and scan group families for
//! coset witnesses. Reports are JSON by default (stable field order, byte
//! reproducible for a fixed configuration) or a flattened text rendering.

mod commands;
mod report;
mod scenario;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{Format, Opts};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "adequacy",
    version,
    about = "Exact adequacy checks and obstruction constructions for finite group modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (JSON) describing the group or construction.
    #[arg(long, global = true, value_name = "PATH")]
    scenario: Option<PathBuf>,

    /// The characteristic p; overrides the scenario's "p" key.
    #[arg(long, global = true, value_name = "INT")]
    p: Option<u64>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Json)]
    format: CliFormat,

    /// Seed for randomized searches; overrides the scenario's "seed" key.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,

    /// Refuse to enumerate groups larger than this (default 2000000).
    #[arg(long, global = true, value_name = "INT")]
    max_group_order: Option<u64>,

    /// Directory for cached group enumerations (fallback: ADEQUACY_CACHE_DIR).
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,

    /// Worker threads for parallel scans (default: available cores).
    #[arg(long, global = true, value_name = "INT")]
    threads: Option<usize>,

    /// Upper bound for family scans over L2(q) (default 200).
    #[arg(long, global = true, value_name = "INT")]
    q_max: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full adequacy report (spanning, cohomology, and counting conditions).
    Analyze,
    /// Build a counterexample family instance and certify its obstruction.
    Construct,
    /// Look for a coset of a subgroup containing no p-regular element.
    CosetSearch,
    /// Dimension of first cohomology with trivial coefficients.
    H1,
    /// Count p-regular elements and flag dimensions too large to span.
    Census {
        /// Skip the catalog: screen one COUNT,DIM pair directly.
        #[arg(long, value_name = "COUNT,DIM")]
        literal: Option<String>,
    },
    /// Scan the family L2(q) for Sylow-p coset obstructions.
    ScanPsl2 {
        /// Stop at the first witness instead of scanning all q.
        #[arg(long)]
        first: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Opts {
        scenario_path: cli.scenario,
        p: cli.p,
        q_max: cli.q_max,
        seed: cli.seed,
        max_group_order: cli.max_group_order,
        threads: cli.threads,
        cache_dir: cli.cache_dir,
        format: match cli.format {
            CliFormat::Json => Format::Json,
            CliFormat::Text => Format::Text,
        },
    };
    let outcome = match &cli.command {
        Command::Analyze => commands::cmd_analyze(&opts),
        Command::Construct => commands::cmd_construct(&opts),
        Command::CosetSearch => commands::cmd_coset_search(&opts),
        Command::H1 => commands::cmd_h1(&opts),
        Command::Census { literal } => commands::cmd_census(&opts, literal.as_deref()),
        Command::ScanPsl2 { first } => commands::cmd_scan_psl2(&opts, *first),
    };
    match outcome {
        Ok(rendered) => {
            print!("{rendered}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_limit() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
