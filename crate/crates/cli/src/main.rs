//! `grl`: build, check and tabulate generalized Roth-Lempel codes.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 1 when a check disagrees with what was claimed, 2 for usage or invariant
//! errors and 3 when a search does not fit the enumeration budget.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grl_core::code::{SearchOptions, DEFAULT_BUDGET};
use grl_core::par::Exec;

#[derive(Parser, Debug)]
#[command(
    name = "grl",
    version,
    about = "Generalized Roth-Lempel codes, NMDS tests and quantum parameters"
)]
struct Cli {
    /// Worker threads for the exhaustive kernels; 1 runs everything sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Log progress to stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe GF(q) and its quadratic extension.
    FieldInfo {
        #[arg(long)]
        q: u32,
    },
    /// Build one member of a self-orthogonal family.
    Construct(ConstructArgs),
    /// Re-check a spec (or a `construct --json` output) from a file.
    Verify(VerifyArgs),
    /// Distances and MDS/AMDS/NMDS label of a generator matrix in GFMAT form.
    Classify {
        /// GFMAT v1 file.
        #[arg(long)]
        gfmat: PathBuf,
        /// Also test Hermitian self-orthogonality over GF(q^2).
        #[arg(long)]
        hso: bool,
    },
    /// Replay the six worked examples against their stored parameters.
    Examples {
        #[arg(long)]
        json: bool,
    },
    /// Quantum parameters per family member next to the best known code.
    Table2(Table2Args),
    /// Build and check every in-range family member for the given fields.
    Sweep {
        #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 7, 8, 9])]
        q: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
        families: Vec<u8>,
        /// Skip the exhaustive distance check for families 3 and 4.
        #[arg(long)]
        no_distance: bool,
    },
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    family: u8,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k: u32,
    /// JSON report with spec, code parameters and construction trace (default).
    #[arg(long, conflicts_with = "gfmat")]
    json: bool,
    /// Generator matrix in GFMAT v1 form.
    #[arg(long)]
    gfmat: bool,
    /// Compute distances by enumeration instead of certifying them.
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Spec JSON, or the output of `construct --json`.
    #[arg(long)]
    spec: PathBuf,
    /// Run the NMDS criterion for the number of extra columns.
    #[arg(long)]
    nmds: bool,
    /// Check Hermitian self-orthogonality by criterion and by Gram matrix.
    #[arg(long)]
    hso: bool,
    /// Compute both distances exactly, within the budget.
    #[arg(long)]
    distance: bool,
}

#[derive(Args, Debug)]
struct Table2Args {
    /// Base field orders; defaults to those of the shipped reference rows.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
    families: Vec<u8>,
    /// Known-codes CSV (`n,k,d,d_is_bound,q,source`); defaults to the shipped table.
    #[arg(long)]
    known: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = commands::TableFormat::Table)]
    format: commands::TableFormat,
    /// Compare against the shipped published rows instead; exit 1 on any difference.
    #[arg(long)]
    reference_rows: bool,
}

fn search_options(threads: Option<usize>) -> anyhow::Result<SearchOptions> {
    let budget = match std::env::var("GRL_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map_err(|e| commands::usage(format!("GRL_BUDGET={v:?}: {e}")))?,
        Err(_) => DEFAULT_BUDGET,
    };
    let exec = if threads == Some(1) {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    Ok(SearchOptions { budget, exec })
}

fn configure_threads(threads: Option<usize>) -> anyhow::Result<()> {
    match threads {
        Some(0) => Err(commands::usage("--threads must be at least 1")),
        #[cfg(feature = "parallel")]
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| commands::usage(format!("thread pool: {e}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> anyhow::Result<commands::Status> {
    configure_threads(cli.threads)?;
    let opts = search_options(cli.threads)?;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::FieldInfo { q } => commands::field_info(&mut out, q),
        Command::Construct(a) => {
            let format = if a.gfmat {
                commands::ConstructFormat::Gfmat
            } else {
                commands::ConstructFormat::Json
            };
            commands::construct(&mut out, a.family, a.q, a.m, a.k, format, a.exact, opts)
        }
        Command::Verify(a) => {
            let checks = commands::Checks {
                nmds: a.nmds,
                hso: a.hso,
                distance: a.distance,
            };
            commands::verify(&mut out, &a.spec, checks, opts)
        }
        Command::Classify { gfmat, hso } => commands::classify(&mut out, &gfmat, hso, opts),
        Command::Examples { json } => commands::examples(&mut out, json, opts),
        Command::Table2(a) => commands::table2(
            &mut out,
            &a.q,
            &a.families,
            a.known.as_deref(),
            a.format,
            a.reference_rows,
        ),
        Command::Sweep {
            q,
            families,
            no_distance,
        } => commands::sweep(&mut out, &q, &families, !no_distance, opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) if commands::is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
