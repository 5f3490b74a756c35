//! `strata` command-line interface.

mod algo;
mod bench;
mod config;
mod data;
mod output;
mod query;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::{CliConfig, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Store(#[from] strata::store::StoreError),
    #[error(transparent)]
    Query(#[from] strata::query::QueryError),
    #[error(transparent)]
    Csr(#[from] strata::csr::CsrError),
    #[error(transparent)]
    Algo(#[from] strata::algos::AlgoError),
    #[error(transparent)]
    Optim(#[from] strata::optim::OptimError),
    #[error(transparent)]
    Bench(#[from] strata::bench::BenchError),
    #[error("validation failed: {passed}/{total} cases passed")]
    ValidationFailed { passed: usize, total: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "strata",
    version,
    about = "Property graph store, query engine and analytics"
)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, env = "STRATA_CONFIG")]
    config: Option<PathBuf>,
    /// Directory holding the persisted store.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a vertex file and an edge file into the data directory.
    Ingest(data::IngestArgs),
    /// Run one statement.
    Query(query::QueryArgs),
    /// Read statements from stdin, one per line.
    Shell(query::ShellArgs),
    /// Run a graph algorithm over a projection of the store.
    Algo(algo::AlgoArgs),
    /// Solve an optimization problem described by a JSON file.
    Solve(solve::SolveArgs),
    /// Throughput and ablation benchmarks.
    #[command(subcommand)]
    Bench(bench::BenchCommand),
    /// Check algorithm outputs against reference files.
    Validate(bench::ValidateArgs),
}

fn resolve_config(cli: &Cli) -> CliResult<CliConfig> {
    let mut cfg = match &cli.config {
        Some(path) => CliConfig::from_file(path)?,
        None => CliConfig::default(),
    };
    if let Some(d) = &cli.data_dir {
        cfg.data_dir = d.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = resolve_config(&cli)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Ingest(a) => data::ingest(&cfg, &a),
        Command::Query(a) => query::query(&cfg, &a),
        Command::Shell(a) => query::shell(&cfg, &a),
        Command::Algo(a) => algo::algo(&cfg, &a),
        Command::Solve(a) => solve::solve_command(&cfg, &a),
        Command::Bench(c) => bench::bench(&cfg, &c),
        Command::Validate(a) => bench::validate(&cfg, &a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
