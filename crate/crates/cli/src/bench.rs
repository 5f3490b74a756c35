//! `bench` and `validate`.

use std::path::PathBuf;

use clap::Subcommand;
use serde_json::{json, Value};
use strata::bench::{
    bench_ingest, bench_oltp, prepare_desk_suite, read_manifest, run_ablation, run_suite,
    AblationConfig, MANIFEST,
};

use crate::config::{CliConfig, Format};
use crate::output::emit;
use crate::{CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Bulk-create random nodes and edges.
    Ingest {
        #[arg(long, default_value_t = 1_000_000)]
        nodes: usize,
        #[arg(long, default_value_t = 5_000_000)]
        edges: usize,
    },
    /// Time 1- and 2-hop queries under each materialization mode.
    Ablation {
        #[arg(long, default_value_t = 100_000)]
        nodes: usize,
        #[arg(long, default_value_t = 10)]
        degree: usize,
        #[arg(long, default_value_t = 8)]
        properties: usize,
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
    /// Indexed point lookups with a 1-hop expansion.
    Oltp {
        #[arg(long, default_value_t = 100_000)]
        nodes: usize,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
    },
}

#[derive(Debug, clap::Args)]
pub struct ValidateArgs {
    /// Manifest listing the cases; the built-in suite is generated when absent.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Where to write the built-in suite (default: <data-dir>/validation).
    #[arg(long, conflicts_with = "manifest")]
    pub dir: Option<PathBuf>,
}

fn with_config(cfg: &CliConfig, name: &str, result: Value) -> Value {
    json!({ "benchmark": name, "config": cfg, "result": result })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn bench(cfg: &CliConfig, cmd: &BenchCommand) -> CliResult<()> {
    match *cmd {
        BenchCommand::Ingest { nodes, edges } => {
            let (_, report) = bench_ingest(nodes, edges, cfg.seed)?;
            emit(cfg, &with_config(cfg, "ingest", to_value(&report)));
        }
        BenchCommand::Ablation {
            nodes,
            degree,
            properties,
            runs,
        } => {
            let ac = AblationConfig {
                nodes,
                degree,
                properties,
                runs,
                seed: cfg.seed,
            };
            let report = run_ablation(&ac)?;
            match cfg.format {
                Format::Json => emit(cfg, &with_config(cfg, "ablation", to_value(&report))),
                Format::Table => print!("{}", report.to_text()),
            }
        }
        BenchCommand::Oltp { nodes, queries } => {
            let report = bench_oltp(nodes, queries, cfg.seed)?;
            emit(cfg, &with_config(cfg, "oltp", to_value(&report)));
        }
    }
    Ok(())
}

pub fn validate(cfg: &CliConfig, args: &ValidateArgs) -> CliResult<()> {
    let cases = match &args.manifest {
        Some(m) => read_manifest(m)?,
        None => {
            let dir = args
                .dir
                .clone()
                .unwrap_or_else(|| cfg.data_dir.join("validation"));
            let cases = prepare_desk_suite(&dir, cfg.seed)?;
            eprintln!("wrote {}", dir.join(MANIFEST).display());
            cases
        }
    };
    let report = run_suite(&cases)?;
    match cfg.format {
        Format::Json => emit(cfg, &with_config(cfg, "validate", to_value(&report))),
        Format::Table => print!("{}", report.to_text()),
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::ValidationFailed {
            passed: report.passed,
            total: report.total,
        })
    }
}
