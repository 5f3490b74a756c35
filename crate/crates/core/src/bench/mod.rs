//! Validation and benchmarking harness.
//!
//! - [`datasets`]: desk-scale synthetic datasets and the file loader
//! - [`reference`]: brute-force reference implementations and reference files
//! - [`validate`]: reference-file validation of the analytics routines
//! - [`ablation`]: materialization-mode latency comparison
//! - [`throughput`]: ingest and point-lookup throughput

pub mod ablation;
pub mod datasets;
pub mod reference;
pub mod throughput;
pub mod validate;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::algos::AlgoError;
use crate::csr::CsrError;
use crate::query::QueryError;
use crate::store::StoreError;

pub use ablation::{run_ablation, AblationConfig, AblationReport, ModeTimings, Timing};
pub use datasets::{desk_datasets, load_dataset, DeskDataset, LoadedDataset};
pub use reference::{generate_reference, RawGraph, RefValue, Reference, ORACLE_LIMIT};
pub use throughput::{bench_ingest, bench_oltp, peak_memory_kb, IngestReport, OltpReport};
pub use validate::{
    prepare_desk_suite, read_manifest, run_suite, validate, validate_output, CaseReport,
    ComparisonMode, ValidationAlgorithm, ValidationCase, ValidationReport, MANIFEST,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{file} line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("graph has {n} vertices; reference oracles accept at most {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("reference file {0} does not exist")]
    MissingReference(PathBuf),
    #[error("materialization modes disagree on {0}")]
    Inequivalent(String),
    #[error("invalid benchmark parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Csr(#[from] CsrError),
    #[error(transparent)]
    Algo(#[from] AlgoError),
    #[error(transparent)]
    Query(#[from] QueryError),
}

pub type BenchResult<T> = Result<T, BenchError>;

pub(crate) fn io_err(path: &Path, e: impl std::fmt::Display) -> BenchError {
    BenchError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    }
}
