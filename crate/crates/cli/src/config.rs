//! Layered configuration: built-in defaults, then a TOML file, then flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use strata::query::cost::CostModel;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverDefaults {
    pub population: usize,
    pub iterations: usize,
}

impl Default for SolverDefaults {
    fn default() -> Self {
        SolverDefaults {
            population: 50,
            iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub data_dir: PathBuf,
    /// Worker threads for analytics and solvers; 0 lets the pool decide.
    pub threads: usize,
    pub batch_size: usize,
    pub format: Format,
    pub seed: u64,
    pub cost: CostModel,
    pub solver: SolverDefaults,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            data_dir: PathBuf::from("strata-data"),
            threads: 0,
            batch_size: strata::query::BATCH_SIZE,
            format: Format::Json,
            seed: 42,
            cost: CostModel::default(),
            solver: SolverDefaults::default(),
        }
    }
}

impl CliConfig {
    pub fn from_file(path: &Path) -> Result<CliConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.batch_size != strata::query::BATCH_SIZE {
            return Err(CliError::Config(format!(
                "batch_size {} is not supported; the executor uses {}",
                self.batch_size,
                strata::query::BATCH_SIZE
            )));
        }
        Ok(())
    }
}
