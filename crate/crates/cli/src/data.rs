//! The data directory and input conversion.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use strata::query::Params;
use strata::store::{load_graphalytics, GraphStore, LoadOptions, PropertyValue, StoreDump};

use crate::config::CliConfig;
use crate::output::emit;
use crate::{CliError, CliResult};

pub const STORE_FILE: &str = "store.json";

#[derive(Debug, clap::Args)]
pub struct IngestArgs {
    /// One vertex id per line.
    #[arg(long)]
    pub vertices: PathBuf,
    /// `src dst [weight]` per line.
    #[arg(long)]
    pub edges: PathBuf,
    /// Store each edge in both directions.
    #[arg(long)]
    pub undirected: bool,
    /// Require a weight column.
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, default_value = "Vertex")]
    pub label: String,
    #[arg(long, default_value = "EDGE")]
    pub rel_type: String,
    /// Replace the existing store instead of failing when one exists.
    #[arg(long)]
    pub replace: bool,
}

pub fn store_path(cfg: &CliConfig) -> PathBuf {
    cfg.data_dir.join(STORE_FILE)
}

pub fn open_store(cfg: &CliConfig) -> CliResult<GraphStore> {
    let path = store_path(cfg);
    if !path.exists() {
        return Ok(GraphStore::new());
    }
    let file = File::open(&path).map_err(|e| CliError::io(&path, e))?;
    let dump: StoreDump = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(GraphStore::restore(&dump)?)
}

pub fn save_store(cfg: &CliConfig, store: &GraphStore) -> CliResult<()> {
    std::fs::create_dir_all(&cfg.data_dir).map_err(|e| CliError::io(&cfg.data_dir, e))?;
    let path = store_path(cfg);
    let tmp = path.with_extension("json.tmp");
    let text = serde_json::to_vec(&store.dump()).map_err(|e| CliError::Input(e.to_string()))?;
    std::fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

pub fn ingest(cfg: &CliConfig, args: &IngestArgs) -> CliResult<()> {
    if store_path(cfg).exists() && !args.replace {
        return Err(CliError::Input(format!(
            "{} already holds a store; pass --replace to overwrite it",
            cfg.data_dir.display()
        )));
    }
    let opts = LoadOptions {
        directed: !args.undirected,
        weighted: args.weighted,
        label: args.label.clone(),
        rel_type: args.rel_type.clone(),
        ..LoadOptions::default()
    };
    let start = Instant::now();
    let (store, _) = load_graphalytics(open(&args.vertices)?, open(&args.edges)?, &opts)?;
    let elapsed = start.elapsed().as_secs_f64();
    save_store(cfg, &store)?;
    let report = json!({
        "nodes": store.node_count(),
        "edges": store.edge_count(),
        "elapsed_secs": elapsed,
    });
    emit(cfg, &report);
    Ok(())
}

/// Converts a JSON object into query parameters. Integral numbers become
/// ints, numeric arrays become vectors.
pub fn parse_params(text: &str) -> CliResult<Params> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("--params: {e}")))?;
    let serde_json::Value::Object(map) = value else {
        return Err(CliError::Input("--params must be a JSON object".into()));
    };
    map.into_iter()
        .map(|(k, v)| Ok((k.clone(), property(&k, v)?)))
        .collect()
}

fn property(key: &str, v: serde_json::Value) -> CliResult<PropertyValue> {
    use serde_json::Value as J;
    Ok(match v {
        J::Null => PropertyValue::Null,
        J::Bool(b) => PropertyValue::Bool(b),
        J::Number(n) => match n.as_i64() {
            Some(i) => PropertyValue::Int(i),
            None => PropertyValue::Float(n.as_f64().unwrap_or(f64::NAN)),
        },
        J::String(s) => PropertyValue::String(s),
        J::Array(items) => PropertyValue::Vector(
            items
                .iter()
                .map(|x| x.as_f64().map(|f| f as f32))
                .collect::<Option<Vec<f32>>>()
                .ok_or_else(|| {
                    CliError::Input(format!("parameter {key}: arrays must be numeric"))
                })?,
        ),
        J::Object(_) => {
            return Err(CliError::Input(format!(
                "parameter {key}: nested objects are not supported"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_types() {
        let p = parse_params(r#"{"a": 3, "b": 2.5, "c": "x", "d": [1, 2], "e": null}"#).unwrap();
        assert_eq!(p["a"], PropertyValue::Int(3));
        assert_eq!(p["b"], PropertyValue::Float(2.5));
        assert_eq!(p["c"], PropertyValue::String("x".into()));
        assert_eq!(p["d"], PropertyValue::Vector(vec![1.0, 2.0]));
        assert_eq!(p["e"], PropertyValue::Null);
        assert!(parse_params("[1]").is_err());
        assert!(parse_params(r#"{"a": {"b": 1}}"#).is_err());
    }
}
