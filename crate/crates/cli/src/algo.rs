//! `algo`: analytics over a CSR projection, keyed by external vertex id.

use serde_json::{json, Map, Value};
use strata::algos::{self, Matrix, PageRankMode, DEFAULT_DAMPING, UNREACHABLE};
use strata::csr::{GraphView, Projection};
use strata::store::{GraphStore, PropertyValue};

use crate::config::{CliConfig, Format};
use crate::data::open_store;
use crate::output::emit;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AlgoName {
    Pagerank,
    Wcc,
    Scc,
    Cdlp,
    Lcc,
    Bfs,
    Sssp,
    Triangles,
    Mst,
    Maxflow,
    Pca,
}

#[derive(Debug, clap::Args)]
pub struct AlgoArgs {
    #[arg(value_enum)]
    pub name: AlgoName,
    /// Restrict vertices to this label.
    #[arg(long)]
    pub label: Option<String>,
    /// Restrict edges to this relationship type.
    #[arg(long)]
    pub rel_type: Option<String>,
    /// Numeric edge property used as weight or capacity.
    #[arg(long)]
    pub weight: Option<String>,
    /// External id of the source vertex.
    #[arg(long)]
    pub source: Option<u64>,
    /// External id of the sink vertex.
    #[arg(long)]
    pub target: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    pub damping: f64,
    /// Rounds for pagerank (default 20) and cdlp (default 10).
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Run pagerank until the L1 change is below this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Comma-separated numeric node properties, or one vector property, for pca.
    #[arg(long, value_delimiter = ',')]
    pub keys: Vec<String>,
    /// Number of principal components.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

fn vertex(view: &GraphView, ext: Option<u64>, what: &str) -> CliResult<usize> {
    let ext = ext.ok_or_else(|| CliError::Input(format!("--{what} is required")))?;
    view.external_ids()
        .iter()
        .position(|&e| e == ext)
        .ok_or_else(|| CliError::Input(format!("{what} vertex {ext} is not in the projection")))
}

fn per_vertex(view: &GraphView, values: impl Iterator<Item = Value>) -> Value {
    let mut pairs: Vec<(u64, Value)> = view.external_ids().iter().copied().zip(values).collect();
    pairs.sort_by_key(|p| p.0);
    Value::Array(pairs.into_iter().map(|(id, v)| json!([id, v])).collect())
}

pub fn algo(cfg: &CliConfig, args: &AlgoArgs) -> CliResult<()> {
    let store = open_store(cfg)?;
    let report = match args.name {
        AlgoName::Pca => pca(&store, args)?,
        _ => {
            let projection = Projection {
                label: args.label.clone(),
                rel_type: args.rel_type.clone(),
                weight_key: args.weight.clone(),
                build_reverse: true,
            };
            let view = GraphView::project(&store, &projection)?;
            graph_algo(&view, args)?
        }
    };
    match cfg.format {
        Format::Json => emit(cfg, &report),
        Format::Table => print_table(&report),
    }
    Ok(())
}

fn print_table(report: &Value) {
    let Value::Object(map) = report else { return };
    for (k, v) in map {
        match (k.as_str(), v) {
            ("values", Value::Array(rows)) => {
                for row in rows {
                    if let Some([id, x]) = row.as_array().map(Vec::as_slice) {
                        println!(
                            "{id} {}",
                            match x {
                                Value::Null => "infinity".to_owned(),
                                other => other.to_string(),
                            }
                        );
                    }
                }
            }
            (_, Value::Array(_) | Value::Object(_)) => println!("# {k}: {v}"),
            (_, other) => println!("# {k}={other}"),
        }
    }
}

fn graph_algo(view: &GraphView, args: &AlgoArgs) -> CliResult<Value> {
    let name = format!("{:?}", args.name).to_lowercase();
    let mut out = Map::new();
    out.insert("algorithm".into(), json!(name));
    out.insert("vertices".into(), json!(view.vertex_count()));
    out.insert("edges".into(), json!(view.edge_count()));
    match args.name {
        AlgoName::Pagerank => {
            let mode = match args.tolerance {
                Some(epsilon) => PageRankMode::Tolerance {
                    epsilon,
                    max_iterations: args.iterations.unwrap_or(100),
                },
                None => PageRankMode::Iterations(args.iterations.unwrap_or(20)),
            };
            let r = algos::page_rank(view, args.damping, mode)?;
            out.insert("iterations".into(), json!(r.iterations));
            out.insert("converged".into(), json!(r.converged));
            out.insert(
                "values".into(),
                per_vertex(view, r.ranks.into_iter().map(|x| json!(x))),
            );
        }
        AlgoName::Wcc | AlgoName::Scc => {
            let labels = if args.name == AlgoName::Wcc {
                algos::wcc(view)
            } else {
                algos::scc(view)
            };
            let mut distinct = labels.clone();
            distinct.sort_unstable();
            distinct.dedup();
            out.insert("components".into(), json!(distinct.len()));
            out.insert(
                "values".into(),
                per_vertex(view, labels.into_iter().map(|x| json!(x))),
            );
        }
        AlgoName::Cdlp => {
            let labels = algos::cdlp(view, args.iterations.unwrap_or(10))?;
            out.insert(
                "values".into(),
                per_vertex(view, labels.into_iter().map(|x| json!(x))),
            );
        }
        AlgoName::Lcc => {
            out.insert(
                "values".into(),
                per_vertex(view, algos::lcc(view).into_iter().map(|x| json!(x))),
            );
        }
        AlgoName::Bfs => {
            let s = vertex(view, args.source, "source")?;
            let depth = algos::bfs(view, s)?;
            let values = depth.into_iter().map(|d| {
                if d == UNREACHABLE {
                    Value::Null
                } else {
                    json!(d)
                }
            });
            out.insert("values".into(), per_vertex(view, values));
        }
        AlgoName::Sssp => {
            let s = vertex(view, args.source, "source")?;
            let dist = algos::sssp_dijkstra(view, s)?;
            out.insert(
                "values".into(),
                per_vertex(view, dist.into_iter().map(|d| json!(d))),
            );
        }
        AlgoName::Triangles => {
            let t = algos::triangle_count(view);
            out.insert("total".into(), json!(t.total));
            out.insert(
                "values".into(),
                per_vertex(view, t.per_vertex.into_iter().map(|x| json!(x))),
            );
        }
        AlgoName::Mst => {
            let f = algos::mst_prim(view);
            let ext = view.external_ids();
            let edges: Vec<Value> = f
                .edges
                .iter()
                .map(|&(a, b, w)| json!([ext[a as usize], ext[b as usize], w]))
                .collect();
            out.insert("total_weight".into(), json!(f.total_weight));
            out.insert("edges".into(), Value::Array(edges));
        }
        AlgoName::Maxflow => {
            let s = vertex(view, args.source, "source")?;
            let t = vertex(view, args.target, "target")?;
            out.insert("flow".into(), json!(algos::max_flow(view, s, t)?));
        }
        AlgoName::Pca => unreachable!("pca reads node properties, not a projection"),
    }
    Ok(Value::Object(out))
}

fn pca(store: &GraphStore, args: &AlgoArgs) -> CliResult<Value> {
    if args.keys.is_empty() {
        return Err(CliError::Input("pca needs --keys".into()));
    }
    let mut ids: Vec<_> = match &args.label {
        Some(l) => match store.label_id(l) {
            Some(label) => store.nodes_with_label(label).collect(),
            None => Vec::new(),
        },
        None => store.nodes().collect(),
    };
    ids.sort_unstable();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(ids.len());
    let mut externals = Vec::with_capacity(ids.len());
    for &id in &ids {
        let node = store.node(id)?;
        let mut row = Vec::new();
        for key in &args.keys {
            match node.property(key) {
                Some(PropertyValue::Int(i)) => row.push(*i as f64),
                Some(PropertyValue::Float(f)) => row.push(*f),
                Some(PropertyValue::Vector(v)) if args.keys.len() == 1 => {
                    row.extend(v.iter().map(|&x| x as f64))
                }
                _ => {
                    return Err(CliError::Input(format!(
                        "node {} has no numeric property {key:?}",
                        node.external_id()
                    )))
                }
            }
        }
        if rows
            .first()
            .is_some_and(|r: &Vec<f64>| r.len() != row.len())
        {
            return Err(CliError::Input(
                "vector properties differ in dimension".into(),
            ));
        }
        rows.push(row);
        externals.push(node.external_id());
    }
    if rows.is_empty() {
        return Err(CliError::Input("no nodes to analyse".into()));
    }
    let r = algos::pca(&Matrix::from_rows(&rows), args.k)?;
    let components: Vec<Vec<f64>> = (0..args.k).map(|j| r.components.column(j)).collect();
    let mut projected: Vec<(u64, Vec<f64>)> = externals
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, r.projected.row(i).to_vec()))
        .collect();
    projected.sort_by_key(|p| p.0);
    Ok(json!({
        "algorithm": "pca",
        "method": format!("{:?}", r.method),
        "explained_variance": r.explained_variance,
        "explained_variance_ratio": r.explained_variance_ratio,
        "components": components,
        "mean": r.mean,
        "degenerate": r.degenerate,
        "values": projected.into_iter().map(|(e, p)| json!([e, p])).collect::<Vec<_>>(),
    }))
}
