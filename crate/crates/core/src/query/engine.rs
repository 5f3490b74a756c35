use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use serde::Serialize;

use super::ast::{IndexTarget, Literal, Operand, Pattern, Statement};
use super::cost::Statistics;
use super::exec::{execute, ExecContext, Materialization, ProfileReport};
use super::parser::{parse, ExecMode, Parsed};
use super::planner::{plan, PlanNode, PlannerOptions};
use super::value::Value;
use super::{Params, QueryError};
use crate::optim::{bind_graph_problem, solve, Algorithm, GraphProblemSpec, SolverConfig};
use crate::store::{CatalogVersion, GraphStore, NodeId, PropertyValue, SharedStore};
use crate::vector::VectorIndexRegistry;

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct QueryResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileReport>,
}

impl QueryResult {
    fn single(columns: &[&str], row: Vec<Value>) -> QueryResult {
        QueryResult {
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: vec![row],
            profile: None,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// One JSON object per row, keys in RETURN order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push('{');
            for (i, (c, v)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(c).unwrap_or_default());
                out.push(':');
                out.push_str(&serde_json::to_string(v).unwrap_or_else(|_| "null".into()));
            }
            out.push_str("}\n");
        }
        out
    }
}

/// Parse and plan counts since the engine was created.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EngineCounters {
    pub parses: u64,
    pub plans: u64,
    pub plan_cache_hits: u64,
}

struct CachedPlan {
    plan: Arc<PlanNode>,
    version: CatalogVersion,
}

/// Query front end over a shared store.
pub struct Engine {
    store: SharedStore,
    options: RwLock<PlannerOptions>,
    mode: RwLock<Materialization>,
    parsed: Mutex<HashMap<String, Arc<Parsed>>>,
    plans: Mutex<HashMap<String, CachedPlan>>,
    vectors: VectorIndexRegistry,
    parse_count: AtomicU64,
    plan_count: AtomicU64,
    hit_count: AtomicU64,
}

impl Engine {
    pub fn new(store: SharedStore) -> Engine {
        Engine::with_options(store, PlannerOptions::default())
    }

    pub fn with_options(store: SharedStore, options: PlannerOptions) -> Engine {
        Engine {
            store,
            options: RwLock::new(options),
            mode: RwLock::new(Materialization::default()),
            parsed: Mutex::new(HashMap::new()),
            plans: Mutex::new(HashMap::new()),
            vectors: VectorIndexRegistry::new(),
            parse_count: AtomicU64::new(0),
            plan_count: AtomicU64::new(0),
            hit_count: AtomicU64::new(0),
        }
    }

    pub fn store(&self) -> &SharedStore {
        &self.store
    }

    pub fn options(&self) -> PlannerOptions {
        self.options.read().clone()
    }

    pub fn set_options(&self, options: PlannerOptions) {
        *self.options.write() = options;
        self.plans.lock().clear();
    }

    pub fn materialization(&self) -> Materialization {
        *self.mode.read()
    }

    pub fn set_materialization(&self, mode: Materialization) {
        *self.mode.write() = mode;
    }

    pub fn counters(&self) -> EngineCounters {
        EngineCounters {
            parses: self.parse_count.load(Ordering::Relaxed),
            plans: self.plan_count.load(Ordering::Relaxed),
            plan_cache_hits: self.hit_count.load(Ordering::Relaxed),
        }
    }

    pub fn clear_caches(&self) {
        self.parsed.lock().clear();
        self.plans.lock().clear();
    }

    fn parse_cached(&self, text: &str) -> Result<Arc<Parsed>, QueryError> {
        if let Some(p) = self.parsed.lock().get(text) {
            return Ok(Arc::clone(p));
        }
        let parsed = Arc::new(parse(text)?);
        self.parse_count.fetch_add(1, Ordering::Relaxed);
        self.parsed
            .lock()
            .insert(text.to_owned(), Arc::clone(&parsed));
        Ok(parsed)
    }

    /// Plan for a MATCH query plus the literal values lifted out of it.
    fn plan_cached(
        &self,
        store: &GraphStore,
        query: &super::ast::Query,
    ) -> Result<(Arc<PlanNode>, Vec<(String, PropertyValue)>), QueryError> {
        let (abstracted, literals) = query.abstract_literals();
        let key = abstracted.cache_key();
        let current = store.catalog_version();
        if let Some(entry) = self.plans.lock().get(&key) {
            if entry.version.compatible_with(&current) {
                self.hit_count.fetch_add(1, Ordering::Relaxed);
                return Ok((Arc::clone(&entry.plan), literals));
            }
        }
        let stats = statistics(store);
        let planned = Arc::new(plan(&abstracted, &stats, &self.options.read())?);
        self.plan_count.fetch_add(1, Ordering::Relaxed);
        self.plans.lock().insert(
            key,
            CachedPlan {
                plan: Arc::clone(&planned),
                version: current,
            },
        );
        Ok((planned, literals))
    }

    /// The plan `text` would run with, without executing it.
    pub fn explain(&self, text: &str) -> Result<PlanNode, QueryError> {
        let parsed = self.parse_cached(text)?;
        let Statement::Query(q) = &parsed.statement else {
            return Err(QueryError::Semantic("only MATCH queries have plans".into()));
        };
        let store = self.store.read();
        Ok((*self.plan_cached(&store, q)?.0).clone())
    }

    pub fn run(&self, text: &str, params: &Params) -> Result<QueryResult, QueryError> {
        self.run_with(text, params, self.materialization())
    }

    pub fn run_with(
        &self,
        text: &str,
        params: &Params,
        mode: Materialization,
    ) -> Result<QueryResult, QueryError> {
        let parsed = self.parse_cached(text)?;
        match &parsed.statement {
            Statement::Query(q) => {
                let store = self.store.read();
                let (plan, literals) = self.plan_cached(&store, q)?;
                if parsed.mode == ExecMode::Explain {
                    let rows = plan
                        .render()
                        .lines()
                        .map(|l| vec![Value::String(l.to_owned())])
                        .collect();
                    return Ok(QueryResult {
                        columns: vec!["plan".into()],
                        rows,
                        profile: None,
                    });
                }
                let merged;
                let params = if literals.is_empty() {
                    params
                } else {
                    merged = {
                        let mut m = params.clone();
                        m.extend(literals);
                        m
                    };
                    &merged
                };
                let ctx = ExecContext {
                    store: &store,
                    params,
                    mode,
                    vectors: &self.vectors,
                };
                let out = execute(&plan, &ctx)?;
                Ok(QueryResult {
                    columns: out.columns,
                    rows: out.rows,
                    profile: (parsed.mode == ExecMode::Profile).then_some(out.profile),
                })
            }
            Statement::Create(patterns) => {
                let mut store = self.store.write();
                let (nodes, edges) = create(&mut store, patterns, params)?;
                Ok(QueryResult::single(
                    &["nodes_created", "relationships_created"],
                    vec![Value::Int(nodes as i64), Value::Int(edges as i64)],
                ))
            }
            Statement::CreateIndex {
                label,
                keys,
                unique,
            } => {
                let keys: Vec<&str> = keys.iter().map(String::as_str).collect();
                let desc = self.store.write().create_index(label, &keys, *unique)?;
                Ok(QueryResult::single(
                    &["index"],
                    vec![Value::String(desc.name)],
                ))
            }
            Statement::DropIndex(target) => {
                let mut store = self.store.write();
                let name = match target {
                    IndexTarget::Name(n) => n.clone(),
                    IndexTarget::On { label, keys } => store
                        .indexes()
                        .into_iter()
                        .find(|d| d.label == *label && d.keys == *keys)
                        .map(|d| d.name)
                        .ok_or_else(|| {
                            QueryError::Semantic(format!(
                                "no index on :{label}({})",
                                keys.join(", ")
                            ))
                        })?,
                };
                let desc = store.drop_index(&name)?;
                Ok(QueryResult::single(
                    &["dropped"],
                    vec![Value::String(desc.name)],
                ))
            }
            Statement::ShowIndexes | Statement::ShowConstraints => {
                let only_unique = parsed.statement == Statement::ShowConstraints;
                let mut list = self.store.read().indexes();
                list.retain(|d| !only_unique || d.unique);
                list.sort_by(|a, b| a.name.cmp(&b.name));
                let rows = list
                    .into_iter()
                    .map(|d| {
                        vec![
                            Value::String(d.name),
                            Value::String(d.label),
                            Value::List(d.keys.into_iter().map(Value::String).collect()),
                            Value::Bool(d.unique),
                        ]
                    })
                    .collect();
                Ok(QueryResult {
                    columns: ["name", "label", "keys", "unique"]
                        .map(String::from)
                        .to_vec(),
                    rows,
                    profile: None,
                })
            }
            Statement::Solve { config, yields } => self.solve(config, yields, params),
        }
    }

    fn solve(
        &self,
        config: &Literal,
        yields: &[String],
        params: &Params,
    ) -> Result<QueryResult, QueryError> {
        let json = config.to_json(params)?;
        let obj = json
            .as_object()
            .ok_or_else(|| QueryError::Procedure("algo.or.solve expects a map".into()))?;
        let get = |names: &[&str]| names.iter().find_map(|n| obj.get(*n));
        let algorithm: Algorithm = get(&["algorithm"])
            .and_then(|v| v.as_str())
            .ok_or_else(|| QueryError::Procedure("missing algorithm".into()))?
            .parse()?;
        let spec: GraphProblemSpec = serde_json::from_value(json.clone())
            .map_err(|e| QueryError::Procedure(format!("problem description: {e}")))?;
        let mut cfg = SolverConfig::new(algorithm);
        let uint = |names: &[&str]| get(names).and_then(|v| v.as_u64());
        if let Some(p) = uint(&["population_size", "population"]) {
            cfg = cfg.population(p as usize);
        }
        if let Some(i) = uint(&["max_iterations", "iterations"]) {
            cfg = cfg.iterations(i as usize);
        }
        if let Some(s) = uint(&["seed"]) {
            cfg = cfg.seed(s);
        }
        if let Some(serde_json::Value::Object(ps)) = get(&["params"]) {
            for (k, v) in ps {
                let x = v.as_f64().ok_or_else(|| {
                    QueryError::Procedure(format!("parameter {k} must be a number"))
                })?;
                cfg = cfg.param(k, x);
            }
        }
        let (bound, result) = {
            let store = self.store.read();
            let mut bound = bind_graph_problem(&store, &spec)?;
            if let Some(b) = uint(&["budget", "max_evaluations"]) {
                bound.problem = bound.problem.budget(b as usize);
            }
            let result = solve(&bound.problem, &cfg)?;
            (bound, result)
        };
        let floats = |xs: &[f64]| Value::List(xs.iter().map(|x| Value::Float(*x)).collect());
        let default_yields: Vec<String> = if algorithm.is_multi_objective() {
            vec!["pareto_front".into()]
        } else {
            vec!["best".into(), "objective_value".into()]
        };
        let yields = if yields.is_empty() {
            &default_yields[..]
        } else {
            yields
        };
        let mut row = Vec::new();
        for y in yields {
            row.push(match y.as_str() {
                "best" => result
                    .best
                    .as_ref()
                    .map_or(Value::Null, |b| floats(&b.position)),
                "objective_value" => result
                    .best
                    .as_ref()
                    .map_or(Value::Null, |b| Value::Float(b.objectives[0])),
                "objectives" => result
                    .best
                    .as_ref()
                    .map_or(Value::Null, |b| floats(&b.objectives)),
                "feasible" => Value::Bool(result.best.as_ref().is_some_and(|b| b.is_feasible())),
                "nodes" => Value::List(bound.nodes.iter().map(|n| Value::NodeRef(*n)).collect()),
                "pareto_front" => Value::List(
                    result
                        .pareto_front
                        .iter()
                        .map(|ind| {
                            Value::Map(vec![
                                ("variables".into(), floats(&ind.position)),
                                ("objectives".into(), floats(&ind.objectives)),
                            ])
                        })
                        .collect(),
                ),
                "front_size" => Value::Int(result.pareto_front.len() as i64),
                "hypervolume" => result
                    .hypervolume
                    .last()
                    .map_or(Value::Null, |h| Value::Float(*h)),
                "evaluations" => Value::Int(result.evaluations as i64),
                "trace" => floats(&result.trace),
                other => {
                    return Err(QueryError::Semantic(format!(
                        "algo.or.solve has no output {other}"
                    )))
                }
            });
        }
        Ok(QueryResult {
            columns: yields.to_vec(),
            rows: vec![row],
            profile: None,
        })
    }
}

fn statistics(store: &GraphStore) -> Statistics {
    let index_keys = store
        .indexes()
        .into_iter()
        .map(|d| {
            let n = store.index_distinct_keys(&d.name).unwrap_or(0);
            (d.name, n)
        })
        .collect();
    Statistics::new(store.catalog_snapshot(), index_keys)
}

fn resolve(op: &Operand, params: &Params) -> Result<PropertyValue, QueryError> {
    match op {
        Operand::Literal(v) => Ok(v.clone()),
        Operand::Param(p) => params
            .get(p)
            .cloned()
            .ok_or_else(|| QueryError::MissingParameter(p.clone())),
    }
}

/// Creates every node and edge of `patterns`. Nodes sharing a variable are
/// created once; all values are resolved before the store is touched.
fn create(
    store: &mut GraphStore,
    patterns: &[Pattern],
    params: &Params,
) -> Result<(usize, usize), QueryError> {
    let mut order: Vec<String> = Vec::new();
    let mut nodes: HashMap<String, (Option<String>, Vec<(String, PropertyValue)>)> = HashMap::new();
    for p in patterns {
        for n in &p.nodes {
            let entry = nodes.entry(n.var.clone()).or_insert_with(|| {
                order.push(n.var.clone());
                (None, Vec::new())
            });
            if entry.0.is_none() {
                entry.0 = n.label.clone();
            }
            for (k, v) in &n.props {
                entry.1.push((k.clone(), resolve(v, params)?));
            }
        }
    }
    let mut edges = Vec::new();
    for p in patterns {
        for (i, e) in p.edges.iter().enumerate() {
            let (a, b) = (&p.nodes[i].var, &p.nodes[i + 1].var);
            let (src, dst) = match e.dir {
                super::ast::EdgeDir::In => (b, a),
                _ => (a, b),
            };
            let props: Vec<(String, PropertyValue)> = e
                .props
                .iter()
                .map(|(k, v)| Ok((k.clone(), resolve(v, params)?)))
                .collect::<Result<_, QueryError>>()?;
            edges.push((
                src.clone(),
                dst.clone(),
                e.rel_type.clone().unwrap_or_default(),
                props,
            ));
        }
    }
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    for var in &order {
        let (label, props) = &nodes[var];
        let label = label
            .as_deref()
            .ok_or_else(|| QueryError::Semantic(format!("{var} needs a label")))?;
        let id = store.create_node(&[label], props.iter().cloned())?;
        ids.insert(var.clone(), id);
    }
    for (src, dst, rel, props) in &edges {
        store.create_edge(ids[src], ids[dst], rel, props.iter().cloned())?;
    }
    Ok((order.len(), edges.len()))
}
