//! `solve`: a JSON problem description in, a deterministic JSON result out.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::{json, Value};
use strata::optim::{
    bind_graph_problem, solve, Algorithm, GraphProblemSpec, Individual, Problem, SolverConfig,
};

use crate::config::CliConfig;
use crate::data::open_store;
use crate::output::emit;
use crate::{CliError, CliResult};

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    /// Path to a JSON problem file, or the JSON itself.
    pub problem: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// `Σ x²`.
    Sphere,
    /// `10d + Σ (x² − 10 cos 2πx)`.
    Rastrigin,
    /// `Σ x²` subject to `1 − Σ x ≤ 0`.
    ConstrainedSphere,
    /// Two objectives `x₀` and `1 − x₀` on `[0, 1]`; every point is Pareto optimal.
    LinearFront,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Builtin {
        name: Builtin,
        #[serde(default)]
        dimension: Option<usize>,
        #[serde(default)]
        lower: Option<f64>,
        #[serde(default)]
        upper: Option<f64>,
    },
    Graph(GraphProblemSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSpec {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub population: Option<usize>,
    #[serde(default)]
    pub iterations: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub problem: ProblemSpec,
}

fn builtin(
    name: Builtin,
    dimension: Option<usize>,
    lower: Option<f64>,
    upper: Option<f64>,
) -> CliResult<Problem> {
    let (d, lo, hi) = match name {
        Builtin::LinearFront => (
            dimension.unwrap_or(1),
            lower.unwrap_or(0.0),
            upper.unwrap_or(1.0),
        ),
        _ => (
            dimension.unwrap_or(10),
            lower.unwrap_or(-5.12),
            upper.unwrap_or(5.12),
        ),
    };
    let p = Problem::uniform(d, lo, hi)?;
    Ok(match name {
        Builtin::Sphere => p.objective(|x| x.iter().map(|v| v * v).sum()),
        Builtin::Rastrigin => p.objective(|x| {
            10.0 * x.len() as f64
                + x.iter()
                    .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos())
                    .sum::<f64>()
        }),
        Builtin::ConstrainedSphere => p
            .objective(|x| x.iter().map(|v| v * v).sum())
            .constraint(|x| 1.0 - x.iter().sum::<f64>()),
        Builtin::LinearFront => p.objective(|x| x[0]).objective(|x| 1.0 - x[0]),
    })
}

fn individual(i: &Individual) -> Value {
    json!({
        "position": i.position,
        "objectives": i.objectives,
        "violation": i.violation,
        "feasible": i.is_feasible(),
    })
}

/// Solves the described problem. The output contains no timings, so equal inputs give
/// byte-identical output.
pub fn run_spec(cfg: &CliConfig, spec: &SolveSpec) -> CliResult<Value> {
    let mut nodes = None;
    let mut problem = match &spec.problem {
        ProblemSpec::Builtin {
            name,
            dimension,
            lower,
            upper,
        } => builtin(*name, *dimension, *lower, *upper)?,
        ProblemSpec::Graph(g) => {
            let store = open_store(cfg)?;
            let bound = bind_graph_problem(&store, g)?;
            let ext: Vec<u64> = bound
                .nodes
                .iter()
                .map(|&id| store.external_id(id))
                .collect::<Result<_, _>>()?;
            nodes = Some(ext);
            bound.problem
        }
    };
    if let Some(b) = spec.budget {
        problem = problem.budget(b);
    }
    let config = SolverConfig {
        algorithm: spec.algorithm,
        population: spec.population.unwrap_or(cfg.solver.population),
        iterations: spec.iterations.unwrap_or(cfg.solver.iterations),
        seed: spec.seed.unwrap_or(cfg.seed),
        params: spec.params.clone(),
    };
    let r = solve(&problem, &config)?;
    let mut out = json!({
        "algorithm": r.algorithm,
        "config": config,
        "evaluations": r.evaluations,
        "best": r.best.as_ref().map(individual),
        "pareto_front": r.pareto_front.iter().map(individual).collect::<Vec<_>>(),
        "front_sizes": r.front_sizes,
        "hypervolume": r.hypervolume.last(),
        "trace": r.trace,
    });
    if let Some(n) = nodes {
        out["nodes"] = json!(n);
    }
    Ok(out)
}

pub fn solve_command(cfg: &CliConfig, args: &SolveArgs) -> CliResult<()> {
    let text = if args.problem.trim_start().starts_with('{') {
        args.problem.clone()
    } else {
        let path = PathBuf::from(&args.problem);
        std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?
    };
    let spec: SolveSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("problem: {e}")))?;
    emit(cfg, &run_spec(cfg, &spec)?);
    Ok(())
}
