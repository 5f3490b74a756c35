//! Metaheuristic optimization.
//!
//! Eight solvers share one [`Problem`] abstraction. Candidate positions are
//! generated sequentially from a seeded RNG and evaluated in parallel, so a
//! run is reproducible regardless of the worker count. NSGA-II ranks by
//! constrained dominance; the single-objective solvers compare feasibility
//! first, then violation, then objective. [`bind_graph_problem`] turns
//! labelled nodes into decision variables.

mod config;
mod dominance;
mod graph;
mod nsga2;
mod problem;
mod solvers;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use config::{Algorithm, Params, SolverConfig};
pub use dominance::{constrained_dominates, crowding_distance, hypervolume_2d, non_dominated_sort};
pub use graph::{bind_graph_problem, BoundsSpec, ConstraintSpec, GraphProblem, GraphProblemSpec};
pub use problem::{Individual, Problem, VectorFn};

use crate::store::{NodeId, StoreError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("{algorithm} does not accept parameter {name:?}")]
    InvalidParameter { algorithm: Algorithm, name: String },
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("label {0:?} has no nodes")]
    UnknownLabel(String),
    #[error("property {key:?} on node {node} is missing or not numeric")]
    NonNumericProperty { node: NodeId, key: String },
    #[error(transparent)]
    Store(#[from] StoreError),
}

pub type OptimResult<T> = Result<T, OptimError>;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub algorithm: Algorithm,
    /// Single-objective runs: best individual under constrained comparison.
    pub best: Option<Individual>,
    /// Best feasible objective after each iteration (infinite until one is found).
    pub trace: Vec<f64>,
    /// Multi-objective runs: first front of the final population.
    pub pareto_front: Vec<Individual>,
    /// Size of the first front after each generation.
    pub front_sizes: Vec<usize>,
    /// Best-so-far hypervolume per generation (two objectives only).
    pub hypervolume: Vec<f64>,
    pub evaluations: usize,
}

pub fn solve(problem: &Problem, config: &SolverConfig) -> OptimResult<SolverResult> {
    problem.validate()?;
    let params = config.resolve()?;
    let multi = problem.objective_count() > 1;
    if multi && !config.algorithm.is_multi_objective() {
        return Err(OptimError::ConfigMismatch(format!(
            "{} is single-objective but the problem has {} objectives",
            config.algorithm,
            problem.objective_count()
        )));
    }
    if !multi && config.algorithm.is_multi_objective() {
        return Err(OptimError::ConfigMismatch(format!(
            "{} needs at least two objectives",
            config.algorithm
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut eval = problem::Evaluator::new(problem);
    let mut result = SolverResult {
        algorithm: config.algorithm,
        best: None,
        trace: Vec::new(),
        pareto_front: Vec::new(),
        front_sizes: Vec::new(),
        hypervolume: Vec::new(),
        evaluations: 0,
    };
    if multi {
        let out = nsga2::run(problem, config, &params, &mut rng, &mut eval);
        result.pareto_front = out.front;
        result.front_sizes = out.front_sizes;
        result.hypervolume = out.hypervolume;
    } else {
        let mut tracker = solvers::Tracker::new();
        solvers::run(problem, config, &params, &mut rng, &mut eval, &mut tracker);
        result.best = tracker.best;
        result.trace = tracker.trace;
    }
    result.evaluations = eval.used();
    Ok(result)
}
