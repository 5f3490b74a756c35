use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::{OptimError, OptimResult};

/// Objective or constraint function over a decision vector.
pub type VectorFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Box-bounded minimization problem. Constraints are feasible when `g(x) <= 0`.
#[derive(Clone)]
pub struct Problem {
    bounds: Vec<(f64, f64)>,
    objectives: Vec<VectorFn>,
    constraints: Vec<VectorFn>,
    budget: usize,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("bounds", &self.bounds)
            .field("objectives", &self.objectives.len())
            .field("constraints", &self.constraints.len())
            .field("budget", &self.budget)
            .finish()
    }
}

impl Problem {
    pub fn new(bounds: Vec<(f64, f64)>) -> OptimResult<Self> {
        if bounds.is_empty() {
            return Err(OptimError::InvalidProblem(
                "dimension must be at least 1".into(),
            ));
        }
        if let Some((i, (lo, hi))) = bounds.iter().enumerate().find(|(_, (lo, hi))| !(lo < hi)) {
            return Err(OptimError::InvalidProblem(format!(
                "bound {i}: [{lo}, {hi}] is empty"
            )));
        }
        Ok(Self {
            bounds,
            objectives: Vec::new(),
            constraints: Vec::new(),
            budget: usize::MAX,
        })
    }

    /// Same bounds on every coordinate.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> OptimResult<Self> {
        Self::new(vec![(lo, hi); dim])
    }

    pub fn objective(mut self, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.objectives.push(Arc::new(f));
        self
    }

    pub fn constraint(mut self, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.constraints.push(Arc::new(g));
        self
    }

    /// Upper limit on objective evaluations (counted per decision vector).
    pub fn budget(mut self, evaluations: usize) -> Self {
        self.budget = evaluations;
        self
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn objective_count(&self) -> usize {
        self.objectives.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn evaluation_budget(&self) -> usize {
        self.budget
    }

    pub(crate) fn validate(&self) -> OptimResult<()> {
        if self.objectives.is_empty() {
            return Err(OptimError::InvalidProblem(
                "at least one objective is required".into(),
            ));
        }
        Ok(())
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *v = if v.is_nan() { *lo } else { v.clamp(*lo, *hi) };
        }
    }

    pub fn in_bounds(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.bounds)
            .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Evaluates one position without touching any budget.
    pub fn evaluate(&self, x: &[f64]) -> Individual {
        let objectives = self.objectives.iter().map(|f| f(x)).collect();
        let violation = self
            .constraints
            .iter()
            .map(|g| g(x).max(0.0))
            .fold(0.0, |acc, v| acc + v);
        Individual {
            position: x.to_vec(),
            objectives,
            violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub position: Vec<f64>,
    pub objectives: Vec<f64>,
    /// Sum of positive constraint values.
    pub violation: f64,
}

impl Individual {
    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }

    pub fn objective(&self) -> f64 {
        self.objectives[0]
    }
}

/// Counts evaluations against the budget and runs each batch in parallel.
pub(crate) struct Evaluator<'a> {
    problem: &'a Problem,
    used: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem) -> Self {
        Self { problem, used: 0 }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.problem.budget - self.used
    }

    /// Evaluates as many leading positions as the budget allows, in order.
    pub fn batch(&mut self, mut positions: Vec<Vec<f64>>) -> Vec<Individual> {
        positions.truncate(self.remaining());
        for p in &positions {
            assert!(
                self.problem.in_bounds(p),
                "position escaped its bounds: {p:?}"
            );
        }
        self.used += positions.len();
        let problem = self.problem;
        positions.par_iter().map(|p| problem.evaluate(p)).collect()
    }

    pub fn one(&mut self, position: Vec<f64>) -> Option<Individual> {
        self.batch(vec![position]).pop()
    }
}
