use serde::{Deserialize, Serialize};

use super::{OptimError, OptimResult, Problem};
use crate::store::{GraphStore, NodeId, PropertyValue};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub property: String,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub min: Option<f64>,
}

/// Per-node bounds read from properties; absent keys fall back to `[0, 1]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundsSpec {
    #[serde(default)]
    pub lower: Option<String>,
    #[serde(default)]
    pub upper: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphProblemSpec {
    pub label: String,
    pub objectives: Vec<String>,
    #[serde(default)]
    pub constraints: Vec<ConstraintSpec>,
    #[serde(default)]
    pub bounds: Option<BoundsSpec>,
}

/// A problem whose variable `i` is the activation of `nodes[i]`.
#[derive(Debug, Clone)]
pub struct GraphProblem {
    pub problem: Problem,
    pub nodes: Vec<NodeId>,
}

fn numeric(store: &GraphStore, node: NodeId, key: &str) -> OptimResult<f64> {
    match store.node_unchecked(node).property(key) {
        Some(PropertyValue::Int(i)) => Ok(*i as f64),
        Some(PropertyValue::Float(f)) => Ok(*f),
        _ => Err(OptimError::NonNumericProperty {
            node,
            key: key.to_owned(),
        }),
    }
}

fn linear(coeffs: Vec<f64>, offset: f64) -> impl Fn(&[f64]) -> f64 + Send + Sync + 'static {
    move |x: &[f64]| coeffs.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() + offset
}

/// Builds a linear problem over the nodes carrying `spec.label`, in
/// ascending id order. Objective `k` is `Σ coeff_k,i · x_i`; a `max c`
/// constraint becomes `Σ p_i · x_i − c ≤ 0` and `min c` becomes
/// `c − Σ p_i · x_i ≤ 0`.
pub fn bind_graph_problem(
    store: &GraphStore,
    spec: &GraphProblemSpec,
) -> OptimResult<GraphProblem> {
    let label = store
        .label_id(&spec.label)
        .ok_or_else(|| OptimError::UnknownLabel(spec.label.clone()))?;
    let mut nodes: Vec<NodeId> = store.nodes_with_label(label).collect();
    nodes.sort_unstable();
    if nodes.is_empty() {
        return Err(OptimError::UnknownLabel(spec.label.clone()));
    }
    let column = |key: &str| {
        nodes
            .iter()
            .map(|&n| numeric(store, n, key))
            .collect::<OptimResult<Vec<f64>>>()
    };
    let bounds_spec = spec.bounds.clone().unwrap_or_default();
    let lower = match &bounds_spec.lower {
        Some(k) => column(k)?,
        None => vec![0.0; nodes.len()],
    };
    let upper = match &bounds_spec.upper {
        Some(k) => column(k)?,
        None => vec![1.0; nodes.len()],
    };
    let mut problem = Problem::new(lower.into_iter().zip(upper).collect())?;
    for key in &spec.objectives {
        problem = problem.objective(linear(column(key)?, 0.0));
    }
    for c in &spec.constraints {
        let p = column(&c.property)?;
        if c.max.is_none() && c.min.is_none() {
            return Err(OptimError::InvalidProblem(format!(
                "constraint on {} needs max or min",
                c.property
            )));
        }
        if let Some(max) = c.max {
            problem = problem.constraint(linear(p.clone(), -max));
        }
        if let Some(min) = c.min {
            problem = problem.constraint(linear(p.iter().map(|v| -v).collect(), min));
        }
    }
    Ok(GraphProblem { problem, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generators() -> GraphStore {
        let mut s = GraphStore::new();
        for (cost, load) in [(1.0, 100.0), (2.0, 200.0), (3.0, 100.0)] {
            s.create_node(
                &["Generator"],
                [
                    ("cost", PropertyValue::Float(cost)),
                    ("load", PropertyValue::Float(load)),
                ],
            )
            .unwrap();
        }
        s
    }

    fn spec(constraints: Vec<ConstraintSpec>) -> GraphProblemSpec {
        GraphProblemSpec {
            label: "Generator".into(),
            objectives: vec!["cost".into()],
            constraints,
            bounds: None,
        }
    }

    #[test]
    fn linear_objective_and_constraint() {
        let store = generators();
        let c = ConstraintSpec {
            property: "load".into(),
            max: Some(500.0),
            min: None,
        };
        let g = bind_graph_problem(&store, &spec(vec![c])).unwrap();
        let ind = g.problem.evaluate(&[1.0, 1.0, 1.0]);
        assert_eq!(ind.objectives, vec![6.0]);
        assert_eq!(ind.violation, 0.0);
        assert_eq!(g.problem.bounds(), &[(0.0, 1.0); 3]);
        let tight = ConstraintSpec {
            property: "load".into(),
            max: Some(300.0),
            min: None,
        };
        let g = bind_graph_problem(&store, &spec(vec![tight])).unwrap();
        assert_eq!(g.problem.evaluate(&[1.0, 1.0, 1.0]).violation, 100.0);
    }

    #[test]
    fn errors() {
        let mut store = generators();
        let mut s = spec(vec![]);
        s.label = "Plant".into();
        assert!(matches!(
            bind_graph_problem(&store, &s),
            Err(OptimError::UnknownLabel(_))
        ));
        store
            .create_node(&["Generator"], [("load", PropertyValue::Float(5.0))])
            .unwrap();
        assert!(matches!(
            bind_graph_problem(&store, &spec(vec![])),
            Err(OptimError::NonNumericProperty { .. })
        ));
    }
}
