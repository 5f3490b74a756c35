use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{OptimError, OptimResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    Jaya,
    Rao1,
    Tlbo,
    Pso,
    De,
    Ga,
    Sa,
    Nsga2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Jaya,
        Algorithm::Rao1,
        Algorithm::Tlbo,
        Algorithm::Pso,
        Algorithm::De,
        Algorithm::Ga,
        Algorithm::Sa,
        Algorithm::Nsga2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Jaya => "JAYA",
            Algorithm::Rao1 => "RAO1",
            Algorithm::Tlbo => "TLBO",
            Algorithm::Pso => "PSO",
            Algorithm::De => "DE",
            Algorithm::Ga => "GA",
            Algorithm::Sa => "SA",
            Algorithm::Nsga2 => "NSGA2",
        }
    }

    pub fn is_multi_objective(self) -> bool {
        self == Algorithm::Nsga2
    }

    /// Tunable parameters and their defaults.
    pub fn parameter_schema(self) -> &'static [(&'static str, f64)] {
        match self {
            Algorithm::Jaya | Algorithm::Rao1 | Algorithm::Tlbo => &[],
            Algorithm::Pso => &[
                ("inertia", 0.729),
                ("cognitive", 1.49445),
                ("social", 1.49445),
            ],
            Algorithm::De => &[("f", 0.5), ("cr", 0.9)],
            Algorithm::Ga => &[
                ("tournament_size", 2.0),
                ("crossover_rate", 0.9),
                ("mutation_sigma", 0.1),
            ],
            Algorithm::Sa => &[("alpha", 0.95)],
            Algorithm::Nsga2 => &[("eta_c", 15.0), ("eta_m", 20.0), ("crossover_rate", 0.9)],
        }
    }

    fn min_population(self) -> usize {
        if self == Algorithm::Sa {
            2
        } else {
            4
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = OptimError;
    fn from_str(s: &str) -> OptimResult<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        let norm = if norm == "NSGAII" {
            "NSGA2".to_owned()
        } else {
            norm
        };
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == norm)
            .ok_or_else(|| OptimError::UnknownAlgorithm(s.to_owned()))
    }
}

impl TryFrom<String> for Algorithm {
    type Error = OptimError;
    fn try_from(s: String) -> OptimResult<Self> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.name().to_owned()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    #[serde(default = "default_population")]
    pub population: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

fn default_population() -> usize {
    50
}

fn default_iterations() -> usize {
    200
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            population: default_population(),
            iterations: default_iterations(),
            seed: 0,
            params: BTreeMap::new(),
        }
    }

    pub fn population(mut self, n: usize) -> Self {
        self.population = n;
        self
    }

    pub fn iterations(mut self, n: usize) -> Self {
        self.iterations = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_owned(), value);
        self
    }

    /// Checks population size and parameter names, returning every schema
    /// parameter resolved against its default.
    pub fn resolve(&self) -> OptimResult<Params> {
        if self.population < self.algorithm.min_population() {
            return Err(OptimError::ConfigMismatch(format!(
                "{} needs a population of at least {}",
                self.algorithm,
                self.algorithm.min_population()
            )));
        }
        let schema = self.algorithm.parameter_schema();
        if let Some(extra) = self
            .params
            .keys()
            .find(|k| !schema.iter().any(|(n, _)| n == k))
        {
            return Err(OptimError::InvalidParameter {
                algorithm: self.algorithm,
                name: extra.clone(),
            });
        }
        let values = schema
            .iter()
            .map(|(n, d)| (*n, self.params.get(*n).copied().unwrap_or(*d)))
            .collect();
        Ok(Params { values })
    }
}

#[derive(Debug, Clone)]
pub struct Params {
    values: Vec<(&'static str, f64)>,
}

impl Params {
    pub(crate) fn get(&self, name: &str) -> f64 {
        self.values
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .expect("parameter in schema")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_free_solvers_reject_extras() {
        for a in [Algorithm::Jaya, Algorithm::Rao1, Algorithm::Tlbo] {
            let err = SolverConfig::new(a)
                .param("inertia", 0.5)
                .resolve()
                .unwrap_err();
            assert!(matches!(err, OptimError::InvalidParameter { .. }));
        }
        let p = SolverConfig::new(Algorithm::Pso)
            .param("inertia", 0.5)
            .resolve()
            .unwrap();
        assert_eq!(p.get("inertia"), 0.5);
        assert_eq!(p.get("social"), 1.49445);
    }

    #[test]
    fn names_and_json() {
        assert_eq!("nsga-ii".parse::<Algorithm>().unwrap(), Algorithm::Nsga2);
        assert_eq!("Rao-1".parse::<Algorithm>().unwrap(), Algorithm::Rao1);
        let c: SolverConfig =
            serde_json::from_str(r#"{"algorithm":"de","population":20,"seed":3}"#).unwrap();
        assert_eq!(c.algorithm, Algorithm::De);
        assert_eq!(c.iterations, 200);
        assert!(SolverConfig::new(Algorithm::Ga)
            .population(3)
            .resolve()
            .is_err());
        assert!(SolverConfig::new(Algorithm::Sa)
            .population(2)
            .resolve()
            .is_ok());
    }
}
