use rand::Rng;
use strata::optim::{constrained_dominates, Individual};

pub fn random_population(seed: u64, n: usize, m: usize, infeasible_rate: f64) -> Vec<Individual> {
    let mut r = super::rng(seed);
    (0..n)
        .map(|_| Individual {
            position: vec![],
            objectives: (0..m).map(|_| r.random_range(0..5) as f64).collect(),
            violation: if r.random_bool(infeasible_rate) {
                r.random_range(1..4) as f64
            } else {
                0.0
            },
        })
        .collect()
}

/// Peel fronts by repeatedly taking every member nobody remaining dominates.
pub fn naive_fronts(pop: &[Individual]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..pop.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| {
                !left
                    .iter()
                    .any(|&j| constrained_dominates(&pop[j], &pop[i]))
            })
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}
