use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::{Params, SolverConfig};
use super::dominance::{crowding_distance, hypervolume_2d, non_dominated_sort};
use super::problem::{Evaluator, Individual, Problem};
use super::solvers::random_position;

pub(crate) struct MultiOutcome {
    pub front: Vec<Individual>,
    pub front_sizes: Vec<usize>,
    pub hypervolume: Vec<f64>,
}

/// Rank (front number) and crowding distance per member.
fn rank_and_crowd(pop: &[Individual]) -> (Vec<Vec<usize>>, Vec<usize>, Vec<f64>) {
    let fronts = non_dominated_sort(pop);
    let mut rank = vec![0; pop.len()];
    let mut crowd = vec![0.0; pop.len()];
    for (r, f) in fronts.iter().enumerate() {
        for (&i, c) in f.iter().zip(crowding_distance(pop, f)) {
            rank[i] = r;
            crowd[i] = c;
        }
    }
    (fronts, rank, crowd)
}

fn sbx(a: &mut [f64], b: &mut [f64], eta: f64, rng: &mut ChaCha8Rng) {
    for j in 0..a.len() {
        if rng.random::<f64>() >= 0.5 || (a[j] - b[j]).abs() < 1e-14 {
            continue;
        }
        let u: f64 = rng.random();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
        };
        let (x1, x2) = (a[j], b[j]);
        a[j] = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
        b[j] = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
    }
}

fn polynomial_mutation(x: &mut [f64], bounds: &[(f64, f64)], eta: f64, rng: &mut ChaCha8Rng) {
    let rate = 1.0 / x.len() as f64;
    for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
        if rng.random::<f64>() >= rate {
            continue;
        }
        let u: f64 = rng.random();
        let delta = if u < 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0)) - 1.0
        } else {
            1.0 - (2.0 * (1.0 - u)).powf(1.0 / (eta + 1.0))
        };
        *v += delta * (hi - lo);
    }
}

fn front_points(pop: &[Individual], front: &[usize]) -> Vec<(f64, f64)> {
    front
        .iter()
        .filter(|&&i| pop[i].is_feasible())
        .map(|&i| (pop[i].objectives[0], pop[i].objectives[1]))
        .collect()
}

pub(crate) fn run(
    problem: &Problem,
    cfg: &SolverConfig,
    params: &Params,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
) -> MultiOutcome {
    let (eta_c, eta_m, cx) = (
        params.get("eta_c"),
        params.get("eta_m"),
        params.get("crossover_rate"),
    );
    let p = cfg.population;
    let init: Vec<Vec<f64>> = (0..p).map(|_| random_position(problem, rng)).collect();
    let mut pop = eval.batch(init);
    let two = problem.objective_count() == 2;
    // reference point fixed from the initial population
    let reference = if two && !pop.is_empty() {
        let axis = |k: usize| {
            let (lo, hi) = pop
                .iter()
                .map(|i| i.objectives[k])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                    (a.min(v), b.max(v))
                });
            hi + (0.1 * (hi - lo)).max(1e-9)
        };
        Some((axis(0), axis(1)))
    } else {
        None
    };
    let (mut fronts, mut rank, mut crowd) = rank_and_crowd(&pop);
    let mut front_sizes = vec![fronts.first().map_or(0, Vec::len)];
    let mut hypervolume = Vec::new();
    let mut best_hv = 0.0;
    let mut track_hv = |pop: &[Individual], fronts: &[Vec<usize>], out: &mut Vec<f64>| {
        if let (Some(r), Some(f0)) = (reference, fronts.first()) {
            best_hv = f64::max(best_hv, hypervolume_2d(&front_points(pop, f0), r));
            out.push(best_hv);
        }
    };
    track_hv(&pop, &fronts, &mut hypervolume);

    for _ in 0..cfg.iterations {
        if eval.remaining() == 0 || pop.len() < 2 {
            break;
        }
        let pick = |rng: &mut ChaCha8Rng| {
            let (a, b) = (
                rng.random_range(0..pop.len()),
                rng.random_range(0..pop.len()),
            );
            let a_wins = rank[a] < rank[b] || (rank[a] == rank[b] && crowd[a] >= crowd[b]);
            if a_wins {
                a
            } else {
                b
            }
        };
        let mut children: Vec<Vec<f64>> = Vec::with_capacity(p);
        while children.len() < p {
            let (i, j) = (pick(rng), pick(rng));
            let mut c1 = pop[i].position.clone();
            let mut c2 = pop[j].position.clone();
            if rng.random::<f64>() < cx {
                sbx(&mut c1, &mut c2, eta_c, rng);
            }
            for c in [&mut c1, &mut c2] {
                polynomial_mutation(c, problem.bounds(), eta_m, rng);
                problem.clamp(c);
            }
            children.push(c1);
            if children.len() < p {
                children.push(c2);
            }
        }
        let offspring = eval.batch(children);
        let mut combined = std::mem::take(&mut pop);
        combined.extend(offspring);
        let (all_fronts, _, _) = rank_and_crowd(&combined);
        let mut keep: Vec<usize> = Vec::with_capacity(p);
        for f in &all_fronts {
            if keep.len() + f.len() <= p {
                keep.extend_from_slice(f);
                continue;
            }
            let d = crowding_distance(&combined, f);
            let mut order: Vec<usize> = (0..f.len()).collect();
            order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
            keep.extend(order.into_iter().take(p - keep.len()).map(|k| f[k]));
            break;
        }
        let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
        pop = keep
            .iter()
            .map(|&i| slots[i].take().expect("each index kept once"))
            .collect();
        (fronts, rank, crowd) = rank_and_crowd(&pop);
        front_sizes.push(fronts.first().map_or(0, Vec::len));
        track_hv(&pop, &fronts, &mut hypervolume);
    }
    let front = fronts
        .first()
        .map(|f| f.iter().map(|&i| pop[i].clone()).collect())
        .unwrap_or_default();
    MultiOutcome {
        front,
        front_sizes,
        hypervolume,
    }
}
