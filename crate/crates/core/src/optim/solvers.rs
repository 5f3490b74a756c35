//! Single-objective population and trajectory solvers.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::config::{Algorithm, Params, SolverConfig};
use super::dominance::{better, scalar_cmp};
use super::problem::{Evaluator, Individual, Problem};

/// Best individual under constrained comparison, plus the best feasible
/// objective seen after each iteration.
pub(crate) struct Tracker {
    pub best: Option<Individual>,
    best_feasible: f64,
    pub trace: Vec<f64>,
}

impl Tracker {
    pub fn new() -> Self {
        Self {
            best: None,
            best_feasible: f64::INFINITY,
            trace: Vec::new(),
        }
    }

    pub fn observe(&mut self, inds: &[Individual]) {
        for i in inds {
            if self.best.as_ref().is_none_or(|b| better(i, b)) {
                self.best = Some(i.clone());
            }
            if i.is_feasible() && i.objective() < self.best_feasible {
                self.best_feasible = i.objective();
            }
        }
    }

    pub fn record(&mut self) {
        self.trace.push(self.best_feasible);
    }
}

pub(crate) fn random_position(problem: &Problem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    problem
        .bounds()
        .iter()
        .map(|(lo, hi)| rng.random_range(*lo..*hi))
        .collect()
}

fn argbest(pop: &[Individual]) -> usize {
    (1..pop.len()).fold(0, |b, i| if better(&pop[i], &pop[b]) { i } else { b })
}

fn argworst(pop: &[Individual]) -> usize {
    (1..pop.len()).fold(0, |w, i| {
        if scalar_cmp(&pop[i], &pop[w]).is_gt() {
            i
        } else {
            w
        }
    })
}

/// Replaces members by candidates that strictly improve on them. Returns
/// false when the budget cut the batch short.
fn greedy_merge(
    pop: &mut [Individual],
    evaluated: Vec<Individual>,
    expected: usize,
    tracker: &mut Tracker,
) -> bool {
    tracker.observe(&evaluated);
    let complete = evaluated.len() == expected;
    for (i, c) in evaluated.into_iter().enumerate() {
        if better(&c, &pop[i]) {
            pop[i] = c;
        }
    }
    complete
}

pub(crate) fn run(
    problem: &Problem,
    cfg: &SolverConfig,
    params: &Params,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
    tracker: &mut Tracker,
) {
    if cfg.algorithm == Algorithm::Sa {
        return annealing(problem, cfg, params, rng, eval, tracker);
    }
    let init: Vec<Vec<f64>> = (0..cfg.population)
        .map(|_| random_position(problem, rng))
        .collect();
    let mut pop = eval.batch(init);
    tracker.observe(&pop);
    tracker.record();
    if pop.len() < cfg.population {
        return;
    }
    match cfg.algorithm {
        Algorithm::Jaya | Algorithm::Rao1 => {
            jaya_family(problem, cfg, rng, eval, tracker, &mut pop)
        }
        Algorithm::Tlbo => tlbo(problem, cfg, rng, eval, tracker, &mut pop),
        Algorithm::Pso => pso(problem, cfg, params, rng, eval, tracker, pop),
        Algorithm::De => de(problem, cfg, params, rng, eval, tracker, &mut pop),
        Algorithm::Ga => ga(problem, cfg, params, rng, eval, tracker, pop),
        Algorithm::Sa | Algorithm::Nsga2 => unreachable!("dispatched elsewhere"),
    }
}

fn jaya_family(
    problem: &Problem,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
    tracker: &mut Tracker,
    pop: &mut [Individual],
) {
    let rao = cfg.algorithm == Algorithm::Rao1;
    for _ in 0..cfg.iterations {
        if eval.remaining() == 0 {
            break;
        }
        let best = pop[argbest(pop)].position.clone();
        let worst = pop[argworst(pop)].position.clone();
        let cands: Vec<Vec<f64>> = pop
            .iter()
            .map(|ind| {
                let mut x: Vec<f64> = ind
                    .position
                    .iter()
                    .enumerate()
                    .map(|(j, &xj)| {
                        let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                        if rao {
                            xj + r1 * (best[j] - worst[j])
                        } else {
                            xj + r1 * (best[j] - xj.abs()) - r2 * (worst[j] - xj.abs())
                        }
                    })
                    .collect();
                problem.clamp(&mut x);
                x
            })
            .collect();
        let n = cands.len();
        let done = !greedy_merge(pop, eval.batch(cands), n, tracker);
        tracker.record();
        if done {
            break;
        }
    }
}

fn tlbo(
    problem: &Problem,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
    tracker: &mut Tracker,
    pop: &mut [Individual],
) {
    let d = problem.dimension();
    let p = pop.len();
    for _ in 0..cfg.iterations {
        if eval.remaining() == 0 {
            break;
        }
        let teacher = pop[argbest(pop)].position.clone();
        let mut mean = vec![0.0; d];
        for ind in pop.iter() {
            mean.iter_mut()
                .zip(&ind.position)
                .for_each(|(m, x)| *m += x);
        }
        mean.iter_mut().for_each(|m| *m /= p as f64);
        let cands: Vec<Vec<f64>> = pop
            .iter()
            .map(|ind| {
                let tf = rng.random_range(1..=2) as f64;
                let mut x: Vec<f64> = (0..d)
                    .map(|j| ind.position[j] + rng.random::<f64>() * (teacher[j] - tf * mean[j]))
                    .collect();
                problem.clamp(&mut x);
                x
            })
            .collect();
        if !greedy_merge(pop, eval.batch(cands), p, tracker) {
            tracker.record();
            break;
        }

        let cands: Vec<Vec<f64>> = (0..p)
            .map(|i| {
                let mut partner = rng.random_range(0..p - 1);
                if partner >= i {
                    partner += 1;
                }
                let (a, b) = (&pop[i], &pop[partner]);
                let toward = better(a, b);
                let mut x: Vec<f64> = (0..d)
                    .map(|j| {
                        let r: f64 = rng.random();
                        let step = if toward {
                            a.position[j] - b.position[j]
                        } else {
                            b.position[j] - a.position[j]
                        };
                        a.position[j] + r * step
                    })
                    .collect();
                problem.clamp(&mut x);
                x
            })
            .collect();
        let done = !greedy_merge(pop, eval.batch(cands), p, tracker);
        tracker.record();
        if done {
            break;
        }
    }
}

fn pso(
    problem: &Problem,
    cfg: &SolverConfig,
    params: &Params,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
    tracker: &mut Tracker,
    pop: Vec<Individual>,
) {
    let (w, c1, c2) = (
        params.get("inertia"),
        params.get("cognitive"),
        params.get("social"),
    );
    let base = pop;
    let d = problem.dimension();
    let vmax: Vec<f64> = problem.bounds().iter().map(|(lo, hi)| hi - lo).collect();
    let mut xs: Vec<Vec<f64>> = base.iter().map(|i| i.position.clone()).collect();
    let mut vs = vec![vec![0.0; d]; xs.len()];
    let mut pbest = base;
    for _ in 0..cfg.iterations {
        if eval.remaining() == 0 {
            break;
        }
        let g = pbest[argbest(&pbest)].position.clone();
        for (i, (x, v)) in xs.iter_mut().zip(vs.iter_mut()).enumerate() {
            for j in 0..d {
                let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                v[j] =
                    (w * v[j] + c1 * r1 * (pbest[i].position[j] - x[j]) + c2 * r2 * (g[j] - x[j]))
                        .clamp(-vmax[j], vmax[j]);
                x[j] += v[j];
            }
            problem.clamp(x);
        }
        let n = xs.len();
        let done = !greedy_merge(&mut pbest, eval.batch(xs.clone()), n, tracker);
        tracker.record();
        if done {
            break;
        }
    }
}

fn de(
    problem: &Problem,
    cfg: &SolverConfig,
    params: &Params,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
    tracker: &mut Tracker,
    pop: &mut [Individual],
) {
    let (f, cr) = (params.get("f"), params.get("cr"));
    let (p, d) = (pop.len(), problem.dimension());
    for _ in 0..cfg.iterations {
        if eval.remaining() == 0 {
            break;
        }
        let cands: Vec<Vec<f64>> = (0..p)
            .map(|i| {
                let mut pick = [i; 3];
                for k in 0..3 {
                    loop {
                        let r = rng.random_range(0..p);
                        if r != i && !pick[..k].contains(&r) {
                            pick[k] = r;
                            break;
                        }
                    }
                }
                let [a, b, c] = pick.map(|r| &pop[r].position);
                let jrand = rng.random_range(0..d);
                let mut x: Vec<f64> = (0..d)
                    .map(|j| {
                        if rng.random::<f64>() < cr || j == jrand {
                            a[j] + f * (b[j] - c[j])
                        } else {
                            pop[i].position[j]
                        }
                    })
                    .collect();
                problem.clamp(&mut x);
                x
            })
            .collect();
        let evaluated = eval.batch(cands);
        tracker.observe(&evaluated);
        let done = evaluated.len() < p;
        for (i, t) in evaluated.into_iter().enumerate() {
            // trial replaces the target unless strictly worse
            if !better(&pop[i], &t) {
                pop[i] = t;
            }
        }
        tracker.record();
        if done {
            break;
        }
    }
}

fn tournament<'a>(pop: &'a [Individual], size: usize, rng: &mut ChaCha8Rng) -> &'a Individual {
    let mut best = rng.random_range(0..pop.len());
    for _ in 1..size {
        let c = rng.random_range(0..pop.len());
        if better(&pop[c], &pop[best]) {
            best = c;
        }
    }
    &pop[best]
}

fn ga(
    problem: &Problem,
    cfg: &SolverConfig,
    params: &Params,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
    tracker: &mut Tracker,
    mut pop: Vec<Individual>,
) {
    let size = params.get("tournament_size").round().max(1.0) as usize;
    let cx = params.get("crossover_rate");
    let sigma = params.get("mutation_sigma");
    let d = problem.dimension();
    let rate = 1.0 / d as f64;
    let noise: Vec<Normal<f64>> = problem
        .bounds()
        .iter()
        .map(|(lo, hi)| Normal::new(0.0, sigma * (hi - lo)).expect("finite sigma"))
        .collect();
    let p = pop.len();
    for _ in 0..cfg.iterations {
        if eval.remaining() == 0 {
            break;
        }
        let elite = pop[argbest(&pop)].clone();
        let mut children: Vec<Vec<f64>> = Vec::with_capacity(p - 1);
        while children.len() < p - 1 {
            let a = tournament(&pop, size, rng).position.clone();
            let b = tournament(&pop, size, rng).position.clone();
            let (mut c1, mut c2) = (a, b);
            if rng.random::<f64>() < cx {
                for j in 0..d {
                    if rng.random::<f64>() < 0.5 {
                        std::mem::swap(&mut c1[j], &mut c2[j]);
                    }
                }
            }
            for c in [&mut c1, &mut c2] {
                for j in 0..d {
                    if rng.random::<f64>() < rate {
                        c[j] += noise[j].sample(rng);
                    }
                }
                problem.clamp(c);
            }
            children.push(c1);
            if children.len() < p - 1 {
                children.push(c2);
            }
        }
        let evaluated = eval.batch(children);
        tracker.observe(&evaluated);
        tracker.record();
        if evaluated.len() < p - 1 {
            break;
        }
        pop = std::iter::once(elite).chain(evaluated).collect();
    }
}

/// Temperature-level loop: `population` single-coordinate moves per level,
/// geometric cooling between levels.
fn annealing(
    problem: &Problem,
    cfg: &SolverConfig,
    params: &Params,
    rng: &mut ChaCha8Rng,
    eval: &mut Evaluator,
    tracker: &mut Tracker,
) {
    let alpha = params.get("alpha");
    let samples: Vec<Vec<f64>> = (0..100).map(|_| random_position(problem, rng)).collect();
    let sampled = eval.batch(samples);
    tracker.observe(&sampled);
    tracker.record();
    if sampled.is_empty() {
        return;
    }
    let values: Vec<f64> = sampled
        .iter()
        .map(|i| i.objective())
        .filter(|v| v.is_finite())
        .collect();
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let spread = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
        / values.len().max(1) as f64)
        .sqrt();
    let mut temperature = if spread > 0.0 && spread.is_finite() {
        spread
    } else {
        1.0
    };
    let mut current = sampled[argbest(&sampled)].clone();
    let steps: Vec<Normal<f64>> = problem
        .bounds()
        .iter()
        .map(|(lo, hi)| Normal::new(0.0, 0.1 * (hi - lo)).expect("finite range"))
        .collect();
    'levels: for _ in 0..cfg.iterations {
        for _ in 0..cfg.population {
            let mut x = current.position.clone();
            let c = rng.random_range(0..x.len());
            x[c] += steps[c].sample(rng);
            problem.clamp(&mut x);
            let Some(cand) = eval.one(x) else {
                tracker.record();
                break 'levels;
            };
            tracker.observe(std::slice::from_ref(&cand));
            let accept = if better(&cand, &current) {
                true
            } else {
                let delta = match (cand.is_feasible(), current.is_feasible()) {
                    (true, true) => Some(cand.objective() - current.objective()),
                    (false, false) => Some(cand.violation - current.violation),
                    _ => None,
                };
                let u: f64 = rng.random();
                delta.is_some_and(|dl| u < (-dl / temperature).exp())
            };
            if accept {
                current = cand;
            }
        }
        temperature *= alpha;
        tracker.record();
    }
}
