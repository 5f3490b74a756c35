mod common;

use common::front_oracle::{naive_fronts, random_population};
use proptest::prelude::*;
use rand::Rng;
use strata::optim::{
    bind_graph_problem, constrained_dominates, non_dominated_sort, solve, Algorithm,
    ConstraintSpec, GraphProblemSpec, Individual, Problem, SolverConfig,
};
use strata::store::{GraphStore, PropertyValue};

fn sphere() -> Problem {
    Problem::uniform(10, -5.0, 5.0)
        .unwrap()
        .objective(|x| x.iter().map(|v| v * v).sum())
        .budget(20_000)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    (xs[xs.len() / 2 - 1] + xs[xs.len() / 2]) / 2.0
}

#[test]
fn sphere_median_best_below_threshold() {
    for algo in [
        Algorithm::Jaya,
        Algorithm::Pso,
        Algorithm::De,
        Algorithm::Tlbo,
    ] {
        let bests: Vec<f64> = (0..10)
            .map(|seed| {
                let cfg = SolverConfig::new(algo)
                    .population(20)
                    .iterations(100_000)
                    .seed(seed);
                let r = solve(&sphere(), &cfg).unwrap();
                assert!(r.evaluations <= 20_000);
                r.best.unwrap().objective()
            })
            .collect();
        let m = median(bests);
        println!("{algo}: median best {m:e}");
        assert!(m < 1e-3, "{algo}: {m}");
    }
}

#[test]
fn nsga2_linear_tradeoff_front() {
    let p = Problem::uniform(1, 0.0, 1.0)
        .unwrap()
        .objective(|x| x[0])
        .objective(|x| 1.0 - x[0]);
    let r = solve(
        &p,
        &SolverConfig::new(Algorithm::Nsga2)
            .population(100)
            .iterations(50)
            .seed(9),
    )
    .unwrap();
    assert!(r.pareto_front.len() >= 20);
    for a in &r.pareto_front {
        assert!((a.objectives.iter().sum::<f64>() - 1.0).abs() <= 1e-6);
        for b in &r.pareto_front {
            assert!(!constrained_dominates(a, b));
        }
    }
    assert!(r.hypervolume.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn sort_matches_naive_and_cdp_holds() {
    for seed in 0..100 {
        let pop = random_population(seed, 50, 3, 0.4);
        let fronts = non_dominated_sort(&pop);
        assert_eq!(fronts, naive_fronts(&pop));
        if pop.iter().any(Individual::is_feasible) {
            assert!(
                fronts[0].iter().all(|&i| pop[i].is_feasible()),
                "seed {seed}"
            );
        }
        let mut all: Vec<usize> = fronts.concat();
        all.sort_unstable();
        assert_eq!(all, (0..50).collect::<Vec<_>>());
    }
}

fn in_box(x: &[f64], lo: f64, hi: f64) -> &[f64] {
    assert!(
        x.iter().all(|v| lo <= *v && *v <= hi),
        "escaped bounds: {x:?}"
    );
    x
}

fn every_config() -> Vec<(Problem, SolverConfig)> {
    let single = Problem::uniform(5, -3.0, 3.0)
        .unwrap()
        .objective(|x| {
            in_box(x, -3.0, 3.0)
                .iter()
                .enumerate()
                .map(|(i, v)| (i as f64 + 1.0) * v * v)
                .sum()
        })
        .constraint(|x| 1.0 - x[0])
        .budget(3000);
    let multi = Problem::uniform(3, 0.0, 1.0)
        .unwrap()
        .objective(|x| in_box(x, 0.0, 1.0)[0])
        .objective(|x| (1.0 - x[0]) * (1.0 + x[1] + x[2]))
        .budget(3000);
    Algorithm::ALL
        .into_iter()
        .map(|a| {
            let p = if a.is_multi_objective() {
                multi.clone()
            } else {
                single.clone()
            };
            (
                p,
                SolverConfig::new(a).population(20).iterations(100).seed(31),
            )
        })
        .collect()
}

#[test]
fn solvers_bit_identical_across_thread_counts() {
    for (p, cfg) in every_config() {
        let base = solve(&p, &cfg).unwrap();
        assert_eq!(solve(&p, &cfg).unwrap(), base);
        for threads in [1, 2, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            assert_eq!(
                pool.install(|| solve(&p, &cfg).unwrap()),
                base,
                "{} on {threads}",
                cfg.algorithm
            );
        }
    }
}

#[test]
fn every_evaluated_position_within_bounds() {
    for (p, cfg) in every_config() {
        let r = solve(&p, &cfg).unwrap();
        assert!(r.evaluations <= 3000);
    }
}

#[test]
fn nsga2_on_bound_graph() {
    let mut store = GraphStore::new();
    let mut r = common::rng(12);
    for _ in 0..20 {
        let props = [
            ("cost", PropertyValue::Float(r.random_range(1.0..10.0))),
            ("emissions", PropertyValue::Float(r.random_range(1.0..10.0))),
            ("load", PropertyValue::Float(r.random_range(10.0..100.0))),
        ];
        store.create_node(&["Generator"], props).unwrap();
    }
    let spec = GraphProblemSpec {
        label: "Generator".into(),
        objectives: vec!["cost".into(), "emissions".into()],
        constraints: vec![ConstraintSpec {
            property: "load".into(),
            max: None,
            min: Some(300.0),
        }],
        bounds: None,
    };
    let g = bind_graph_problem(&store, &spec).unwrap();
    assert_eq!(g.nodes.len(), 20);
    assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
    let res = solve(
        &g.problem,
        &SolverConfig::new(Algorithm::Nsga2)
            .population(60)
            .iterations(80)
            .seed(3),
    )
    .unwrap();
    assert!(!res.pareto_front.is_empty());
    assert!(res.pareto_front.iter().all(Individual::is_feasible));
    for a in &res.pareto_front {
        for b in &res.pareto_front {
            assert!(!constrained_dominates(a, b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn front_zero_never_dominated(seed in 0u64..1_000_000, n in 1usize..40) {
        let pop = random_population(seed, n, 2, 0.5);
        let fronts = non_dominated_sort(&pop);
        for &i in &fronts[0] {
            prop_assert!(!pop.iter().any(|o| constrained_dominates(o, &pop[i])));
        }
    }
}
