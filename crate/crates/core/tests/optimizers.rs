use hive_vqe::loss::{Counted, FnObjective, Objective};
use hive_vqe::optim::{
    adam_step, boa_cycle, boa_init, run_optimization, AdamConfig, AdamMoments, BoaConfig, Interval,
    Method, RunSettings, Termination,
};
use proptest::prelude::*;

fn square(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Shifted, anisotropic bowl with a ripple; minimum 0 at (0.3, -1.2, 2.0).
fn rippled(x: &[f64]) -> f64 {
    let c = [0.3, -1.2, 2.0];
    x.iter()
        .zip(c)
        .enumerate()
        .map(|(i, (v, c))| (i + 1) as f64 * (v - c).powi(2) + 0.1 * (3.0 * (v - c)).sin().powi(2))
        .sum()
}

#[test]
fn bees_find_the_bottom_of_a_parabola() {
    let obj = FnObjective::new(1, square);
    let config = BoaConfig::default();
    for seed in 0..20 {
        let mut state = boa_init(&config, &obj, seed).unwrap();
        for _ in 0..50 {
            boa_cycle(&mut state, &config, &obj).unwrap();
        }
        assert!(state.best_position[0].abs() <= 1e-3, "seed {seed}: {:?}", state.best_position);
    }
}

#[test]
fn population_and_best_ever_invariants_over_100_cycles() {
    let obj = FnObjective::new(3, rippled);
    let config = BoaConfig::default();
    for seed in 0..5 {
        let counted = Counted::new(&obj);
        let mut state = boa_init(&config, &counted, seed).unwrap();
        assert_eq!(counted.evaluations(), 10);
        let mut best = state.best_fitness;
        for cycle in 1..=100u64 {
            let before = counted.evaluations();
            let report = boa_cycle(&mut state, &config, &counted).unwrap();
            assert_eq!(counted.evaluations() - before, 60);
            assert_eq!(report.evaluations, 60);
            assert_eq!(state.sites.len(), config.scouts);
            assert_eq!(state.cycle, cycle);
            assert!(state.best_fitness <= best);
            best = state.best_fitness;
            assert!(state.sites.windows(2).all(|w| w[0].fitness <= w[1].fitness));
            for site in &state.sites {
                assert!(site.stagnation < config.stagnation_limit);
                assert!(site.position.iter().all(|&p| config.bounds.contains(p)));
                assert_eq!(site.fitness, rippled(&site.position));
            }
            assert!(state.best_fitness <= state.sites[0].fitness);
        }
    }
}

#[test]
fn initial_scouts_lie_in_bounds() {
    let obj = FnObjective::new(6, square);
    let config = BoaConfig {
        bounds: Interval::new(-0.5, 0.25).unwrap(),
        ..BoaConfig::default()
    };
    let state = boa_init(&config, &obj, 3).unwrap();
    for site in &state.sites {
        assert!(site.position.iter().all(|&p| (-0.5..0.25).contains(&p)));
    }
}

#[test]
fn parallel_and_serial_runs_agree() {
    let obj = FnObjective::new(3, rippled);
    let settings = RunSettings {
        max_iterations: 40,
        target: 1e-9,
        reference: 0.0,
        record_wall_time: false,
    };
    let serial = Method::Boa(BoaConfig {
        parallel: false,
        ..BoaConfig::default()
    });
    let parallel = Method::Boa(BoaConfig::default());
    let a = run_optimization(&obj, &serial, 12, &settings).unwrap();
    let b = run_optimization(&obj, &parallel, 12, &settings).unwrap();
    assert_eq!(a, b);
}

#[test]
fn driver_stops_at_the_target() {
    let obj = FnObjective::new(2, square);
    let settings = RunSettings {
        max_iterations: 300,
        target: 1e-6,
        reference: 0.0,
        record_wall_time: false,
    };
    let out = run_optimization(&obj, &Method::Boa(BoaConfig::default()), 5, &settings).unwrap();
    assert_eq!(out.trace.termination, Termination::TargetReached);
    let last = out.trace.records.last().unwrap();
    assert!(last.abs_error <= 1e-6);
    assert!(out.trace.records[..out.trace.records.len() - 1]
        .iter()
        .all(|r| r.abs_error > 1e-6));
    assert!((obj.value(&out.best_parameters).unwrap() - out.best_value).abs() == 0.0);
}

proptest! {
    #[test]
    fn vanishing_learning_rate_freezes_parameters(
        theta in prop::collection::vec(-3.0..3.0f64, 1..8),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let config = AdamConfig { learning_rate: 1e-300, ..AdamConfig::default() };
        let mut x = theta.clone();
        let mut moments = AdamMoments::zeros(x.len());
        for step in 1..=20 {
            let g: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-5.0..5.0)).collect();
            adam_step(&mut x, &g, &mut moments, &config, step).unwrap();
        }
        for (a, b) in x.iter().zip(&theta) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn bees_keep_population_and_monotone_best(seed in any::<u64>(), dim in 1usize..5) {
        let obj = FnObjective::new(dim, rippled_any);
        let config = BoaConfig { parallel: false, ..BoaConfig::default() };
        let mut state = boa_init(&config, &obj, seed).unwrap();
        let mut best = state.best_fitness;
        for _ in 0..15 {
            boa_cycle(&mut state, &config, &obj).unwrap();
            prop_assert_eq!(state.sites.len(), 10);
            prop_assert!(state.best_fitness <= best);
            best = state.best_fitness;
        }
    }
}

fn rippled_any(x: &[f64]) -> f64 {
    x.iter().map(|v| (v - 0.5).powi(2) + 0.2 * (4.0 * v).cos()).sum()
}
