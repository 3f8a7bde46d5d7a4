use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use cobacs_core::decision::{Archetype, ConfidencePolicy, TypeTwoThresholds};
use cobacs_core::population::{
    generate_population, run_population, simulate_response_matrix, sweep, FilterGrid,
    PopulationSpec,
};
use cobacs_core::{
    auroc2_score, expected_error_cobacs, expected_error_rebacs, gauss_upper_tail,
    gauss_upper_tail_inv, majority_vote, performance_to_mu, stats, weighted_majority_vote,
    OptionLabel, PopulationMoments, TrialRecord, WorkerModel,
};

fn bench_stats(c: &mut Criterion) {
    c.bench_function("gauss_upper_tail", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..100 {
                acc += gauss_upper_tail(black_box(-4.0 + 0.08 * i as f64)).unwrap();
            }
            acc
        })
    });
    c.bench_function("gauss_upper_tail_inv", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..100 {
                acc += gauss_upper_tail_inv(black_box(i as f64 / 100.0)).unwrap();
            }
            acc
        })
    });
}

fn bench_aggregation(c: &mut Criterion) {
    let spec = PopulationSpec {
        seed: 42,
        ..PopulationSpec::default()
    };
    let workers = generate_population(&spec).unwrap();
    let matrix = simulate_response_matrix(&workers, 200, 0.5, 7).unwrap();
    c.bench_function("majority_vote_100x200", |b| {
        b.iter(|| majority_vote(black_box(&matrix)).unwrap())
    });
    c.bench_function("weighted_majority_vote_100x200", |b| {
        b.iter(|| weighted_majority_vote(black_box(&matrix)).unwrap())
    });
}

fn bench_simulation(c: &mut Criterion) {
    let spec = PopulationSpec {
        seed: 42,
        ..PopulationSpec::default()
    };
    let workers = generate_population(&spec).unwrap();
    c.bench_function("run_population_100x200", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            run_population(black_box(&workers), 200, 0.5, seed).unwrap()
        })
    });
    c.bench_function("sweep_20_replicates_no_filter", |b| {
        b.iter_batched(
            || (spec.clone(), FilterGrid::no_filter()),
            |(spec, grid)| sweep(&spec, &grid, 20, black_box(3)).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_analytic(c: &mut Criterion) {
    let worker = WorkerModel::new(
        0,
        performance_to_mu(0.65).unwrap(),
        ConfidencePolicy::Thresholds(
            TypeTwoThresholds::symmetric(0.0, &[0.5, 1.0, 1.5, 2.0]).unwrap(),
        ),
    );
    c.bench_function("expected_errors_from_worker", |b| {
        b.iter(|| {
            let pm = PopulationMoments::from_worker(black_box(&worker), 101, [0.5, 0.5]).unwrap();
            (
                expected_error_rebacs(&pm).unwrap(),
                expected_error_cobacs(&pm).unwrap(),
            )
        })
    });
}

fn bench_roc(c: &mut Criterion) {
    let worker = WorkerModel::new(
        0,
        performance_to_mu(0.65).unwrap(),
        ConfidencePolicy::archetype(Archetype::High, 5).unwrap(),
    );
    let trials: Vec<TrialRecord> = (0..200u64)
        .map(|s| {
            let truth = if s % 2 == 0 {
                OptionLabel::One
            } else {
                OptionLabel::Two
            };
            let d = worker.simulate_decision(truth, stats::derive_seed(5, &[s]));
            TrialRecord::new(d.response, truth, d.confidence)
        })
        .collect();
    c.bench_function("auroc2_200_trials", |b| {
        b.iter(|| auroc2_score(black_box(&trials), 5).unwrap())
    });
}

criterion_group!(
    benches,
    bench_stats,
    bench_aggregation,
    bench_simulation,
    bench_analytic,
    bench_roc
);
criterion_main!(benches);
