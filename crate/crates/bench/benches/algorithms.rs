use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secretary_core::algorithms::{dynkin, kleinberg, learned_dynkin, learned_kleinberg, top_k_prediction};
use secretary_core::generators::generate;
use secretary_core::simulate::{estimate_ratio, exact_ratio_small};
use secretary_core::{
    random_schedule, AlgorithmSpec, ClassicalParams, ErrorRule, GeneratorKind, GeneratorSpec, Instance, MultiParams,
};

fn dataset(n: usize, k: usize) -> Instance {
    generate(&GeneratorSpec { kind: GeneratorKind::Uniform, n, k, epsilon: 0.3, seed: 11 }).unwrap()
}

fn single_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("run");
    for n in [100, 1000] {
        let one = dataset(n, 1);
        let many = dataset(n, n / 10);
        let s = random_schedule(n, &mut ChaCha8Rng::seed_from_u64(1));
        let cp = ClassicalParams::GUARANTEED;
        let mp = MultiParams::new(0.5, ErrorRule::Global).unwrap();
        group.bench_with_input(BenchmarkId::new("dynkin", n), &n, |b, _| b.iter(|| dynkin(black_box(&one), &s, 0.37)));
        group.bench_with_input(BenchmarkId::new("learned-dynkin", n), &n, |b, _| {
            b.iter(|| learned_dynkin(black_box(&one), &s, &cp))
        });
        group.bench_with_input(BenchmarkId::new("kleinberg", n), &n, |b, _| {
            b.iter(|| kleinberg(black_box(&many), &s, many.capacity(), (0.0, 1.0)))
        });
        group.bench_with_input(BenchmarkId::new("learned-kleinberg", n), &n, |b, _| {
            b.iter(|| learned_kleinberg(black_box(&many), &s, &mp))
        });
        group.bench_with_input(BenchmarkId::new("top-k", n), &n, |b, _| {
            b.iter(|| top_k_prediction(black_box(&many), &s))
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let inst = dataset(100, 1);
    let spec = AlgorithmSpec::LearnedDynkin(ClassicalParams::GUARANTEED);
    c.bench_function("estimate_ratio/100x1000", |b| {
        b.iter(|| estimate_ratio(&inst, &spec, 1000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap())
    });

    let small = dataset(6, 2);
    let lk = AlgorithmSpec::LearnedKleinberg(MultiParams::new(0.3, ErrorRule::Global).unwrap());
    c.bench_function("exact_ratio_small/n6", |b| b.iter(|| exact_ratio_small(black_box(&small), &lk).unwrap()));
}

criterion_group!(benches, single_run, evaluation);
criterion_main!(benches);
